#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "dynot/errors.hpp"
#include "dynot/io.hpp"

namespace dynot {

namespace {

constexpr std::array<char, 8> kMagic = {'D', 'O', 'T', 'T', 'E', 'N', 'S', '1'};

template <typename U>
void put_le(std::string& out, U value) {
    for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFFu));
}

template <typename U>
U get_le(const std::string& in, std::size_t pos) {
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        value |= static_cast<U>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
    }
    return value;
}

}  // namespace

std::uint64_t Tensor::element_count() const {
    std::uint64_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

Tensor load_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
        throw BadMagic(path.string() + ": not a DOTTENS1 tensor file");
    }
    const auto ndims = get_le<std::uint32_t>(bytes, 8);
    const std::size_t header = 12 + 8 * static_cast<std::size_t>(ndims);
    if (bytes.size() < header) throw SizeMismatch(path.string() + ": header truncated");

    Tensor t;
    for (std::uint32_t i = 0; i < ndims; ++i) t.dims.push_back(get_le<std::uint64_t>(bytes, 12 + 8 * i));
    const std::uint64_t count = t.element_count();
    if (bytes.size() - header != 8 * count) {
        throw SizeMismatch(path.string() + ": dims imply " + std::to_string(count) + " values but file holds " +
                           std::to_string((bytes.size() - header) / 8.0));
    }
    t.data.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        t.data[i] = std::bit_cast<double>(get_le<std::uint64_t>(bytes, header + 8 * i));
    }
    return t;
}

void save_tensor(const Tensor& tensor, const std::filesystem::path& path) {
    if (tensor.element_count() != tensor.data.size()) {
        throw SizeMismatch("tensor dims imply " + std::to_string(tensor.element_count()) + " values, data has " +
                           std::to_string(tensor.data.size()));
    }
    std::string out(kMagic.begin(), kMagic.end());
    put_le(out, static_cast<std::uint32_t>(tensor.dims.size()));
    for (auto d : tensor.dims) put_le(out, d);
    for (double x : tensor.data) put_le(out, std::bit_cast<std::uint64_t>(x));

    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write " + path.string());
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw IoError("failed writing " + path.string());
}

}  // namespace dynot
