#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "dynot/errors.hpp"
#include "dynot/io.hpp"

namespace dynot {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

std::uint8_t to_byte(double x) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
}

// Reads the next header token of a PNM file, skipping whitespace and comments.
std::string pnm_token(const std::vector<unsigned char>& buf, std::size_t& pos) {
    while (pos < buf.size()) {
        if (buf[pos] == '#') {
            while (pos < buf.size() && buf[pos] != '\n') ++pos;
        } else if (std::isspace(buf[pos])) {
            ++pos;
        } else {
            break;
        }
    }
    std::string token;
    while (pos < buf.size() && !std::isspace(buf[pos]) && buf[pos] != '#') token.push_back(static_cast<char>(buf[pos++]));
    return token;
}

std::size_t pnm_number(const std::vector<unsigned char>& buf, std::size_t& pos, const std::string& path) {
    const std::string token = pnm_token(buf, pos);
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw IoError(path + ": malformed PPM header");
    }
    return std::stoul(token);
}

RgbImage load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::size_t pos = 0;
    const std::string magic = pnm_token(buf, pos);
    if (magic != "P6") throw UnsupportedFormat(path.string() + ": only binary PPM (P6) is supported");
    const std::size_t width = pnm_number(buf, pos, path.string());
    const std::size_t height = pnm_number(buf, pos, path.string());
    const std::size_t maxval = pnm_number(buf, pos, path.string());
    if (maxval != 255) throw UnsupportedFormat(path.string() + ": only 8-bit PPM (maxval 255) is supported");
    if (width == 0 || height == 0) throw IoError(path.string() + ": empty image");
    ++pos;  // single whitespace byte before the raster

    const std::size_t bytes = width * height * 3;
    if (pos > buf.size() || buf.size() - pos < bytes) throw IoError(path.string() + ": truncated PPM raster");
    RgbImage img(width, height);
    for (std::size_t i = 0; i < bytes; ++i) img.pixels[i] = buf[pos + i] / 255.0;
    return img;
}

void save_ppm(const RgbImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    std::vector<char> raster(img.pixels.size());
    std::transform(img.pixels.begin(), img.pixels.end(), raster.begin(), [](double x) { return static_cast<char>(to_byte(x)); });
    out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

RgbImage load_png(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        throw IoError(path.string() + ": " + image.message);
    }
    image.format = PNG_FORMAT_RGB;
    std::vector<png_byte> raster(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, raster.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw IoError(path.string() + ": " + msg);
    }
    RgbImage img(image.width, image.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = raster[i] / 255.0;
    return img;
}

void save_png(const RgbImage& img, const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    image.format = PNG_FORMAT_RGB;
    std::vector<png_byte> raster(img.pixels.size());
    std::transform(img.pixels.begin(), img.pixels.end(), raster.begin(), to_byte);
    if (!png_image_write_to_file(&image, path.c_str(), 0, raster.data(), 0, nullptr)) {
        throw IoError(path.string() + ": " + image.message);
    }
}

}  // namespace

RgbImage load_image(const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
    if (ext == ".ppm") return load_ppm(path);
    if (ext == ".png") return load_png(path);
    throw UnsupportedFormat(path.string() + ": unknown image extension '" + ext + "'");
}

void save_image(const RgbImage& img, const std::filesystem::path& path) {
    if (img.pixels.size() != img.width * img.height * 3) throw ShapeMismatch("image pixel buffer has the wrong size");
    const std::string ext = lower_extension(path);
    if (ext == ".ppm") return save_ppm(img, path);
    if (ext == ".png") return save_png(img, path);
    throw UnsupportedFormat(path.string() + ": unknown image extension '" + ext + "'");
}

}  // namespace dynot
