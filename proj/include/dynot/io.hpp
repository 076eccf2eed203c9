#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dynot/color.hpp"

namespace dynot {

/// 8-bit RGB images. The format follows the extension: .png or .ppm (binary P6).
/// Channels map to [0, 1] by /255; saving clamps to [0, 1] and rounds.
RgbImage load_image(const std::filesystem::path& path);
void save_image(const RgbImage& img, const std::filesystem::path& path);

/// Dense float64 array, axis 0 fastest.
struct Tensor {
    std::vector<std::uint64_t> dims;
    std::vector<double> data;

    std::uint64_t element_count() const;
};

/**
 * Tensor file layout, all little-endian:
 *   "DOTTENS1" | u32 ndims | u64 dims[ndims] | f64 data[prod(dims)]
 */
Tensor load_tensor(const std::filesystem::path& path);
void save_tensor(const Tensor& tensor, const std::filesystem::path& path);

}  // namespace dynot
