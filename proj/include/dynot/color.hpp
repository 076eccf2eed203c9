#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dynot/grid.hpp"
#include "dynot/solver.hpp"

namespace dynot {

/// Interleaved RGB triples in raster order (x fastest), channels in [0, 1].
struct RgbImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> pixels;

    RgbImage() = default;
    RgbImage(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h * 3, 0.0) {}

    std::size_t pixel_count() const { return width * height; }
    double& at(std::size_t x, std::size_t y, std::size_t c) { return pixels[(y * width + x) * 3 + c]; }
    double at(std::size_t x, std::size_t y, std::size_t c) const { return pixels[(y * width + x) * 3 + c]; }
};

/// Planar HSV channels in raster order; hue is cyclic in [0, 1).
struct HsvImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> h;
    std::vector<double> s;
    std::vector<double> v;
};

/// Normalized histogram on the hue circle; bin b covers [b/B, (b+1)/B).
struct CyclicHistogram {
    std::vector<double> bins;

    std::size_t size() const { return bins.size(); }
    std::size_t bin_of(double value) const;
    double center(std::size_t b) const { return (static_cast<double>(b) + 0.5) / static_cast<double>(bins.size()); }
};

struct NormalizedPair {
    std::vector<double> f0;
    std::vector<double> f1;
    double scale0 = 1.0;
    double scale1 = 1.0;

    /// Factor mapping a unit-mass frame at time t back to the input range.
    double display_factor(double t) const { return 1.0 / ((1.0 - t) * scale0 + t * scale1); }
};

/// Rescales both densities to unit mass. Throws ZeroMass if either mass is not positive.
NormalizedPair normalize_masses(std::span<const double> f0, std::span<const double> f1);

/// Image as a density on the axes (height, width, color), height fastest.
std::vector<double> image_to_density(const RgbImage& img);
RgbImage density_to_image(std::span<const double> density, std::size_t width, std::size_t height,
                          double factor);
GridSpec rgb_grid(std::size_t width, std::size_t height, std::size_t time_steps, Boundary color_bc);

struct RgbTransportResult {
    std::vector<RgbImage> frames;               // p+1 display frames, clipped to [0, 1]
    std::vector<std::vector<double>> densities;  // p+1 unit-mass density frames
    SolveResult solution;
    NormalizedPair normalized;
};

RgbTransportResult rgb_transport(const RgbImage& img0, const RgbImage& img1, std::size_t time_steps,
                                 const SolverParams& params, Boundary color_bc = Boundary::Periodic,
                                 const PdhgSolver::Observer& observer = {});

/// Hexcone conversion. Hue is 0 where saturation is 0.
HsvImage rgb_to_hsv(const RgbImage& img);
RgbImage hsv_to_rgb(const HsvImage& img);

/// Hue histogram over the pixels with s > 0. Throws EmptyHue if there are none.
CyclicHistogram hue_histogram(const HsvImage& img, std::size_t bins);

struct HistogramTransport {
    std::vector<CyclicHistogram> frames;  // p+1, each renormalized to sum 1
    SolveResult solution;
};

HistogramTransport cyclic_histogram_transport(const CyclicHistogram& h0, const CyclicHistogram& h1,
                                              std::size_t time_steps, const SolverParams& params,
                                              const PdhgSolver::Observer& observer = {});

/// Integer bin counts for n samples that differ from n*target_b by less than 1.
std::vector<std::size_t> target_counts(const CyclicHistogram& target, std::size_t n);

/// Bin minimizing current + target density, where the hue circle is cut open.
std::size_t choose_cut(const CyclicHistogram& current, const CyclicHistogram& target);

/**
 * Exact histogram specification on the circle: unroll at `cut`, stable-sort
 * the values (ties keep input order), hand the sorted values to the target
 * bins in unrolled order using target_counts, and return each value replaced
 * by the centre of its assigned bin.
 */
std::vector<double> specify_histogram(std::span<const double> values, std::size_t cut,
                                      const CyclicHistogram& target);

struct HueTransferResult {
    std::vector<HsvImage> hsv_frames;
    std::vector<RgbImage> rgb_frames;
    std::vector<CyclicHistogram> histograms;
    SolveResult solution;
};

/// Transports the hue histogram of img0 to that of img1 and re-renders img0's
/// hue against each intermediate histogram, keeping img0's s and v.
HueTransferResult hue_transfer(const RgbImage& img0, const RgbImage& img1, std::size_t bins,
                               std::size_t time_steps, const SolverParams& params,
                               const PdhgSolver::Observer& observer = {});

}  // namespace dynot
