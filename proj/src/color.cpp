#include "dynot/color.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynot/errors.hpp"

namespace dynot {

NormalizedPair normalize_masses(std::span<const double> f0, std::span<const double> f1) {
    double m0 = 0.0;
    double m1 = 0.0;
    for (double x : f0) m0 += x;
    for (double x : f1) m1 += x;
    if (!(m0 > 0.0) || !(m1 > 0.0)) {
        throw ZeroMass("both densities need positive mass (got " + std::to_string(m0) + " and " +
                       std::to_string(m1) + ")");
    }
    NormalizedPair out;
    out.scale0 = 1.0 / m0;
    out.scale1 = 1.0 / m1;
    out.f0.reserve(f0.size());
    out.f1.reserve(f1.size());
    for (double x : f0) out.f0.push_back(x * out.scale0);
    for (double x : f1) out.f1.push_back(x * out.scale1);
    return out;
}

GridSpec rgb_grid(std::size_t width, std::size_t height, std::size_t time_steps, Boundary color_bc) {
    return GridSpec({{height, Boundary::Neumann}, {width, Boundary::Neumann}, {3, color_bc}}, time_steps);
}

std::vector<double> image_to_density(const RgbImage& img) {
    const std::size_t w = img.width;
    const std::size_t h = img.height;
    std::vector<double> density(w * h * 3);
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t x = 0; x < w; ++x) {
            for (std::size_t y = 0; y < h; ++y) density[y + h * (x + w * c)] = img.at(x, y, c);
        }
    }
    return density;
}

RgbImage density_to_image(std::span<const double> density, std::size_t width, std::size_t height,
                          double factor) {
    if (density.size() != width * height * 3) throw ShapeMismatch("density does not match image size");
    RgbImage img(width, height);
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t x = 0; x < width; ++x) {
            for (std::size_t y = 0; y < height; ++y) {
                img.at(x, y, c) = std::clamp(factor * density[y + height * (x + width * c)], 0.0, 1.0);
            }
        }
    }
    return img;
}

RgbTransportResult rgb_transport(const RgbImage& img0, const RgbImage& img1, std::size_t time_steps,
                                 const SolverParams& params, Boundary color_bc,
                                 const PdhgSolver::Observer& observer) {
    if (img0.width != img1.width || img0.height != img1.height) {
        throw DimensionMismatch("images differ in size: " + std::to_string(img0.width) + "x" +
                                std::to_string(img0.height) + " vs " + std::to_string(img1.width) +
                                "x" + std::to_string(img1.height));
    }
    const auto d0 = image_to_density(img0);
    const auto d1 = image_to_density(img1);
    NormalizedPair norm = normalize_masses(d0, d1);

    TransportProblem problem{rgb_grid(img0.width, img0.height, time_steps, color_bc), norm.f0, norm.f1};
    SolveResult solution = solve_transport(problem, params, observer);

    RgbTransportResult out{{}, density_frames(problem, solution.f), std::move(solution), std::move(norm)};
    const double pd = static_cast<double>(time_steps);
    for (std::size_t k = 0; k <= time_steps; ++k) {
        if (k == 0) {
            out.frames.push_back(img0);
        } else if (k == time_steps) {
            out.frames.push_back(img1);
        } else {
            const double t = static_cast<double>(k) / pd;
            out.frames.push_back(density_to_image(out.densities[k], img0.width, img0.height,
                                                  out.normalized.display_factor(t)));
        }
    }
    return out;
}

HsvImage rgb_to_hsv(const RgbImage& img) {
    HsvImage out{img.width, img.height, {}, {}, {}};
    const std::size_t n = img.pixel_count();
    out.h.resize(n);
    out.s.resize(n);
    out.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = img.pixels[3 * i];
        const double g = img.pixels[3 * i + 1];
        const double b = img.pixels[3 * i + 2];
        const double mx = std::max({r, g, b});
        const double mn = std::min({r, g, b});
        const double chroma = mx - mn;
        double hue = 0.0;
        if (chroma > 0.0) {
            if (mx == r) {
                hue = (g - b) / chroma;
                if (hue < 0.0) hue += 6.0;
            } else if (mx == g) {
                hue = (b - r) / chroma + 2.0;
            } else {
                hue = (r - g) / chroma + 4.0;
            }
            hue /= 6.0;
            if (hue >= 1.0) hue -= 1.0;
        }
        out.h[i] = hue;
        out.s[i] = mx > 0.0 ? chroma / mx : 0.0;
        out.v[i] = mx;
    }
    return out;
}

RgbImage hsv_to_rgb(const HsvImage& img) {
    RgbImage out(img.width, img.height);
    const std::size_t n = img.width * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = img.s[i];
        const double v = img.v[i];
        double h6 = img.h[i] * 6.0;
        const double sector = std::floor(h6);
        const double frac = h6 - sector;
        const int k = static_cast<int>(sector) % 6;
        const double p = v * (1.0 - s);
        const double q = v * (1.0 - s * frac);
        const double t = v * (1.0 - s * (1.0 - frac));
        double r = v, g = v, b = v;
        switch (k) {
            case 0: r = v; g = t; b = p; break;
            case 1: r = q; g = v; b = p; break;
            case 2: r = p; g = v; b = t; break;
            case 3: r = p; g = q; b = v; break;
            case 4: r = t; g = p; b = v; break;
            default: r = v; g = p; b = q; break;
        }
        out.pixels[3 * i] = r;
        out.pixels[3 * i + 1] = g;
        out.pixels[3 * i + 2] = b;
    }
    return out;
}

std::size_t CyclicHistogram::bin_of(double value) const {
    const double bins_d = static_cast<double>(bins.size());
    double wrapped = value - std::floor(value);
    auto b = static_cast<std::size_t>(wrapped * bins_d);
    return std::min(b, bins.size() - 1);
}

CyclicHistogram hue_histogram(const HsvImage& img, std::size_t bins) {
    if (bins < 2) throw InvalidParams("hue histogram needs at least 2 bins");
    CyclicHistogram hist{std::vector<double>(bins, 0.0)};
    std::size_t counted = 0;
    for (std::size_t i = 0; i < img.h.size(); ++i) {
        if (img.s[i] > 0.0) {
            hist.bins[hist.bin_of(img.h[i])] += 1.0;
            ++counted;
        }
    }
    if (counted == 0) throw EmptyHue("every pixel has zero saturation; hue is undefined");
    for (double& b : hist.bins) b /= static_cast<double>(counted);
    return hist;
}

HistogramTransport cyclic_histogram_transport(const CyclicHistogram& h0, const CyclicHistogram& h1,
                                              std::size_t time_steps, const SolverParams& params,
                                              const PdhgSolver::Observer& observer) {
    if (h0.size() != h1.size()) throw DimensionMismatch("histograms differ in bin count");
    NormalizedPair norm = normalize_masses(h0.bins, h1.bins);
    TransportProblem problem{GridSpec({{h0.size(), Boundary::Periodic}}, time_steps), norm.f0, norm.f1};
    HistogramTransport out{{}, solve_transport(problem, params, observer)};
    for (auto& frame : density_frames(problem, out.solution.f)) {
        // Iterates may dip slightly below zero; a histogram cannot.
        double total = 0.0;
        for (double& x : frame) {
            x = std::max(x, 0.0);
            total += x;
        }
        for (double& x : frame) x /= total;
        out.frames.push_back(CyclicHistogram{std::move(frame)});
    }
    return out;
}

}  // namespace dynot
