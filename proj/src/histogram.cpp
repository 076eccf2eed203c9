#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dynot/color.hpp"
#include "dynot/errors.hpp"

namespace dynot {

std::vector<std::size_t> target_counts(const CyclicHistogram& target, std::size_t n) {
    const std::size_t bins = target.size();
    if (bins == 0) throw InvalidParams("target histogram is empty");
    double total = 0.0;
    for (double x : target.bins) {
        if (!(x >= 0.0)) throw InvalidParams("target histogram has a negative or NaN bin");
        total += x;
    }
    if (!(total > 0.0)) throw ZeroMass("target histogram has zero mass");

    // Largest-remainder rounding; ties go to the lower bin index.
    std::vector<std::size_t> counts(bins);
    std::vector<double> remainder(bins);
    std::size_t assigned = 0;
    for (std::size_t b = 0; b < bins; ++b) {
        const double exact = static_cast<double>(n) * target.bins[b] / total;
        const double whole = std::floor(exact);
        counts[b] = static_cast<std::size_t>(whole);
        remainder[b] = exact - whole;
        assigned += counts[b];
    }
    std::vector<std::size_t> order(bins);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    // The floors never overshoot n, and the shortfall is below the bin count.
    for (std::size_t i = 0; assigned < n; i = (i + 1) % bins) {
        ++counts[order[i]];
        ++assigned;
    }
    return counts;
}

std::size_t choose_cut(const CyclicHistogram& current, const CyclicHistogram& target) {
    if (current.size() != target.size() || current.size() == 0) {
        throw DimensionMismatch("histograms differ in bin count");
    }
    std::size_t best = 0;
    for (std::size_t b = 1; b < current.size(); ++b) {
        if (current.bins[b] + target.bins[b] < current.bins[best] + target.bins[best]) best = b;
    }
    return best;
}

std::vector<double> specify_histogram(std::span<const double> values, std::size_t cut,
                                      const CyclicHistogram& target) {
    const std::size_t bins = target.size();
    if (cut >= bins) throw InvalidParams("cut bin " + std::to_string(cut) + " out of range");
    const std::size_t n = values.size();
    if (n == 0) return {};

    // Position on the circle opened at the start of the cut bin.
    const double origin = static_cast<double>(cut) / static_cast<double>(bins);
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i) {
        double w = values[i] - origin;
        w -= std::floor(w);
        key[i] = w;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });

    const auto counts = target_counts(target, n);
    std::vector<double> out(n);
    std::size_t next = 0;
    for (std::size_t k = 0; k < bins; ++k) {
        const std::size_t b = (cut + k) % bins;
        const double centre = target.center(b);
        for (std::size_t c = 0; c < counts[b]; ++c) out[order[next++]] = centre;
    }
    return out;
}

HueTransferResult hue_transfer(const RgbImage& img0, const RgbImage& img1, std::size_t bins,
                               std::size_t time_steps, const SolverParams& params,
                               const PdhgSolver::Observer& observer) {
    const HsvImage hsv0 = rgb_to_hsv(img0);
    const HsvImage hsv1 = rgb_to_hsv(img1);
    const CyclicHistogram h0 = hue_histogram(hsv0, bins);
    const CyclicHistogram h1 = hue_histogram(hsv1, bins);

    HistogramTransport transport = cyclic_histogram_transport(h0, h1, time_steps, params, observer);

    // Only pixels with a defined hue take part; the rest keep theirs.
    std::vector<std::size_t> colored;
    std::vector<double> hues;
    for (std::size_t i = 0; i < hsv0.h.size(); ++i) {
        if (hsv0.s[i] > 0.0) {
            colored.push_back(i);
            hues.push_back(hsv0.h[i]);
        }
    }

    std::vector<HsvImage> hsv_frames;
    std::vector<RgbImage> rgb_frames;
    for (const CyclicHistogram& target : transport.frames) {
        const auto specified = specify_histogram(hues, choose_cut(h0, target), target);
        HsvImage frame = hsv0;
        for (std::size_t j = 0; j < colored.size(); ++j) frame.h[colored[j]] = specified[j];
        rgb_frames.push_back(hsv_to_rgb(frame));
        hsv_frames.push_back(std::move(frame));
    }
    return HueTransferResult{std::move(hsv_frames), std::move(rgb_frames), std::move(transport.frames),
                             std::move(transport.solution)};
}

}  // namespace dynot
