#include <algorithm>
#include <cmath>
#include <string>

#include "dynot/errors.hpp"
#include "dynot/solver.hpp"

namespace dynot {

QuantileTransport quantile_transport_1d(std::span<const double> f0, std::span<const double> f1,
                                        std::span<const double> times) {
    const std::size_t n = f0.size();
    if (n == 0 || f1.size() != n) throw ShapeMismatch("quantile transport needs equal, nonempty histograms");
    double m0 = 0.0;
    double m1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!(f0[j] >= 0.0) || !(f1[j] >= 0.0)) throw InvalidParams("histograms must be nonnegative");
        m0 += f0[j];
        m1 += f1[j];
    }
    if (std::abs(m0 - m1) > 1e-12 * std::max(m0, m1)) {
        throw MassMismatch("quantile transport masses differ: " + std::to_string(m0) + " vs " +
                           std::to_string(m1));
    }

    const double nd = static_cast<double>(n);
    auto midpoint = [nd](std::size_t j) { return (static_cast<double>(j) + 0.5) / nd; };

    QuantileTransport out;
    out.frames.assign(times.size(), std::vector<double>(n, 0.0));

    // Monotone matching: consume both histograms left to right.
    std::size_t i = 0;
    std::size_t j = 0;
    double left0 = n > 0 ? f0[0] : 0.0;
    double left1 = n > 0 ? f1[0] : 0.0;
    while (i < n && j < n) {
        if (left0 <= 0.0) {
            if (++i < n) left0 = f0[i];
            continue;
        }
        if (left1 <= 0.0) {
            if (++j < n) left1 = f1[j];
            continue;
        }
        const double w = std::min(left0, left1);
        const double x = midpoint(i);
        const double y = midpoint(j);
        out.w2_squared += w * (y - x) * (y - x);
        for (std::size_t t = 0; t < times.size(); ++t) {
            const double z = (1.0 - times[t]) * x + times[t] * y;
            const double s = std::clamp(z * nd - 0.5, 0.0, nd - 1.0);
            const auto k = static_cast<std::size_t>(std::floor(s));
            const double frac = s - static_cast<double>(k);
            out.frames[t][k] += (1.0 - frac) * w;
            if (frac > 0.0) out.frames[t][k + 1] += frac * w;
        }
        left0 -= w;
        left1 -= w;
        // Exhaust whichever side the piece used up, so rounding cannot leave
        // a sliver that pairs with the wrong cell.
        if (left0 <= 1e-15 * m0) left0 = 0.0;
        if (left1 <= 1e-15 * m1) left1 = 0.0;
    }
    return out;
}

}  // namespace dynot
