#include "seqlaw/line_fit.hpp"

#include "seqlaw/error.hpp"
#include "seqlaw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace seqlaw {

LineFit ols_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw DataError("ols_fit: length mismatch");
    const std::size_t n = xs.size();
    if (n < 2) throw DegenerateFitError("ols_fit: need at least 2 points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0) throw DegenerateFitError("ols_fit: all x values equal");

    LineFit fit;
    fit.n_points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.sigma_x = std::sqrt(sxx / static_cast<double>(n));
    fit.sigma_y = std::sqrt(syy / static_cast<double>(n));
    fit.r = syy == 0.0 ? 0.0 : std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    return fit;
}

std::size_t RansacFit::inlier_count() const {
    return static_cast<std::size_t>(std::count(inlier_mask.begin(), inlier_mask.end(), true));
}

RansacFit ransac_fit(std::span<const Point> points, double threshold,
                     std::size_t iterations, std::uint64_t seed) {
    const std::size_t n = points.size();
    if (n < 2) throw DegenerateFitError("ransac_fit: need at least 2 points");
    if (!(threshold > 0.0)) throw DataError("ransac_fit: threshold must be positive");
    if (iterations < 1) throw DataError("ransac_fit: iterations must be >= 1");

    Rng rng(seed);
    std::vector<bool> best_mask;
    std::size_t best_count = 0;
    std::vector<bool> mask(n);

    for (std::size_t it = 0; it < iterations; ++it) {
        const std::size_t i = rng.index(n);
        std::size_t j = rng.index(n - 1);
        if (j >= i) ++j;
        const Point a = points[i];
        const Point b = points[j];
        if (a.x == b.x) continue; // vertical, cannot be written as y = sx + c
        const double slope = (b.y - a.y) / (b.x - a.x);
        const double intercept = a.y - slope * a.x;

        std::size_t count = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const double resid = points[k].y - (slope * points[k].x + intercept);
            mask[k] = std::abs(resid) <= threshold;
            if (mask[k]) ++count;
        }
        if (count > best_count) {
            best_count = count;
            best_mask = mask;
        }
    }

    if (best_count < 2) {
        throw DegenerateFitError("ransac_fit: no consensus set of size >= 2");
    }

    std::vector<double> xs, ys;
    xs.reserve(best_count);
    ys.reserve(best_count);
    for (std::size_t k = 0; k < n; ++k) {
        if (best_mask[k]) {
            xs.push_back(points[k].x);
            ys.push_back(points[k].y);
        }
    }

    RansacFit out;
    out.inlier_fit = ols_fit(xs, ys); // may throw DegenerateFitError
    out.slope = out.inlier_fit.slope;
    out.intercept = out.inlier_fit.intercept;
    out.inlier_mask = std::move(best_mask);
    out.params = RansacParams{threshold, iterations, seed};
    return out;
}

} // namespace seqlaw
