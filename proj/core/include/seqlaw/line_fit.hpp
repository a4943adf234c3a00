#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace seqlaw {

// Ordinary least-squares line with Pearson correlation. sigma_x / sigma_y
// are population standard deviations, so slope == r * sigma_y / sigma_x
// whenever sigma_x > 0.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r = 0.0;
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    std::size_t n_points = 0;
};

// Throws DegenerateFitError when fewer than 2 points or all xs equal.
// When the ys carry no spread the fit is the horizontal line with r = 0.
LineFit ols_fit(std::span<const double> xs, std::span<const double> ys);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct RansacParams {
    double threshold = 0.05;
    std::size_t iterations = 2000;
    std::uint64_t seed = 0;
};

struct RansacFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<bool> inlier_mask;
    LineFit inlier_fit;
    RansacParams params;

    std::size_t inlier_count() const;
};

// Two-point-sample RANSAC with vertical residuals: `iterations` times, draw
// two distinct points, form their line, count points with |residual| <=
// threshold; keep the largest consensus set (first winner on ties) and refit
// it by OLS. Deterministic for a fixed seed. Throws DegenerateFitError when
// no consensus set of size >= 2 exists.
RansacFit ransac_fit(std::span<const Point> points, double threshold,
                     std::size_t iterations, std::uint64_t seed);

} // namespace seqlaw
