#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seqlaw/error.hpp"
#include "seqlaw/line_fit.hpp"
#include "seqlaw/moments.hpp"
#include "seqlaw/rng.hpp"
#include "seqlaw/wide_real.hpp"

#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace seqlaw;

TEST_CASE("rng is deterministic and in range") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    Rng r(7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(r.below(13) < 13);
        const double u = r.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }

    Rng s1 = Rng::stream(1, 0);
    Rng s2 = Rng::stream(1, 1);
    CHECK(s1.next() != s2.next());
}

TEST_CASE("wide real from integers") {
    CHECK(WideReal::from_integer(BigInt(0)).is_zero());
    CHECK(WideReal::from_integer(BigInt(0)).mantissa() == 0.0);
    CHECK(WideReal::from_integer(BigInt(0)).exponent2() == 0);

    // Small integers are exact.
    CHECK(WideReal::from_integer(BigInt(-5)).to_double() == -5.0);
    CHECK(WideReal::from_integer(BigInt(1)).to_double() == 1.0);
    CHECK(WideReal::from_integer(BigInt(123456789)).to_double() == 123456789.0);

    // 10^309 overflows binary64 but keeps a finite natural log.
    BigInt big = 1;
    for (int i = 0; i < 309; ++i) big *= 10;
    const WideReal w = WideReal::from_integer(big);
    const double expected = 309.0 * std::log(10.0);
    CHECK(std::abs(w.ln() - expected) / expected < 1e-9);
    CHECK(std::isinf(w.to_double()));

    // Relative error within 2^-50 against the digit-count oracle.
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::string digits = std::to_string(1 + rng.below(9));
        const std::size_t len = 1 + rng.below(400);
        for (std::size_t i = 0; i < len; ++i) digits += char('0' + rng.below(10));
        const BigInt value(digits);
        const std::size_t take = std::min<std::size_t>(digits.size(), 17);
        const double oracle_ln =
            std::log(std::stod(digits.substr(0, take))) +
            static_cast<double>(digits.size() - take) * std::log(10.0);
        CHECK(std::abs(WideReal::from_integer(value).ln() - oracle_ln) <
              1e-9 * std::max(1.0, std::abs(oracle_ln)));
    }
}

TEST_CASE("wide real arithmetic matches double in range") {
    Rng rng(1234);
    for (int i = 0; i < 2000; ++i) {
        const double a = (rng.unit() - 0.5) * 1e6;
        const double b = (rng.unit() - 0.5) * 1e6;
        const WideReal wa = WideReal::from_double(a);
        const WideReal wb = WideReal::from_double(b);
        CHECK((wa + wb).to_double() == doctest::Approx(a + b).epsilon(1e-14));
        CHECK((wa - wb).to_double() == doctest::Approx(a - b).epsilon(1e-14));
        CHECK((wa * wb).to_double() == doctest::Approx(a * b).epsilon(1e-14));
        if (b != 0.0) {
            CHECK((wa / wb).to_double() == doctest::Approx(a / b).epsilon(1e-14));
        }
        CHECK((wa < wb) == (a < b));
    }

    // Normalization invariant: |mantissa| in [1,2) for nonzero values.
    for (int i = 0; i < 200; ++i) {
        const WideReal w = WideReal::from_double((rng.unit() - 0.5) * 1e12);
        if (!w.is_zero()) {
            CHECK(std::abs(w.mantissa()) >= 1.0);
            CHECK(std::abs(w.mantissa()) < 2.0);
        }
    }

    CHECK_THROWS_AS(WideReal::from_double(-1.0).ln(), DataError);
    CHECK_THROWS_AS(WideReal::from_double(1.0) / WideReal(), DataError);
}

TEST_CASE("running moments on small sequences") {
    const std::vector<BigInt> terms = {1, 2, 3};
    const RunningMoments m = running_moments(terms);
    CHECK(m.mu[0].to_double() == doctest::Approx(1.0));
    CHECK(m.mu[1].to_double() == doctest::Approx(1.5));
    CHECK(m.mu[2].to_double() == doctest::Approx(2.0));
    CHECK(m.var[0].to_double() == 0.0);
    CHECK(m.var[1].to_double() == doctest::Approx(0.5));
    CHECK(m.var[2].to_double() == doctest::Approx(1.0));

    const std::vector<BigInt> constant = {7, 7, 7, 7};
    const RunningMoments mc = running_moments(constant);
    for (const WideReal& v : mc.var) CHECK(v.to_double() == 0.0);

    CHECK_THROWS_AS(running_moments(std::vector<BigInt>{}), DataError);
}

TEST_CASE("running moments match the exact rational oracle") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t len = 1 + rng.below(50);
        std::vector<BigInt> terms;
        for (std::size_t i = 0; i < len; ++i) {
            terms.emplace_back(static_cast<std::int64_t>(rng.below(2001)) - 1000);
        }
        const RunningMoments m = running_moments(terms);
        const auto oracle = oracles::rational_moments(terms);
        for (std::size_t i = 0; i < len; ++i) {
            const double mu_ref = oracles::to_double(oracle.mu[i]);
            const double mu_got = m.mu[i].to_double();
            CHECK(std::abs(mu_got - mu_ref) <=
                  1e-10 * std::max(1.0, std::abs(mu_ref)));
            const double var_ref = oracles::to_double(oracle.var[i]);
            const double var_got = m.var[i].to_double();
            CHECK(std::abs(var_got - var_ref) <=
                  1e-10 * std::max(1.0, std::abs(var_ref)));
        }
    }
}

TEST_CASE("running moments on powers of two match the oracle beyond double range") {
    std::vector<BigInt> terms;
    BigInt v = 1;
    for (int i = 0; i < 1000; ++i) {
        terms.push_back(v);
        v *= 2;
    }
    const RunningMoments m = running_moments(terms);
    const auto oracle = oracles::rational_moments(terms);

    // Values near 2^1000 exceed binary64; compare natural logs.
    const double mu_ln_ref = oracles::rational_ln(oracle.mu[999]);
    const double var_ln_ref = oracles::rational_ln(oracle.var[999]);
    CHECK(std::abs(m.mu[999].ln() - mu_ln_ref) <= 1e-10 * std::abs(mu_ln_ref));
    CHECK(std::abs(m.var[999].ln() - var_ln_ref) <= 1e-10 * std::abs(var_ln_ref));

    // Population/sample variance relation: var_pop(n) = (n-1) * v(n) / n.
    for (std::size_t n : {2ul, 10ul, 500ul, 1000ul}) {
        const WideReal pop = m.var[n - 1] * (static_cast<double>(n - 1) / static_cast<double>(n));
        CHECK(pop.ln() == doctest::Approx(m.var[n - 1].ln() +
                                          std::log((double)(n - 1) / (double)n))
                              .epsilon(1e-12));
    }
}

TEST_CASE("ols exact lines") {
    {
        const std::vector<double> xs = {0, 1, 2}, ys = {0, 2, 4};
        const LineFit fit = ols_fit(xs, ys);
        CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(fit.intercept == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(fit.r == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        const std::vector<double> xs = {0, 1}, ys = {1, 0};
        const LineFit fit = ols_fit(xs, ys);
        CHECK(fit.slope == doctest::Approx(-1.0));
        CHECK(fit.intercept == doctest::Approx(1.0));
        CHECK(fit.r == doctest::Approx(-1.0));
    }
    const std::vector<double> flat_x = {3, 3, 3}, any_y = {1, 2, 3};
    CHECK_THROWS_AS(ols_fit(flat_x, any_y), DegenerateFitError);
    const std::vector<double> one = {1.0};
    CHECK_THROWS_AS(ols_fit(one, one), DegenerateFitError);
}

TEST_CASE("ols matches the normal-equations oracle on random data") {
    Rng rng(31);
    std::vector<double> xs(200), ys(200);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = rng.uniform(-10, 10);
        ys[i] = 3.5 * xs[i] - 2.0 + rng.uniform(-1, 1);
    }
    const LineFit fit = ols_fit(xs, ys);
    const auto ref = oracles::normal_equations_fit(xs, ys);
    CHECK(fit.slope == doctest::Approx(ref.slope).epsilon(1e-9));
    CHECK(fit.intercept == doctest::Approx(ref.intercept).epsilon(1e-9));
    CHECK(fit.r == doctest::Approx(ref.r).epsilon(1e-9));
}

TEST_CASE("ols identities over random instances") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(60);
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = rng.uniform(-5, 5);
            ys[i] = rng.uniform(-2, 2) * xs[i] + rng.uniform(-3, 3);
        }
        xs[0] += 1e-3; // ensure spread
        const LineFit fit = ols_fit(xs, ys);
        CHECK(fit.r >= -1.0);
        CHECK(fit.r <= 1.0);
        if (fit.sigma_y > 0) {
            CHECK(fit.slope ==
                  doctest::Approx(fit.r * fit.sigma_y / fit.sigma_x).epsilon(1e-9));
        }

        //

        // Shifting xs by a constant changes only the intercept.
        std::vector<double> xs_shift = xs;
        for (double& x : xs_shift) x += 11.25;
        const LineFit shifted = ols_fit(xs_shift, ys);
        CHECK(shifted.slope == doctest::Approx(fit.slope).epsilon(1e-9));
        CHECK(shifted.r == doctest::Approx(fit.r).epsilon(1e-9));
        CHECK(shifted.intercept ==
              doctest::Approx(fit.intercept - fit.slope * 11.25).epsilon(1e-7));
    }
}

namespace {

// 60 exact points on y = 2x plus 40 gross outliers well beyond the threshold.
std::vector<Point> line_with_outliers(std::uint64_t seed, double threshold) {
    Rng rng(seed);
    std::vector<Point> pts;
    for (int i = 0; i < 60; ++i) {
        const double x = rng.uniform(-5, 5);
        pts.push_back(Point{x, 2.0 * x});
    }
    for (int i = 0; i < 40; ++i) {
        const double x = rng.uniform(-5, 5);
        const double off = (10.0 + 40.0 * rng.unit()) * threshold;
        pts.push_back(Point{x, 2.0 * x + (rng.unit() < 0.5 ? off : -off)});
    }
    return pts;
}

} // namespace

TEST_CASE("ransac recovers a planted line exactly across seeds") {
    const double threshold = 0.05;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto pts = line_with_outliers(seed, threshold);
        const RansacFit fit = ransac_fit(pts, threshold, 2000, seed);
        CHECK(std::abs(fit.slope - 2.0) <= 1e-6);
        CHECK(std::abs(fit.intercept) <= 1e-6);
        REQUIRE(fit.inlier_mask.size() == 100);
        for (std::size_t i = 0; i < 100; ++i) {
            CHECK(fit.inlier_mask[i] == (i < 60));
        }
    }
}

TEST_CASE("ransac on collinear points keeps every point") {
    std::vector<Point> pts;
    for (int i = 0; i < 25; ++i) pts.push_back(Point{0.1 * i, 0.3 * i + 1.0});
    const RansacFit fit = ransac_fit(pts, 0.01, 200, 3);
    CHECK(fit.inlier_count() == pts.size());
    CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("ransac with infinite threshold equals plain ols") {
    Rng rng(17);
    std::vector<Point> pts;
    std::vector<double> xs, ys;
    for (int i = 0; i < 80; ++i) {
        const double x = rng.uniform(0, 10);
        const double y = -1.5 * x + rng.uniform(-4, 4);
        pts.push_back(Point{x, y});
        xs.push_back(x);
        ys.push_back(y);
    }
    const RansacFit fit = ransac_fit(pts, HUGE_VAL, 50, 8);
    const LineFit ols = ols_fit(xs, ys);
    CHECK(fit.inlier_count() == pts.size());
    CHECK(fit.slope == doctest::Approx(ols.slope).epsilon(1e-9));
    CHECK(fit.intercept == doctest::Approx(ols.intercept).epsilon(1e-9));
}

TEST_CASE("ransac failure when no usable consensus exists") {
    // Both points share one x: every 2-point sample is vertical.
    const std::vector<Point> pts = {{1.0, 0.0}, {1.0, 5.0}};
    CHECK_THROWS_AS(ransac_fit(pts, 0.1, 50, 1), DegenerateFitError);
    CHECK_THROWS_AS(ransac_fit(std::vector<Point>{{0, 0}}, 0.1, 50, 1), DegenerateFitError);
    CHECK_THROWS_AS(ransac_fit(pts, -1.0, 50, 1), DataError);
}

TEST_CASE("ransac is deterministic for a fixed seed") {
    const auto pts = line_with_outliers(5, 0.05);
    const RansacFit a = ransac_fit(pts, 0.05, 500, 123);
    const RansacFit b = ransac_fit(pts, 0.05, 500, 123);
    CHECK(a.slope == b.slope);
    CHECK(a.inlier_mask == b.inlier_mask);
}
