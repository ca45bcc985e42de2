#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "fbmsde/asym_variances.hpp"
#include "fbmsde/estimators.hpp"
#include "fbmsde/sde.hpp"
#include "support/frozen.hpp"

using namespace fbmsde;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> verhulst_path(std::size_t n, double h, std::uint64_t seed, double c = 0.7) {
    return simulate_path(preset(Model::verhulst, 0.5, c, 3.0, h), GridSpec(n, 1.0), seed)
        .path.values;
}

std::vector<double> scaled(std::vector<double> v, double alpha) {
    for (double& x : v) {
        x *= alpha;
    }
    return v;
}

} // namespace

TEST_CASE("V_{n,T}") {
    CHECK(vnt(std::vector<double>{1, 2, 3, 4, 5}, 1.0, 0.7) == 0.0);
    CHECK_THROWS_AS(vnt(std::vector<double>{1, 2}, 1.0, 0.7), std::invalid_argument);
    // a single second difference d on n = 2: n^{2H-1} d^2 / (4 - 2^{2H})
    const double h = 0.75;
    CHECK_THAT(vnt(std::vector<double>{0, 1, 0}, 1.0, h),
               WithinRel(std::pow(2.0, 2 * h - 1) * 4 / (4 - std::pow(2.0, 2 * h)), 1e-14));
}

TEST_CASE("phi") {
    CHECK_THAT(phi(100, 1.0, 0.5), WithinRel(0.02, 1e-14));
    CHECK(phi(100, 1.0, 0.6) > phi(100, 1.0, 0.7));
    CHECK_THAT(phi(10, 1.0, 0.75), WithinRel(frozen::phi_10_1_h075, 1e-14));
    CHECK_THROWS_AS(phi(1, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(phi(5, 7.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(phi(100, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(phi(100, 1.0, 1.0), std::domain_error);
}

TEST_CASE("phi inverse") {
    const PhiInversion half = phi_inverse(100, 1.0, 0.02);
    CHECK_THAT(half.value, WithinAbs(0.5, 1e-10));
    CHECK_FALSE(half.boundary);
    CHECK_THAT(phi_inverse(4096, 1.0, phi(4096, 1.0, 0.73)).value, WithinAbs(0.73, 1e-10));
    CHECK_THAT(phi_inverse(50, 3.0, phi(50, 3.0, 0.21)).value, WithinAbs(0.21, 1e-10));

    const PhiInversion above = phi_inverse(100, 1.0, 10.0);
    CHECK(above.value == kBracketDelta);
    CHECK(above.boundary);
    const PhiInversion below = phi_inverse(100, 1.0, 0.0);
    CHECK(below.value == 1.0 - kBracketDelta);
    CHECK(below.boundary);
}

TEST_CASE("h1 inverts a statistic placed exactly on phi") {
    const std::vector<double> x = verhulst_path(512, 0.7, 4);
    const std::size_t n = x.size() - 1;
    const double target = phi(n, 1.0, 0.7);
    const double c = std::sqrt(normalized_square_sum(x) / n / target);
    const HurstEstimate e = estimate_h1(x, 1.0, c);
    CHECK_THAT(e.value, WithinAbs(0.7, 1e-10));
    CHECK_FALSE(e.flags.any());
    CHECK(e.estimator == HurstEstimator::h1);
    const double sigma2 = asym_variances(0.7).sigma2;
    CHECK_THAT(e.std_error,
               WithinRel(std::sqrt(sigma2) / (2 * std::sqrt(512.0) * std::log(512.0)), 1e-6));
    CHECK(e.ci_low <= e.value);
    CHECK(e.value <= e.ci_high);
    CHECK_THAT(e.ci_high - e.value, WithinRel(1.959963984540054 * e.std_error, 1e-12));
}

TEST_CASE("h1 degenerate path hits the bracket") {
    const std::vector<double> flat(65, 2.0);
    const HurstEstimate e = estimate_h1(flat, 1.0, 0.7);
    CHECK(e.value == 1.0 - kBracketDelta);
    CHECK(e.flags.has(EstimateFlag::boundary_inversion));
    CHECK(e.flags.has(EstimateFlag::degenerate));
    CHECK_THROWS_AS(estimate_h1(flat, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("h2 with equal normalized sums is one half") {
    // X = 1 except X_1 = 1 + w, X_2 = 1 + u: the fine and coarse sums cross
    // between w = 0 and w = u / 2.
    const double u = 0.3;
    auto path = [u](double w) { return std::vector<double>{1, 1 + w, 1 + u, 1, 1}; };
    auto gap = [&](double w) {
        const auto p = path(w);
        return normalized_square_sum(p) -
               normalized_square_sum(std::vector<double>{p[0], p[2], p[4]});
    };
    double lo = 0.0;
    double hi = u / 2;
    REQUIRE(gap(lo) > 0);
    REQUIRE(gap(hi) < 0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) > 0 ? lo : hi) = mid;
    }
    const HurstEstimate e = estimate_h2(path(lo));
    CHECK_THAT(e.value, WithinAbs(0.5, 1e-12));
}

TEST_CASE("h2 matches its ratio definition and standard error") {
    const std::vector<double> x = verhulst_path(2048, 0.7, 8);
    std::vector<double> coarse;
    for (std::size_t k = 0; k < x.size(); k += 2) {
        coarse.push_back(x[k]);
    }
    const double expected =
        0.5 - std::log(normalized_square_sum(x) / normalized_square_sum(coarse)) /
                  (2 * std::numbers::ln2);
    const HurstEstimate e = estimate_h2(x);
    CHECK(e.raw_value == expected);
    CHECK(e.estimator == HurstEstimator::h2);
    const double s = shared_variance_cache().get(e.value).sigma_star2;
    CHECK_THAT(e.std_error, WithinRel(std::sqrt(s) / (2 * std::numbers::ln2 * std::sqrt(1024.0)),
                                      1e-12));
}

TEST_CASE("h2 edge cases") {
    CHECK_THROWS_AS(estimate_h2(std::vector<double>{1, 2, 3, 4}), std::invalid_argument);
    const HurstEstimate flat = estimate_h2(std::vector<double>(9, 1.0));
    CHECK(flat.flags.has(EstimateFlag::degenerate));
    CHECK(flat.flags.has(EstimateFlag::boundary_inversion));
    // Odd-index bump: fine sum positive, coarse sum zero.
    const HurstEstimate bump = estimate_h2(std::vector<double>{1, 1.5, 1, 1, 1});
    CHECK(bump.flags.has(EstimateFlag::boundary_inversion));
    CHECK(bump.flags.has(EstimateFlag::clamped));
    CHECK(bump.value == kBracketDelta);
    CHECK(std::isinf(bump.raw_value));
}

TEST_CASE("c2 estimator") {
    const std::vector<double> flat(33, 5.0);
    const VolatilityEstimate z = estimate_c2(flat, 0.7, 1.0);
    CHECK(z.c2 == 0.0);
    CHECK(z.flags.has(EstimateFlag::degenerate));

    const std::vector<double> x = verhulst_path(1024, 0.7, 12);
    const VolatilityEstimate v = estimate_c2(x, 0.7, 1.0);
    CHECK(v.c2 > 0);
    CHECK(v.h_used == 0.7);
    CHECK(v.ci_low >= 0);
    CHECK(v.ci_low <= v.c2);
    CHECK(v.c2 <= v.ci_high);
    CHECK_THAT(v.std_error, WithinRel(v.c2 * std::sqrt(asym_variances(0.7).sigma2) / 32.0, 1e-6));
    // continuity in the plug-in
    const VolatilityEstimate near = estimate_c2(x, 0.7 + 1e-9, 1.0);
    CHECK_THAT(near.c2, WithinRel(v.c2, 1e-7));
    CHECK_THROWS_AS(estimate_c2(x, 1.0, 1.0), std::domain_error);
}

TEST_CASE("lower CI bound of c2 is clipped at zero") {
    // Huge standard error relative to the estimate: few points.
    const std::vector<double> x{1.0, 1.2, 0.9, 1.1, 1.0};
    const VolatilityEstimate v = estimate_c2(x, 0.7, 1.0, 0.999);
    CHECK(v.ci_low == 0.0);
}

TEST_CASE("estimators are invariant under path rescaling") {
    const std::vector<double> x = verhulst_path(2048, 0.8, 31);
    for (double alpha : {1e-3, 0.5, 7.0, 1e4}) {
        const std::vector<double> y = scaled(x, alpha);
        CHECK_THAT(estimate_h1(y, 1.0, 0.7).value,
                   WithinRel(estimate_h1(x, 1.0, 0.7).value, 1e-10));
        CHECK_THAT(estimate_h2(y).value, WithinRel(estimate_h2(x).value, 1e-10));
        CHECK_THAT(estimate_c2(y, 0.8, 1.0).c2, WithinRel(estimate_c2(x, 0.8, 1.0).c2, 1e-10));
    }
}

TEST_CASE("flags and critical values") {
    EstimateFlags f;
    CHECK(f.to_string().empty());
    f.set(EstimateFlag::clamped);
    f.set(EstimateFlag::boundary_inversion);
    CHECK(f.to_string() == "clamped|boundary_inversion");
    EstimateFlags g;
    g.set(EstimateFlag::unavailable);
    f.merge(g);
    CHECK(f.has(EstimateFlag::unavailable));
    CHECK_THAT(normal_critical_value(0.95), WithinRel(1.959963984540054, 1e-12));
    CHECK_THAT(normal_critical_value(0.9), WithinRel(1.6448536269514722, 1e-12));
    CHECK_THROWS(normal_critical_value(1.0));
}

TEST_CASE("zero observations are rejected") {
    CHECK_THROWS(estimate_h1(std::vector<double>{1, 0, 2, 3}, 1.0, 0.7));
    CHECK_THROWS(estimate_c2(std::vector<double>{1, 0, 2, 3, 1}, 0.7, 1.0));
}
