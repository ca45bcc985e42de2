#include <catch_amalgamated.hpp>

#include <cmath>

#include "fbmsde/errors.hpp"
#include "fbmsde/fbm.hpp"
#include "fbmsde/sde.hpp"
#include "support/sde_oracle.hpp"

using namespace fbmsde;
using Catch::Matchers::WithinRel;

TEST_CASE("model presets") {
    const SdeParams v = preset(Model::verhulst, 0.5, 0.7, 3.0, 0.7);
    CHECK(v.a == -1.0);
    CHECK(v.b == 0.5);
    CHECK(v.c == 0.7);
    CHECK(v.m == 2);
    CHECK(v.x0 == 3.0);
    CHECK(v.hurst == 0.7);

    const SdeParams bs = preset(Model::black_scholes, 0.0, 1.0, 1.0, 0.8);
    CHECK(bs.a == 0.0);
    CHECK(bs.b == 0.0);
    CHECK(bs.c == 1.0);
    CHECK(bs.m == 2);

    const SdeParams lg = preset(Model::landau_ginzburg, 0.5, 0.7, 3.0, 0.6);
    CHECK(lg.m == 3);
    CHECK(lg.a == -1.0);

    CHECK_THROWS_AS(preset(Model::verhulst, 0.5, 0.0, 3.0, 0.7), std::invalid_argument);
    CHECK_THROWS_AS(preset(Model::verhulst, 0.5, 0.7, -1.0, 0.7), std::invalid_argument);
    CHECK_THROWS_AS(preset(Model::verhulst, 0.5, 0.7, 3.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(preset(Model::verhulst, 0.5, 0.7, 3.0, 1.2), std::invalid_argument);
    CHECK(parse_model("landau_ginzburg") == Model::landau_ginzburg);
    CHECK(to_string(Model::black_scholes) == "black_scholes");
    CHECK_THROWS_AS(parse_model("heston"), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    SdeParams p{-1.0, 0.5, 0.7, 2, 3.0, 0.7};
    CHECK_NOTHROW(p.validate());
    p.a = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.a = -1.0;
    p.m = 1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.m = 2;
    p.x0 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("a = 0 gives the exact exponential of the driver") {
    const SdeParams p = preset(Model::black_scholes, 0.3, 0.9, 2.0, 0.75);
    const FbmPath fine = generate_fbm_path(GridSpec(1024, 1.0), 0.75, 5);
    const SamplePath path = solve_polynomial_sde(p, fine, 4);
    REQUIRE(path.values.size() == 257);
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        const std::size_t j = 4 * k;
        const double expected = 2.0 * std::exp(0.3 * fine.grid.time(j) + 0.9 * fine.values[j]);
        CHECK(path.values[k] == expected);
    }
}

TEST_CASE("Verhulst and Landau-Ginzburg match their closed forms") {
    const double h = 0.7;
    const std::size_t refine = 4;
    const FbmPath fine = generate_fbm_path(GridSpec(512 * refine, 1.0), h, 11);
    const double dt = fine.grid.step();

    const SamplePath v = solve_polynomial_sde(preset(Model::verhulst, 0.5, 0.7, 3.0, h), fine, refine);
    const auto v_ref = oracle::verhulst(3.0, 0.5, 0.7, dt, fine.values, refine);
    const SamplePath lg =
        solve_polynomial_sde(preset(Model::landau_ginzburg, 0.5, 0.7, 3.0, h), fine, refine);
    const auto lg_ref = oracle::landau_ginzburg(3.0, 0.5, 0.7, dt, fine.values, refine);
    REQUIRE(v.values.size() == v_ref.size());
    REQUIRE(lg.values.size() == lg_ref.size());
    for (std::size_t k = 0; k < v_ref.size(); ++k) {
        CHECK_THAT(v.values[k], WithinRel(v_ref[k], 1e-10));
        CHECK_THAT(lg.values[k], WithinRel(lg_ref[k], 1e-10));
    }
}

TEST_CASE("solution is positive and starts at x0") {
    for (Model m : {Model::black_scholes, Model::verhulst, Model::landau_ginzburg}) {
        const SimulatedPath s = simulate_path(preset(m, 0.5, 2.0, 3.0, 0.6), GridSpec(256, 2.0), 3);
        CHECK(s.path.values[0] == 3.0);
        for (double x : s.path.values) {
            CHECK(x > 0.0);
        }
        CHECK(s.driver.grid == s.path.grid);
        CHECK(s.driver.values[0] == 0.0);
    }
}

TEST_CASE("drift factor starts at x0^{1-m} and never decreases") {
    const SdeParams p = preset(Model::landau_ginzburg, 0.5, 0.7, 3.0, 0.8);
    const FbmPath fine = generate_fbm_path(GridSpec(2048, 1.0), 0.8, 2);
    const auto a = drift_factor(p, fine, 4);
    CHECK(a.front() == std::pow(3.0, -2.0));
    for (std::size_t k = 1; k < a.size(); ++k) {
        CHECK(a[k] >= a[k - 1]);
    }
}

TEST_CASE("refining the quadrature stays within the coarse trapezoid bound") {
    const double h = 0.7;
    const SdeParams p = preset(Model::verhulst, 0.5, 0.7, 3.0, h);
    const std::size_t n = 128;
    const FbmPath fine = generate_fbm_path(GridSpec(8 * n, 1.0), h, 17);
    const auto a8 = drift_factor(p, fine, 8);
    const auto a1 = drift_factor(p, subsample(fine, 8), 1);
    // On each coarse cell both trapezoid values and the fine-node integral lie
    // within step * (max - min) of the integrand sampled there.
    const double step = 1.0 / n;
    double bound = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        double lo = INFINITY;
        double hi = -INFINITY;
        for (std::size_t j = 8 * (k - 1); j <= 8 * k; ++j) {
            const double f = std::exp(0.5 * fine.grid.time(j) + 0.7 * fine.values[j]);
            lo = std::min(lo, f);
            hi = std::max(hi, f);
        }
        bound += step * (hi - lo);
        CHECK(std::abs(a8[k] - a1[k]) <= bound * (1 + 1e-12));
    }
}

TEST_CASE("overflowing exponent fails loudly") {
    const SdeParams p = preset(Model::black_scholes, 0.0, 2000.0, 1.0, 0.7);
    CHECK_THROWS_AS(simulate_path(p, GridSpec(64, 1.0), 1), NumericError);
    const SdeParams big_b = preset(Model::verhulst, 800.0, 0.1, 1.0, 0.7);
    CHECK_THROWS_AS(simulate_path(big_b, GridSpec(64, 1.0), 1), NumericError);
}

TEST_CASE("driver checks") {
    const SdeParams p = preset(Model::verhulst, 0.5, 0.7, 3.0, 0.7);
    const FbmPath wrong_h = generate_fbm_path(GridSpec(64, 1.0), 0.6, 1);
    CHECK_THROWS_AS(solve_polynomial_sde(p, wrong_h, 4), std::invalid_argument);
    const FbmPath driver = generate_fbm_path(GridSpec(64, 1.0), 0.7, 1);
    CHECK_THROWS_AS(solve_polynomial_sde(p, driver, 3), std::invalid_argument);
    CHECK_THROWS_AS(solve_polynomial_sde(p, driver, 0), std::invalid_argument);
}

TEST_CASE("residual check") {
    SECTION("constant solution has zero residual") {
        SdeParams p = preset(Model::black_scholes, 0.0, 1.0, 2.0, 0.7);
        FbmPath zero{0.7, GridSpec(64, 1.0), std::vector<double>(65, 0.0), 0,
                     SynthesisMethod::spectral_circulant};
        const SamplePath path = solve_polynomial_sde(p, zero, 1);
        CHECK(residual_check(path, zero) == 0.0);
    }
    SECTION("finer grids give smaller residuals") {
        const double h = 0.75;
        const SdeParams p = preset(Model::black_scholes, 0.5, 0.7, 3.0, h);
        const FbmPath finest = generate_fbm_path(GridSpec(1 << 14, 1.0), h, 21);
        const FbmPath coarse = subsample(finest, 16);
        const SamplePath fine_path = solve_polynomial_sde(p, finest, 1);
        const SamplePath coarse_path = solve_polynomial_sde(p, coarse, 1);
        CHECK(residual_check(fine_path, finest) < residual_check(coarse_path, coarse));
    }
    SECTION("grid mismatch") {
        const SimulatedPath s =
            simulate_path(preset(Model::verhulst, 0.5, 0.7, 3.0, 0.7), GridSpec(64, 1.0), 1);
        const FbmPath other = generate_fbm_path(GridSpec(32, 1.0), 0.7, 1);
        CHECK_THROWS_AS(residual_check(s.path, other), std::invalid_argument);
    }
}

TEST_CASE("simulate_path is deterministic and reports its seed") {
    const SdeParams p = preset(Model::verhulst, 0.5, 0.7, 3.0, 0.7);
    const SimulatedPath a = simulate_path(p, GridSpec(128, 1.0), 99);
    const SimulatedPath b = simulate_path(p, GridSpec(128, 1.0), 99);
    CHECK(a.path.values == b.path.values);
    CHECK(a.path.driver_seed == 99);
}
