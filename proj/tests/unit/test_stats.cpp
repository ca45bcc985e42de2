#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "fbmsde/stats.hpp"

using namespace fbmsde;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("type-7 quantiles") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(quantile_type7(v, 0.0) == 1.0);
    CHECK(quantile_type7(v, 1.0) == 4.0);
    CHECK_THAT(quantile_type7(v, 0.25), WithinAbs(1.75, 1e-15));
    CHECK_THAT(quantile_type7(v, 0.5), WithinAbs(2.5, 1e-15));
    CHECK_THAT(quantile_type7(v, 0.75), WithinAbs(3.25, 1e-15));
    CHECK(quantile_type7(std::vector<double>{7}, 0.3) == 7.0);
}

TEST_CASE("summary statistics") {
    const Summary s = summarize(std::vector<double>{4, 1, 3, 2});
    CHECK(s.count == 4);
    CHECK(s.mean == 2.5);
    CHECK_THAT(s.variance, WithinRel(5.0 / 3.0, 1e-15));
    CHECK_THAT(s.iqr, WithinAbs(1.5, 1e-15));
    CHECK(s.q1 <= s.median);
    CHECK(s.median <= s.q3);
    const Summary one = summarize(std::vector<double>{3.5});
    CHECK(one.variance == 0.0);
    CHECK_THROWS_AS(summarize(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("Kolmogorov distribution tail") {
    // Reference values of 1 - K(x) from the limiting Kolmogorov law.
    CHECK_THAT(kolmogorov_survival(1.0), WithinAbs(0.26999967167735452, 1e-12));
    CHECK_THAT(kolmogorov_survival(1.36), WithinAbs(0.049485876755377884, 1e-12));
    CHECK_THAT(kolmogorov_survival(0.5), WithinAbs(0.9639452436648751, 1e-12));
    CHECK(kolmogorov_survival(0.0) == 1.0);
    CHECK(kolmogorov_survival(10.0) < 1e-80);
    // continuity across the switch between the two series
    CHECK_THAT(kolmogorov_survival(1.0 - 1e-12), WithinAbs(kolmogorov_survival(1.0), 1e-10));
}

TEST_CASE("KS test") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    std::vector<double> z(10000);
    std::vector<double> u(10000);
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = normal(rng);
        u[i] = uniform(rng);
    }
    CHECK(ks_test_standard_normal(z).p_value > 0.01);
    const KsResult bad = ks_test_standard_normal(u);
    CHECK(bad.p_value < 0.001);
    CHECK(bad.statistic > 0.4);
    // single point at 0: D = 1/2
    CHECK_THAT(ks_test_standard_normal(std::vector<double>{0.0}).statistic, WithinAbs(0.5, 1e-15));
}

TEST_CASE("ordinary least squares") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) {
        y.push_back(2 * v + 1);
    }
    const LinearFit f = ols_fit(x, y);
    CHECK_THAT(f.slope, WithinAbs(2.0, 1e-12));
    CHECK_THAT(f.intercept, WithinAbs(1.0, 1e-12));
    CHECK_THAT(f.adj_r2, WithinAbs(1.0, 1e-12));
    CHECK(f.points == 5);

    const std::vector<double> noisy{1.1, 1.9, 3.2, 3.8, 5.1};
    const LinearFit g = ols_fit(x, noisy);
    CHECK_THAT(g.adj_r2, WithinAbs(1 - (1 - g.r2) * 4 / 3, 1e-14));
    CHECK(g.adj_r2 < g.r2);

    CHECK_THROWS_AS(ols_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ols_fit(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
                    std::invalid_argument);
}
