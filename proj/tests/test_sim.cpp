#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>

#include "betbounds/sim.hpp"

using namespace betbounds;

TEST_CASE("coverage experiment is reproducible and conservative for hoeffding") {
    ExperimentSpec spec;
    spec.dist = NamedDistribution::bernoulli(0.5);
    spec.methods = {Method::hoeffding, Method::prpl_eb};
    spec.n_grid = {100};
    spec.alpha = 0.05;
    spec.replicates = 300;
    spec.seed = Seed{17};

    const auto rows = coverage_experiment(spec);
    REQUIRE(rows.size() == 2);
    const double band = 1.0 - 0.05 - 3.0 * std::sqrt(0.05 * 0.95 / 300.0);
    CHECK(rows[0].coverage >= band);
    CHECK(rows[1].coverage >= band);
    // deterministic widths: all quantiles of the hoeffding row agree
    CHECK(rows[0].width_q25 == rows[0].width_q75);

    const auto again = coverage_experiment(spec);
    CHECK(again[0].contained == rows[0].contained);
    CHECK(again[1].width_median == rows[1].width_median);
}

TEST_CASE("coverage experiment handles betting methods via direct inversion") {
    ExperimentSpec spec;
    spec.dist = NamedDistribution::bernoulli(0.5);
    spec.methods = {Method::betting_mixture};
    spec.n_grid = {200};
    spec.alpha = 0.05;
    spec.replicates = 200;
    spec.seed = Seed{18};
    spec.mixture_nodes = 16;
    const auto rows = coverage_experiment(spec);
    REQUIRE(rows.size() == 1);
    const double band = 1.0 - 0.05 - 3.0 * std::sqrt(0.05 * 0.95 / 200.0);
    CHECK(rows[0].coverage >= band);
    CHECK(std::isnan(rows[0].width_median)); // widths not recorded unless asked
}

TEST_CASE("width curve splits bernstein and hoeffding by the exact log term") {
    ExperimentSpec spec;
    spec.dist = NamedDistribution::bernoulli(0.5);
    spec.methods = {Method::hoeffding, Method::bernstein};
    spec.n_grid = {400};
    spec.alpha = 0.05;
    spec.replicates = 40;
    spec.seed = Seed{19};
    spec.sigma_known = 0.5;
    const auto rows = width_curve(spec);
    REQUIRE(rows.size() == 2);
    const double gap = rows[1].width_median - rows[0].width_median;
    CHECK(gap == doctest::Approx(4.0 * std::log(40.0) / (3.0 * 400)).epsilon(1e-9));
}

TEST_CASE("width curve needs a strictly increasing n grid") {
    ExperimentSpec spec;
    spec.dist = NamedDistribution::bernoulli(0.5);
    spec.methods = {Method::hoeffding};
    spec.n_grid = {100, 100};
    CHECK_THROWS_AS(width_curve(spec), BadParamError);
}

TEST_CASE("lower vs oracle curve reproduces the gaussian constants") {
    const auto rows = lower_vs_oracle_curve(NamedDistribution::gaussian_family(2.0),
                                            {1000, 3000, 10000}, 0.01);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.ratio_direct == doctest::Approx(1.7166251236909994).epsilon(1e-3));
        CHECK(r.ratio_factor2 == doctest::Approx(3.4332502473819987).epsilon(1e-3));
    }
    CHECK(rows[0].lower == doctest::Approx(0.18980235930616591).epsilon(1e-12));
}

TEST_CASE("effective width report basics") {
    const auto report = effective_width_estimate(
        NamedDistribution::bernoulli(0.5), BetStrategy::mixture(16), 0.05,
        {1.0, 0.6, 0.4, 0.3}, 30, 4000, GridConfig{128, 1e-6}, Seed{23}, {4000});
    REQUIRE(report.w_grid.size() == 4);
    // width <= 1 holds from the very first step
    CHECK(report.mean_T[0] == 1.0);
    // mean stopping time grows as the target width shrinks
    for (std::size_t k = 1; k < report.mean_T.size(); ++k)
        CHECK(report.mean_T[k] >= report.mean_T[k - 1]);
    REQUIRE(report.w_e.size() == 1);
    CHECK(report.w_e[0] <= 0.3);
}

TEST_CASE("effective width censoring raises once nothing qualifies") {
    CHECK_THROWS_AS(effective_width_estimate(NamedDistribution::bernoulli(0.5),
                                             BetStrategy::mixture(16), 0.05, {0.001}, 5,
                                             200, GridConfig{64, 1e-6}, Seed{29}, {200}),
                    AllCensoredError);
}

TEST_CASE("limiting width check is exact for hoeffding") {
    const auto res = limiting_width_check(NamedDistribution::bernoulli(0.5),
                                          Method::hoeffding, 0.05, 5000, 5, Seed{31});
    CHECK(res.median_scaled == doctest::Approx(res.target).epsilon(1e-12));
    CHECK(std::fabs(res.rel_error) <= 1e-12);
}

TEST_CASE("limiting width check lands near the prpl-eb constant at moderate n") {
    const auto res = limiting_width_check(NamedDistribution::bernoulli(0.5),
                                          Method::prpl_eb, 0.05, 10000, 30, Seed{37});
    CHECK(res.target == doctest::Approx(2.7162030314812390).epsilon(1e-12));
    CHECK(std::fabs(res.rel_error) < 0.15);
}

TEST_CASE("second order statistic at reduced scale") {
    const auto rep =
        second_order_statistic(NamedDistribution::bernoulli(0.5), 0.05, 20000, 50, Seed{41});
    CHECK(rep.target_mean == doctest::Approx(20.449457628478114).epsilon(1e-12));
    CHECK(std::fabs(rep.mean_s - rep.target_mean) < 2.0);
    // Bernoulli(1/2) degenerates the fluctuation: mu4 == sigma^4
    CHECK(rep.target_variance == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("csv writers emit headers and rows") {
    std::ostringstream os;
    write_csv(os, lower_vs_oracle_curve(NamedDistribution::gaussian_family(2.0), {1000}, 0.01));
    const std::string text = os.str();
    CHECK(text.find("n,lower,oracle,ratio_direct,ratio_factor2") != std::string::npos);
    CHECK(text.find("0.18980235930616") != std::string::npos);
}
