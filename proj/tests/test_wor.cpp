#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "betbounds/betting.hpp"
#include "betbounds/classical.hpp"
#include "betbounds/core.hpp"
#include "betbounds/rng.hpp"
#include "betbounds/wor.hpp"

using namespace betbounds;

namespace {
FinitePopulation half_and_half(std::size_t M) {
    std::vector<double> items(M);
    for (std::size_t i = 0; i < M; ++i) items[i] = i % 2 == 0 ? 1.0 : 0.0;
    return validate_population(std::move(items));
}

FinitePopulation beta_population(std::size_t M, std::uint64_t seed) {
    return validate_population(
        draw_sample(NamedDistribution::beta(2, 5), M, Seed{seed}).values);
}
} // namespace

TEST_CASE("draw_wor covers the whole population at n=M") {
    const FinitePopulation pop = beta_population(200, 1);
    const Sample s = draw_wor(pop, 200, Seed{2});
    CHECK(s.mean() == doctest::Approx(pop.mean()).epsilon(1e-12));
    std::vector<double> a = pop.items, b = s.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b); // a permutation, nothing more
}

TEST_CASE("draw_wor n=0 and guards") {
    const FinitePopulation pop = half_and_half(10);
    CHECK(draw_wor(pop, 0, Seed{1}).n() == 0);
    CHECK_THROWS_AS(draw_wor(pop, 11, Seed{1}), TooManyError);
}

TEST_CASE("draw_wor concentrates at the hypergeometric rate") {
    const std::size_t M = 10000, n = 5000;
    const FinitePopulation pop = half_and_half(M);
    const double band = 3.0 * std::sqrt(pop.variance() / static_cast<double>(n));
    int inside = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const Sample s = draw_wor(pop, n, Seed{44, (std::uint64_t)r});
        if (std::fabs(s.mean() - pop.mean()) <= band) ++inside;
    }
    // the without-replacement variance is even smaller than sigma^2/n
    CHECK(inside >= 0.99 * reps);
}

TEST_CASE("bernstein-serfling at n=M keeps only the log term") {
    const FinitePopulation pop = half_and_half(100);
    const Sample s = draw_wor(pop, 100, Seed{7});
    const Interval iv = bernstein_serfling_ci(s, 100, 0.05, 0.5);
    // half-width (4/3) log(40) / 100, frozen
    CHECK(0.5 * iv.width() == doctest::Approx(0.049185059388185817).epsilon(1e-12));
}

TEST_CASE("bernstein-serfling with sigma=0 keeps only the log terms") {
    const FinitePopulation pop = half_and_half(100);
    const Sample s = draw_wor(pop, 60, Seed{8});
    const Interval iv = bernstein_serfling_ci(s, 100, 0.05, 0.0);
    const double L = std::log(40.0);
    const double kappa = (100.0 / 61.0 - 1.0) * (1.0 - 0.6);
    CHECK(0.5 * iv.width() ==
          doctest::Approx((4.0 / 3.0 + std::sqrt(kappa)) * L / 60.0).epsilon(1e-12));
}

TEST_CASE("bernstein-serfling width is deterministic in (n, M, sigma, alpha)") {
    const Sample a = draw_wor(half_and_half(1000), 600, Seed{9});
    const Sample b = draw_wor(beta_population(1000, 10), 600, Seed{11});
    CHECK(bernstein_serfling_ci(a, 1000, 0.05, 0.4).width() ==
          bernstein_serfling_ci(b, 1000, 0.05, 0.4).width());
}

TEST_CASE("bernstein-serfling variance term approaches the with-replacement shape") {
    // isolate the sigma term by differencing against sigma=0
    const std::size_t n = 100;
    const std::size_t M = 1000000000000ull;
    const Sample s = draw_wor(beta_population(200, 12), n, Seed{13});
    const double with_sigma = bernstein_serfling_ci(s, M, 0.05, 0.5).width();
    const double without = bernstein_serfling_ci(s, M, 0.05, 0.0).width();
    const double sigma_term = 0.5 * (with_sigma - without);
    const double L = std::log(40.0);
    const double expected = 0.5 * std::sqrt(2.0 * (1.0 + 1.0 / n) * L / n);
    CHECK(sigma_term == doctest::Approx(expected).epsilon(1e-9));
    // within (1 + 1/n)^(1/2) of the iid Bernstein main term
    CHECK(sigma_term == doctest::Approx(0.5 * std::sqrt(2.0 * L / n)).epsilon(0.01));
}

TEST_CASE("wor prpl-eb centers constant populations exactly") {
    std::vector<double> items(50, 0.37);
    const Sample s{items};
    const Interval iv = wor_prpl_eb_ci(s, 100, 0.05);
    CHECK(0.5 * (iv.lower + iv.upper) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("wor prpl-eb tightens as the sample exhausts the population") {
    const FinitePopulation pop = half_and_half(400);
    const Sample full = draw_wor(pop, 400, Seed{15});
    const Sample almost{std::vector<double>(full.values.begin(), full.values.end() - 1)};
    const double w_full = wor_prpl_eb_ci(full, 400, 0.05).width();
    const double w_almost = wor_prpl_eb_ci(almost, 400, 0.05).width();
    CHECK(w_full <= w_almost);
}

TEST_CASE("wor prpl-eb converges to the iid prpl-eb as M grows") {
    const Sample s = draw_sample(NamedDistribution::beta(2, 5), 100, Seed{16});
    const double wor_w = wor_prpl_eb_ci(s, 1000000000000000ull, 0.05).width();
    const double iid_w = prpl_eb_ci(s, 0.05).width();
    CHECK(wor_w == doctest::Approx(iid_w).epsilon(1e-6));
}

TEST_CASE("wor betting collapses to the population mean at n=M") {
    const FinitePopulation pop = beta_population(100, 17);
    const Sample s = draw_wor(pop, 100, Seed{18});
    const GridConfig grid{2048, 1e-6};
    const Interval iv = wor_betting_ci(s, 100, 0.05, BetStrategy::mixture(32), grid);
    CHECK_FALSE(iv.empty_acceptance);
    CHECK(iv.contains(pop.mean()));
    // the feasibility window at n=M has width 1/M
    CHECK(iv.width() <= 1.0 / 100.0 + 2.0 * grid.refine_tol + 2.0 / 2047.0);
}

TEST_CASE("wor betting exhaustive width is below the near-exhaustive width") {
    const FinitePopulation pop = beta_population(120, 19);
    const Sample full = draw_wor(pop, 120, Seed{20});
    const Sample almost{std::vector<double>(full.values.begin(), full.values.end() - 1)};
    const GridConfig grid{512, 1e-6};
    const BetStrategy strat = BetStrategy::mixture(16);
    const double w_full = wor_betting_ci(full, 120, 0.05, strat, grid).width();
    const double w_almost = wor_betting_ci(almost, 120, 0.05, strat, grid).width();
    CHECK(w_full <= w_almost + 1e-9);
}

TEST_CASE("wor betting coverage at desk scale") {
    const double alpha = 0.05;
    const int reps = 400;
    std::atomic<int> hits{0};
    const FinitePopulation pop = beta_population(60, 21);
    const double mu = pop.mean();
    parallel_for(reps, [&](std::size_t r) {
        const Sample s = draw_wor(pop, 30, Seed{600, r});
        const Interval iv =
            wor_betting_ci(s, 60, alpha, BetStrategy::mixture(16), GridConfig{256, 1e-5});
        if (iv.clipped().contains(mu)) hits.fetch_add(1, std::memory_order_relaxed);
    });
    const double se = 3.0 * std::sqrt(alpha * (1 - alpha) / reps);
    CHECK(hits >= (1.0 - alpha - se) * reps);
}

TEST_CASE("wor prpl-eb coverage at desk scale") {
    const double alpha = 0.05;
    const int reps = 500;
    std::atomic<int> hits{0};
    const FinitePopulation pop = half_and_half(200);
    parallel_for(reps, [&](std::size_t r) {
        const Sample s = draw_wor(pop, 100, Seed{601, r});
        const Interval iv = wor_prpl_eb_ci(s, 200, alpha);
        if (iv.clipped().contains(pop.mean())) hits.fetch_add(1, std::memory_order_relaxed);
    });
    const double se = 3.0 * std::sqrt(alpha * (1 - alpha) / reps);
    CHECK(hits >= (1.0 - alpha - se) * reps);
}

TEST_CASE("wor guards") {
    const Sample s{std::vector<double>{0.5, 0.5}};
    CHECK_THROWS_AS(bernstein_serfling_ci(s, 1, 0.05, 0.3), TooManyError);
    CHECK_THROWS_AS(wor_prpl_eb_ci(s, 1, 0.05), TooManyError);
    CHECK_THROWS_AS(wor_betting_ci(s, 1, 0.05, BetStrategy::mixture(16)), TooManyError);
    CHECK_THROWS_AS(bernstein_serfling_ci(Sample{{}}, 10, 0.05, 0.3), EmptyError);
}
