#include <doctest.h>

#include <cmath>

#include "betbounds/core.hpp"
#include "betbounds/klinf.hpp"
#include "betbounds/rng.hpp"

using namespace betbounds;

namespace {

// Test-side oracle: closed-form Bernoulli information projection
// mu log(mu/m) + (1-mu) log((1-mu)/(1-m)), valid on both sides of mu.
double bern_kl(double mu, double m) {
    double v = 0.0;
    if (mu > 0.0) v += mu * std::log(mu / m);
    if (mu < 1.0) v += (1.0 - mu) * std::log((1.0 - mu) / (1.0 - m));
    return v;
}

DiscreteDistribution bern_atoms(double p) {
    return DiscreteDistribution::from_atoms({{0.0, 1.0 - p}, {1.0, p}});
}

// Brute-force inverse of the closed form by bisection, independent of kl_inf.
double bern_kl_inverse_plus(double mu, double x) {
    double lo = mu, hi = 1.0 - 1e-15;
    if (bern_kl(mu, hi) < x) return 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (bern_kl(mu, mid) >= x)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double bern_kl_inverse_minus(double mu, double x) {
    double lo = 1e-15, hi = mu;
    if (bern_kl(mu, lo) < x) return 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (bern_kl(mu, mid) >= x)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

} // namespace

TEST_CASE("kl_inf matches the Bernoulli closed form at (0.5, 0.75)") {
    const KlInfResult r = kl_inf(bern_atoms(0.5), 0.75, Side::plus);
    // 0.5 log 2 + 0.5 log(2/3), frozen from the closed form
    CHECK(r.value == doctest::Approx(0.14384103622589046).epsilon(1e-10));
    CHECK(r.lambda_star == doctest::Approx(-4.0 / 3.0).epsilon(1e-6));
    CHECK_FALSE(r.at_boundary);
}

TEST_CASE("kl_inf is zero on the trivial side") {
    const DiscreteDistribution d = bern_atoms(0.3);
    CHECK(kl_inf(d, 0.3, Side::plus).value == 0.0);
    CHECK(kl_inf(d, 0.2, Side::plus).value == 0.0);
    CHECK(kl_inf(d, 0.3, Side::minus).value == 0.0);
    CHECK(kl_inf(d, 0.4, Side::minus).value == 0.0);
}

TEST_CASE("kl_inf agrees with the closed form on 50 random (mu, m) pairs") {
    CounterRng rng(Seed{101});
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double mu = 0.05 + 0.9 * rng.next_unit();
        const double m = 0.02 + 0.96 * rng.next_unit();
        const DiscreteDistribution d = bern_atoms(mu);
        const Side side = m >= mu ? Side::plus : Side::minus;
        const double got = kl_inf(d, m, side).value;
        worst = std::max(worst, std::fabs(got - bern_kl(mu, m)));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("interior dual optimizers satisfy the stationarity identity") {
    CounterRng rng(Seed{202});
    for (int i = 0; i < 30; ++i) {
        const double mu = 0.2 + 0.6 * rng.next_unit();
        const double m = mu + (1.0 - mu) * 0.5 * rng.next_unit();
        const DiscreteDistribution d = bern_atoms(mu);
        const KlInfResult r = kl_inf(d, m, Side::plus);
        if (r.at_boundary || r.lambda_star == 0.0) continue;
        double slope = 0.0, expectation = 0.0;
        for (const Atom& a : d.atoms()) {
            slope += a.p * (a.x - m) / (1.0 + r.lambda_star * (a.x - m));
            expectation += a.p / (1.0 + r.lambda_star * (a.x - m));
        }
        CHECK(std::fabs(slope) <= 1e-9);
        CHECK(expectation == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("kl_inf is monotone in m on both sides") {
    const Sample s = draw_sample(NamedDistribution::beta(2, 5), 400, Seed{7});
    const DiscreteDistribution d = empirical_distribution(s);
    const double mu = d.mean();
    double prev = -1.0;
    for (int i = 0; i < 100; ++i) {
        const double m = mu + (0.999 - mu) * (i + 1) / 100.0;
        const double v = kl_inf(d, m, Side::plus).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    prev = -1.0;
    for (int i = 0; i < 100; ++i) {
        const double m = mu - (mu - 0.001) * (i + 1) / 100.0;
        const double v = kl_inf(d, m, Side::minus).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("kl_inf rejects unsupported inputs") {
    CHECK_THROWS_AS(kl_inf(bern_atoms(0.5), 1.0, Side::plus), DomainError);
    CHECK_THROWS_AS(kl_inf(bern_atoms(0.5), 0.0, Side::minus), DomainError);
    const DiscreteDistribution wide =
        DiscreteDistribution::from_atoms({{-0.5, 0.5}, {0.5, 0.5}});
    CHECK_THROWS_AS(kl_inf(wide, 0.3, Side::plus), UnsupportedDistributionError);
}

TEST_CASE("inverse projection at level zero returns the mean") {
    const DiscreteDistribution d = bern_atoms(0.37);
    CHECK(kl_inf_inverse(d, 0.0, Side::plus) == doctest::Approx(0.37));
    CHECK(kl_inf_inverse(d, 0.0, Side::minus) == doctest::Approx(0.37));
}

TEST_CASE("inverse projection inverts the projection") {
    const DiscreteDistribution d = bern_atoms(0.5);
    const double m = kl_inf_inverse(d, 0.14384103622589046, Side::plus);
    CHECK(m == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("inverse round-trip consistency on interior levels") {
    const Sample s = draw_sample(NamedDistribution::beta(2, 2), 300, Seed{13});
    const DiscreteDistribution d = empirical_distribution(s);
    for (double x : {0.001, 0.01, 0.05, 0.2}) {
        const double m_plus = kl_inf_inverse(d, x, Side::plus);
        if (m_plus < 1.0) {
            CHECK(kl_inf(d, m_plus, Side::plus).value == doctest::Approx(x).epsilon(1e-4));
            CHECK(std::fabs(kl_inf(d, m_plus, Side::plus).value - x) <= 1e-6);
        }
        const double m_minus = kl_inf_inverse(d, x, Side::minus);
        if (m_minus > 0.0)
            CHECK(std::fabs(kl_inf(d, m_minus, Side::minus).value - x) <= 1e-6);
    }
}

TEST_CASE("inverse projection clamps unattainable levels") {
    CHECK(kl_inf_inverse(bern_atoms(0.5), 1000.0, Side::plus) == 1.0);
    CHECK(kl_inf_inverse(bern_atoms(0.5), 1000.0, Side::minus) == 0.0);
    CHECK_THROWS_AS(kl_inf_inverse(bern_atoms(0.5), -0.1, Side::plus),
                    NonPositiveLevelError);
}

TEST_CASE("a(n, alpha) frozen value and guards") {
    CHECK(a_n_alpha(1000, 0.01) == doctest::Approx(0.0045031169497733631).epsilon(1e-12));
    CHECK_THROWS_AS(a_n_alpha(1000, 0.5), NonPositiveLevelError);
    CHECK_THROWS_AS(a_n_alpha(0, 0.01), EmptyError);
    // n a(n, alpha) / log(1/alpha) -> 1 as alpha -> 0
    const double tiny = 1e-8;
    CHECK(1000.0 * a_n_alpha(1000, tiny) / std::log(1.0 / tiny) ==
          doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ci width lower bound is symmetric for Bernoulli(1/2)") {
    const LowerBoundResult r = ci_width_lower_bound(bern_atoms(0.5), 500, 0.05);
    CHECK(r.upper_dev == doctest::Approx(r.lower_dev).epsilon(1e-7));
    CHECK(r.w_star == doctest::Approx(std::max(r.upper_dev, r.lower_dev)));
    CHECK(r.upper_dev > 0.0);
}

TEST_CASE("ci width lower bound matches a brute-force closed-form inversion") {
    const LowerBoundResult r = ci_width_lower_bound(bern_atoms(0.9), 1000, 0.01);
    const double a = a_n_alpha(1000, 0.01);
    const double up = bern_kl_inverse_plus(0.9, a) - 0.9;
    const double dn = 0.9 - bern_kl_inverse_minus(0.9, a);
    CHECK(std::fabs(r.w_star - std::max(up, dn)) <= 1e-6);
}

TEST_CASE("ci width lower bound decreases with n") {
    const DiscreteDistribution d = bern_atoms(0.7);
    double prev = 1e9;
    for (std::size_t n : {100u, 400u, 1600u, 6400u}) {
        const double w = ci_width_lower_bound(d, n, 0.05).w_star;
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("gaussian lower bound frozen value and scalings") {
    CHECK(gaussian_lower_bound(2.0, 1000, 0.01) ==
          doctest::Approx(0.18980235930616591).epsilon(1e-12));
    CHECK(gaussian_lower_bound(4.0, 1000, 0.01) ==
          doctest::Approx(2.0 * gaussian_lower_bound(2.0, 1000, 0.01)).epsilon(1e-12));
    CHECK(gaussian_lower_bound(2.0, 4000, 0.01) ==
          doctest::Approx(0.5 * gaussian_lower_bound(2.0, 1000, 0.01)).epsilon(1e-12));
}

TEST_CASE("normal quantile is accurate against the erf CDF") {
    for (double b : {1e-6, 0.001, 0.025, 0.3, 0.5, 0.77, 0.975, 0.999, 1.0 - 1e-6}) {
        const double z = normal_quantile(b);
        const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
        CHECK(std::fabs(cdf - b) <= 1e-9);
    }
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_quantile(0.995) == doctest::Approx(2.5758293035489008).epsilon(1e-9));
}

TEST_CASE("binomial quantile building block") {
    CHECK(binomial_quantile(10, 0.5, 0.5) == 5);
    CHECK(binomial_quantile(10, 0.5, 0.9999999) == 10);
    // lower-tail outer convention: largest k with CDF(k) <= beta
    CHECK(binomial_quantile(1000, 0.9, 0.005) == 874);
    CHECK(binomial_quantile(1000, 0.9, 0.995) == 924);
}

TEST_CASE("oracle widths for both families") {
    // sigma (z_{0.995} - z_{0.005}) / sqrt(n) at sigma=2, n=1000, frozen
    CHECK(oracle_ci_width(NamedDistribution::gaussian_family(2.0), 1000, 0.01) ==
          doctest::Approx(0.32581949852079056).epsilon(1e-9));
    const double w = oracle_ci_width(NamedDistribution::bernoulli(0.9), 1000, 0.01);
    CHECK(w == doctest::Approx((924.0 - 874.0) / 1000.0).epsilon(1e-12));
    CHECK_THROWS_AS(oracle_ci_width(NamedDistribution::beta(2, 5), 100, 0.05),
                    UnsupportedDistributionError);
}

TEST_CASE("gaussian oracle to lower bound ratio is constant in n and sigma") {
    for (std::size_t n : {1000u, 3000u, 10000u}) {
        for (double sigma : {0.5, 2.0}) {
            const double ratio =
                oracle_ci_width(NamedDistribution::gaussian_family(sigma), n, 0.01) /
                gaussian_lower_bound(sigma, n, 0.01);
            CHECK(ratio == doctest::Approx(1.7166251236909994).epsilon(1e-3));
        }
    }
}

TEST_CASE("betting width bounds dominate the lower bound") {
    const DiscreteDistribution d = bern_atoms(0.5);
    for (std::size_t n : {100u, 1000u, 10000u}) {
        const double det = betting_ci_width_upper_bound_deterministic(d, n, 0.05);
        const double low = ci_width_lower_bound(d, n, 0.05).w_star;
        CHECK(det >= low);
    }
}

TEST_CASE("empirical betting width bound shrinks with n for point-mass samples") {
    double prev = 1e18;
    for (std::size_t n : {10u, 100u, 1000u}) {
        std::vector<double> xs(n, 0.3);
        const double b = betting_ci_width_upper_bound_empirical(validate_sample(xs), 0.05);
        CHECK(std::isfinite(b));
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("deterministic betting width bound rejects zero variance") {
    const DiscreteDistribution pm = DiscreteDistribution::from_atoms({{0.3, 1.0}});
    CHECK_THROWS_AS(betting_ci_width_upper_bound_deterministic(pm, 100, 0.05),
                    ZeroVarianceError);
}
