#pragma once
// Information projections over [0,1]-supported discrete distributions, via the
// one-dimensional concave dual
//
//   KLinf_plus(P, m)  = sup_{l in [-1/(1-m), 0]} E[log(1 + l (X - m))]
//   KLinf_minus(P, m) = sup_{l in [0, 1/m]}      E[log(1 + l (X - m))]
//
// together with their inverses in m, the a(n, alpha) / b(n, alpha) calculus,
// the method-agnostic CI/CS width lower bound, and the Bernoulli/Gaussian
// oracle CI widths used for benchmarking.

#include <cstddef>
#include <cstdint>

#include "betbounds/core.hpp"

namespace betbounds {

enum class Side : std::uint8_t { plus, minus };

struct KlInfResult {
    double value = 0.0;       // nats
    double lambda_star = 0.0; // optimal betting fraction of the dual
    Side side = Side::plus;
    bool at_boundary = false; // optimum sat at the (clipped) domain endpoint
};

KlInfResult kl_inf(const DiscreteDistribution& dist, double m, Side side);

// side=plus: inf{ m >= mu : KLinf_plus >= x }, clamped to 1 when unattainable;
// side=minus mirrors toward 0. Bisection to 1e-9 in m.
double kl_inf_inverse(const DiscreteDistribution& dist, double x, Side side);

// ((1-a) log(1-a) + (2a-1) log a) / n. Throws NonPositiveLevelError once the
// numerator is nonpositive (alpha around 0.355 and above).
double a_n_alpha(std::size_t n, double alpha);

struct LowerBoundResult {
    double a = 0.0;         // a(n, alpha), nats per observation
    double upper_dev = 0.0; // KLinf_plus^{-1}(a) - mu
    double lower_dev = 0.0; // mu - KLinf_minus^{-1}(a)
    double w_star = 0.0;    // max of the two; no valid CI/CS can beat this width
};

LowerBoundResult ci_width_lower_bound(const DiscreteDistribution& dist, std::size_t n,
                                      double alpha);

// Gaussian instantiation of the same bound: sigma * sqrt(2 a(n, alpha)).
double gaussian_lower_bound(double sigma, std::size_t n, double alpha);

// Standard normal quantile, abs error <= 1e-9 (rational approximation with a
// Newton polish against erf).
double normal_quantile(double beta);

// Binomial(n, p) beta-quantile by exact pmf summation. Two-sided oracle use
// wants the outer pair: for beta < 1/2 the largest k with CDF(k) <= beta, for
// beta >= 1/2 the smallest k with CDF(k) >= beta.
long long binomial_quantile(std::size_t n, double p, double beta);

// Width of the oracle CI built from the true distribution's quantiles;
// accepts Bernoulli (binomial quantiles) and GaussianFamily (normal quantiles).
double oracle_ci_width(const NamedDistribution& dist, std::size_t n, double alpha);

// Width upper bounds for the betting CI. The empirical form evaluates the
// inverse projections of the sample's empirical distribution at
// log(3n^2/alpha)/n; the deterministic form uses the population distribution
// at b(n, alpha) = log(3n^2/alpha)/n + 9 log(3n^2/alpha)/(n sigma^2), plus a
// 1/n^2 grid term.
double betting_ci_width_upper_bound_empirical(const Sample& sample, double alpha);
double betting_ci_width_upper_bound_deterministic(const DiscreteDistribution& dist,
                                                  std::size_t n, double alpha);

} // namespace betbounds
