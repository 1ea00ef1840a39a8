#pragma once
// Mean estimation for a finite population of M values in [0,1], sampled
// uniformly without replacement. Uncertainty collapses as n approaches M; the
// CIs here capture that through the (1 - n/M) Serfling factor, the inflated
// PrPl denominator, and the conditionally recentered betting wealth
//
//   W_n(m) = prod_t (1 + l_t(m) (X_t - m_t)),   m_t = (M m - sum_{i<t} X_i) / (M - t + 1).
//
// A candidate m whose conditional center m_t leaves [0,1] is logically
// contradicted by the observed items and is treated as rejected.

#include <cstddef>
#include <vector>

#include "betbounds/betting.hpp"
#include "betbounds/core.hpp"

namespace betbounds {

struct FinitePopulation {
    std::vector<double> items;

    std::size_t size() const { return items.size(); }
    double mean() const;
    double variance() const; // 1/M divisor
};

FinitePopulation validate_population(std::vector<double> items);

// uniformly random n-prefix of a permutation; deterministic given seed
Sample draw_wor(const FinitePopulation& pop, std::size_t n, Seed seed);

Interval bernstein_serfling_ci(const Sample& sample, std::size_t M, double alpha,
                               double sigma);

Interval wor_prpl_eb_ci(const Sample& sample, std::size_t M, double alpha,
                        double lambda_cap = 0.5);

Interval wor_betting_ci(const Sample& sample, std::size_t M, double alpha,
                        const BetStrategy& strategy, const GridConfig& grid = {});

} // namespace betbounds
