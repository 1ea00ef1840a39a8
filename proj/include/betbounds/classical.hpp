#pragma once
// Closed-form concentration CIs for a mean in [0,1]:
//
//   Hoeffding      w = 2 sqrt(log(2/a) / 2n)
//   Bernstein      w = 2 s sqrt(2 log(2/a) / n) + 4 log(2/a) / 3n     (s known)
//   MP-EB          w = 2 sh sqrt(2 log(4/a) / n) + 14 log(4/a) / 3(n-1)
//   PrPl-EB        center sum(l_t X_t)/sum(l_t),
//                  half-width (log(2/a) + sum 4 psi_E(l_t)(X_t - mu_{t-1})^2) / sum(l_t)
//
// with the predictable plug-in bets l_t = sqrt(2 log(2/a) / (n V_{t-1})),
// V_0 = 1/4, mu_0 = 0, t V_t = 1/4 + sum_{i<=t} (X_i - mu_{i-1})^2, capped so
// psi_E stays finite. Widths are full widths (upper - lower), natural logs
// throughout.

#include <cstddef>
#include <vector>

#include "betbounds/core.hpp"

namespace betbounds {

// psi_E(l) = (-log(1-l) - l) / 4 on [0,1); nonnegative and increasing.
double psi_e(double lambda);

Interval hoeffding_ci(const Sample& sample, double alpha);
Interval bernstein_ci(const Sample& sample, double alpha, double sigma);
Interval mp_eb_ci(const Sample& sample, double alpha);

// Streaming accumulator behind the PrPl-EB CI. Feeding observations one at a
// time is bit-identical to batch construction.
class PrPlState {
public:
    PrPlState(std::size_t n_target, double alpha, double lambda_cap = 0.5);

    // the bet l_{t+1,n} that the next observation will receive (already capped)
    double next_lambda() const;
    void update(double x);

    std::size_t t() const { return t_; }
    double mu_hat() const { return mu_hat_; }
    double running_variance() const; // V_t, seeded with 1/4
    double sum_lambda() const { return sum_lambda_; }
    Interval interval() const; // throws EmptyError before the first update

private:
    std::size_t t_ = 0;
    double mu_hat_ = 0.0;   // mu_0 = 0 by convention
    double sq_acc_ = 0.25;  // 1/4 + sum (X_i - mu_{i-1})^2
    double sum_lambda_ = 0.0;
    double sum_lambda_x_ = 0.0;
    double sum_psi_term_ = 0.0;
    std::size_t n_target_;
    double lambda_cap_;
    double alpha_;
};

Interval prpl_eb_ci(const Sample& sample, double alpha, double lambda_cap = 0.5);

// The full bet sequence {l_{t,n_target} : t = 1..n} for a sample, shared with
// the betting module (Eq. of the PrPl bets is horizon-tuned via n_target).
std::vector<double> prpl_lambda_sequence(const Sample& sample, std::size_t n_target,
                                         double alpha, double lambda_cap = 0.5);

} // namespace betbounds
