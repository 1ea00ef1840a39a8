#pragma once
// Monte Carlo experiment harness: coverage studies, width-versus-n curves,
// lower-bound-versus-oracle curves, confidence-sequence effective widths,
// finite-n limiting-width checks, and the second-order width statistic of the
// MP-EB interval. Replicates run in parallel on derived seeds and aggregate
// in replicate order, so results are bit-reproducible for a given spec.

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "betbounds/betting.hpp"
#include "betbounds/core.hpp"

namespace betbounds {

struct ExperimentSpec {
    NamedDistribution dist = NamedDistribution::bernoulli(0.5);
    std::vector<Method> methods;
    std::vector<std::size_t> n_grid;
    double alpha = 0.05;
    std::size_t replicates = 2000;
    Seed seed;
    std::size_t n_max = 100000; // censoring horizon for stopping-time studies
    double sigma_known = 0.0;   // Bernstein's sigma; 0 = take it from dist
    int mixture_nodes = 64;
    double prpl_cap = 0.5;
    GridConfig grid{512, 1e-6};
    // Full mixture-CI grid sweeps per replicate are the one expensive piece;
    // coverage runs skip them unless asked (containment is still exact, via
    // direct test inversion at the true mean).
    bool record_betting_widths = false;
};

// Builds one CI per method per replicate, records containment of the true
// mean and the clipped width. For betting methods containment is decided by
// the wealth at m = mu itself; the interval hull can only be larger, so the
// reported coverage is a lower bound on hull coverage.
struct CoverageRow {
    Method method;
    std::size_t n = 0;
    std::size_t replicates = 0;
    std::size_t contained = 0;
    double coverage = 0.0;
    double width_q25 = 0.0, width_median = 0.0, width_q75 = 0.0; // NaN if not recorded
};
std::vector<CoverageRow> coverage_experiment(const ExperimentSpec& spec);

struct WidthCurveRow {
    std::size_t n = 0;
    Method method;
    double width_q25 = 0.0, width_median = 0.0, width_q75 = 0.0;
};
std::vector<WidthCurveRow> width_curve(const ExperimentSpec& spec);

// lower = method-agnostic width lower bound, oracle = true-quantile CI width.
// ratio_factor2 doubles the direct ratio (half-width versus full-width
// convention); both are emitted.
struct LowerVsOracleRow {
    std::size_t n = 0;
    double lower = 0.0;
    double oracle = 0.0;
    double ratio_direct = 0.0;
    double ratio_factor2 = 0.0;
};
std::vector<LowerVsOracleRow> lower_vs_oracle_curve(const NamedDistribution& dist,
                                                    const std::vector<std::size_t>& n_grid,
                                                    double alpha);

// Stopping times T_w = first t with CS width <= w, censored at n_max. The
// mean over replicates counts censored runs at n_max and flags them, so a
// censored mean is a lower bound, never a silent average. w_e(n) is the
// smallest uncensored grid width whose mean stopping time is <= n.
struct EffectiveWidthReport {
    std::vector<double> w_grid;          // decreasing
    std::vector<double> mean_T;          // per w
    std::vector<std::size_t> censored;   // replicates still wider than w at n_max
    std::vector<std::size_t> n_request;
    std::vector<double> w_e;             // per requested n
};
EffectiveWidthReport effective_width_estimate(const NamedDistribution& dist,
                                              const BetStrategy& strategy, double alpha,
                                              std::vector<double> w_grid,
                                              std::size_t replicates, std::size_t n_max,
                                              const GridConfig& grid, Seed seed,
                                              std::vector<std::size_t> n_request);

std::vector<double> geometric_w_grid(double w_max, double w_min, std::size_t count);

// Median of sqrt(n) * width against the method's first-order limiting width.
// For the betting CI (PrPl bets) the target is one-sided: the check is
// median <= target * (1 + tol).
struct LimitingWidthResult {
    Method method;
    std::size_t n = 0;
    double median_scaled = 0.0; // median of sqrt(n) * w
    double target = 0.0;
    double rel_error = 0.0;     // (median - target) / target
    bool one_sided = false;
};
LimitingWidthResult limiting_width_check(const NamedDistribution& dist, Method method,
                                         double alpha, std::size_t n,
                                         std::size_t replicates, Seed seed,
                                         const ExperimentSpec& opts = {});

// S_n = n (w_n^{MP-EB} - gamma_1 / sqrt(n)); its mean tends to 14 log(4/a)/3
// and its fluctuation variance to 2 log(4/a) (mu4 - sigma^4).
struct SecondOrderReport {
    std::size_t n = 0;
    std::size_t replicates = 0;
    double mean_s = 0.0;
    double target_mean = 0.0;
    double sample_variance = 0.0;
    double target_variance = 0.0;
};
SecondOrderReport second_order_statistic(const NamedDistribution& dist, double alpha,
                                         std::size_t n, std::size_t replicates, Seed seed);

// CSV emitters (header row, '.' decimal separator, 17 significant digits)
void write_csv(std::ostream& out, const std::vector<CoverageRow>& rows);
void write_csv(std::ostream& out, const std::vector<WidthCurveRow>& rows);
void write_csv(std::ostream& out, const std::vector<LowerVsOracleRow>& rows);
void write_csv(std::ostream& out, const EffectiveWidthReport& report);
void write_csv(std::ostream& out, const SecondOrderReport& report);

} // namespace betbounds
