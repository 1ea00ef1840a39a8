#pragma once
// Testing-by-betting machinery. Against each candidate mean m a bettor plays
// the payoff 1 + l_t(m)(X_t - m); the wealth process W_t(m) is a nonnegative
// martingale when m is the true mean, so {m : W_n(m) < 1/alpha} is a level
// (1-alpha) confidence set. This module implements the wealth processes, four
// betting strategies, CI extraction by grid inversion with boundary
// refinement, the anytime-valid CS with running intersection, realized regret
// against the best constant bet in hindsight, and the sup-log-wealth solver.

#include <cstddef>
#include <utility>
#include <vector>

#include "betbounds/core.hpp"

namespace betbounds {

struct GridConfig {
    std::size_t points = 2048;  // uniform m-grid on [0,1], >= 2
    double refine_tol = 1e-6;   // boundary bisection resolution
};

struct BetStrategy {
    enum class Kind { mixture, prpl_lambda, fixed, log_optimal_oracle };

    Kind kind = Kind::mixture;
    int mixture_nodes = 64;      // quadrature nodes K (>= 8)
    std::size_t n_target = 0;    // PrPl horizon; 0 = use the sample size
    double cap = 0.5;            // PrPl bet cap, in (0,1)
    double fixed_lambda = 0.0;
    std::vector<Atom> oracle_atoms; // distribution behind the log-optimal bet
    double clip_eps = 1e-6;      // bets clipped into [-(1-eps)/(1-m), (1-eps)/m]
    double regret_constant = 2.0;

    static BetStrategy mixture(int nodes = 64);
    static BetStrategy prpl_lambda(std::size_t n_target = 0, double cap = 0.5);
    static BetStrategy fixed(double lambda);
    static BetStrategy log_optimal_oracle(const DiscreteDistribution& dist);

    bool horizon_free() const { return kind != Kind::prpl_lambda; }
    Method ci_method() const;
};

// Wealth of a single bettor at candidate mean m. The PrPl strategy plays the
// plus/minus pair and reports the average (W+ + W-)/2; the others play one
// signed process. Node wealths for the mixture are kept in linear domain with
// a shared log offset, which is the max-shift trick in disguise.
class WealthState {
public:
    WealthState(double m, double alpha, const BetStrategy& strategy);

    double next_bet() const;  // bet the next observation will receive
    void update(double x);

    double m() const { return m_; }
    std::size_t t() const { return t_; }
    double last_bet() const { return last_bet_; }
    bool plus_minus() const;
    double log_wealth() const; // plus_minus: log((W+ + W-)/2)
    std::pair<double, double> log_wealth_pair() const;
    std::vector<double> mixture_node_log_wealths() const;

private:
    friend struct WealthImpl;
    double m_;
    double alpha_;
    BetStrategy strategy_;
    std::size_t t_ = 0;
    double last_bet_ = 0.0;
    // signed / plus-minus wealth, linear with offset
    double w_pos_ = 1.0, w_neg_ = 1.0, w_scale_ = 0.0;
    // mixture machinery
    std::vector<double> node_lambda_, node_weight_, node_w_;
    double node_scale_ = 0.0;
    double sum_w_ = 0.0, sum_wl_ = 0.0; // cached node sums for the next bet
    // PrPl bet recursion (t, running mean, variance proxy)
    double prpl_mu_hat_ = 0.0, prpl_sq_acc_ = 0.25;
    std::size_t prpl_n_target_ = 0;
    double oracle_lambda_ = 0.0; // log-optimal bet, solved once at construction
};

// spec-shaped functional wrappers
double next_bet(const WealthState& state, const BetStrategy& strategy);
WealthState update_wealth(WealthState state, double x, const BetStrategy& strategy);

// ---------------------------------------------------------------------------

struct SupLogWealth {
    double lambda_star = 0.0;
    double value = 0.0;
};

// sup over constant bets l in the clipped range of sum_t log(1 + l(X_t - m));
// the objective is strictly concave, solved by derivative bisection.
SupLogWealth sup_log_wealth(const Sample& sample, double m, double clip_eps = 1e-6);

// Betting CI: evaluate W_n on the m-grid, keep {m : W_n(m) < 1/alpha}, return
// the interval hull with boundaries refined by replaying the full recursion
// under bisection. An empty acceptance set degenerates to the minimal-wealth
// grid point, flagged via Interval::empty_acceptance.
Interval betting_ci(const Sample& sample, double alpha, const BetStrategy& strategy,
                    const GridConfig& grid = {});

// Hull of {m : sup-log-wealth(m) < log(1/alpha) + r_n} (regret-corrected CS
// of the universal-portfolio form).
Interval regret_corrected_cs(const Sample& sample, double alpha, double r_n,
                             const GridConfig& grid = {});

// sup-log-wealth comparator minus the realized log wealth of the strategy.
double realized_regret(const Sample& sample, double m, const BetStrategy& strategy,
                       double alpha = 0.05);

// ---------------------------------------------------------------------------
// Betting confidence sequence. Grid wealths evolve online; a grid point whose
// wealth ever reaches 1/alpha is permanently rejected (the running
// intersection makes rejection permanent anyway), so dead points cost nothing.

class CsState {
public:
    CsState(double alpha, const BetStrategy& strategy, const GridConfig& grid = {});

    // feed one observation, returns the running interval after the step
    Interval step(double x);

    const Interval& running_interval() const { return running_; }
    std::size_t t() const { return history_.size(); }
    const std::vector<double>& history() const { return history_; }
    std::size_t active_points() const;

    // boundary replay against the retained history, to refine_tol
    Interval refined_interval() const;

private:
    double alpha_;
    BetStrategy strategy_;
    GridConfig grid_;
    double log_threshold_;
    std::vector<double> ms_;
    std::vector<WealthState> states_;
    std::vector<unsigned char> rejected_;
    Interval running_;
    std::vector<double> history_;
};

// spec-shaped wrapper: mutates cs, returns the running interval
Interval betting_cs_step(CsState& cs, double x);

} // namespace betbounds
