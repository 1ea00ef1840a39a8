#include "betbounds/betting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "betbounds/classical.hpp"

namespace betbounds {

namespace {

constexpr double kRenormHigh = 1e250;
constexpr double kRenormLow = 1e-250;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadParamError("alpha must lie in (0,1)");
}

void check_strategy(const BetStrategy& s) {
    if (s.kind == BetStrategy::Kind::mixture && s.mixture_nodes < 8)
        throw BadParamError("mixture needs K >= 8 nodes");
    if (!(s.cap > 0.0 && s.cap < 1.0)) throw BadParamError("bet cap must lie in (0,1)");
    if (!(s.clip_eps > 0.0 && s.clip_eps <= 1e-2))
        throw BadParamError("clip_eps must lie in (0, 1e-2]");
}

// feasible constant-bet range at candidate mean m, shrunk so the payoff
// 1 + l(x-m) stays strictly positive on [0,1]
void bet_range(double m, double clip_eps, double* lo, double* hi) {
    *lo = -(1.0 - clip_eps) / (1.0 - m);
    *hi = (1.0 - clip_eps) / m;
}

// Best constant bet against a finite-support distribution, full two-sided
// domain. The slope l -> E[(X-m)/(1+l(X-m))] is strictly decreasing.
double solve_log_optimal(const std::vector<Atom>& atoms, double m, double clip_eps) {
    double lo, hi;
    bet_range(m, clip_eps, &lo, &hi);
    auto slope = [&](double l) {
        double g = 0.0;
        for (const Atom& a : atoms) {
            const double d = a.x - m;
            g += a.p * d / (1.0 + l * d);
        }
        return g;
    };
    if (slope(hi) >= 0.0) return hi;
    if (slope(lo) <= 0.0) return lo;
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (slope(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

// ---------------------------------------------------------------------------
// BetStrategy

BetStrategy BetStrategy::mixture(int nodes) {
    BetStrategy s;
    s.kind = Kind::mixture;
    s.mixture_nodes = nodes;
    check_strategy(s);
    return s;
}

BetStrategy BetStrategy::prpl_lambda(std::size_t n_target, double cap) {
    BetStrategy s;
    s.kind = Kind::prpl_lambda;
    s.n_target = n_target;
    s.cap = cap;
    check_strategy(s);
    return s;
}

BetStrategy BetStrategy::fixed(double lambda) {
    BetStrategy s;
    s.kind = Kind::fixed;
    s.fixed_lambda = lambda;
    return s;
}

BetStrategy BetStrategy::log_optimal_oracle(const DiscreteDistribution& dist) {
    BetStrategy s;
    s.kind = Kind::log_optimal_oracle;
    s.oracle_atoms = dist.atoms();
    return s;
}

Method BetStrategy::ci_method() const {
    switch (kind) {
        case Kind::mixture: return Method::betting_mixture;
        case Kind::prpl_lambda: return Method::betting_prpl;
        case Kind::fixed: return Method::betting_fixed;
        case Kind::log_optimal_oracle: return Method::betting_oracle;
    }
    return Method::betting_mixture;
}

// ---------------------------------------------------------------------------
// WealthState

WealthState::WealthState(double m, double alpha, const BetStrategy& strategy)
    : m_(m), alpha_(alpha), strategy_(strategy) {
    check_alpha(alpha);
    check_strategy(strategy);
    using Kind = BetStrategy::Kind;
    if (strategy.kind == Kind::prpl_lambda) {
        if (!(m >= 0.0 && m <= 1.0)) throw DomainError("candidate mean outside [0,1]");
        prpl_n_target_ = strategy.n_target;
        if (prpl_n_target_ == 0) throw BadParamError("PrPl bets need a positive horizon");
        return;
    }
    if (!(m > 0.0 && m < 1.0))
        throw DomainError("bet range needs m in (0,1); grid endpoints are resolved logically");
    if (strategy.kind == Kind::mixture) {
        const int k = strategy.mixture_nodes;
        double lo, hi;
        bet_range(m, strategy.clip_eps, &lo, &hi);
        node_lambda_.resize(k);
        node_weight_.resize(k);
        node_w_.assign(k, 1.0);
        for (int i = 0; i < k; ++i) {
            node_lambda_[i] = lo + (hi - lo) * static_cast<double>(i) / (k - 1);
            node_weight_[i] = (i == 0 || i == k - 1) ? 0.5 : 1.0; // trapezoid
        }
    } else if (strategy.kind == Kind::log_optimal_oracle) {
        if (strategy.oracle_atoms.empty())
            throw BadParamError("log-optimal oracle needs a distribution");
        oracle_lambda_ = solve_log_optimal(strategy.oracle_atoms, m, strategy.clip_eps);
    } else { // fixed
        double lo, hi;
        bet_range(m, strategy.clip_eps, &lo, &hi);
        oracle_lambda_ = std::clamp(strategy.fixed_lambda, lo, hi);
    }
}

bool WealthState::plus_minus() const {
    return strategy_.kind == BetStrategy::Kind::prpl_lambda;
}

double WealthState::next_bet() const {
    switch (strategy_.kind) {
        case BetStrategy::Kind::mixture:
            if (t_ == 0) return 0.0; // the mixture method opens with a zero bet
            return sum_wl_ / sum_w_;
        case BetStrategy::Kind::prpl_lambda: {
            const double v_prev = t_ == 0 ? 0.25 : prpl_sq_acc_ / static_cast<double>(t_);
            const double raw = std::sqrt(2.0 * std::log(2.0 / alpha_) /
                                         (static_cast<double>(prpl_n_target_) * v_prev));
            return std::min(raw, strategy_.cap);
        }
        case BetStrategy::Kind::fixed:
        case BetStrategy::Kind::log_optimal_oracle:
            return oracle_lambda_;
    }
    return 0.0;
}

void WealthState::update(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw OutOfRangeError(t_, x);
    const double bet = next_bet();
    const double dx = x - m_;

    if (plus_minus()) {
        const double d = bet * dx;
        w_pos_ *= 1.0 + d;
        w_neg_ *= 1.0 - d;
        const double mx = std::max(w_pos_, w_neg_);
        if (mx > kRenormHigh || mx < kRenormLow) {
            w_pos_ /= mx;
            w_neg_ /= mx;
            w_scale_ += std::log(mx);
        }
        const double dev = x - prpl_mu_hat_;
        prpl_sq_acc_ += dev * dev;
        prpl_mu_hat_ += dev / static_cast<double>(t_ + 1);
    } else {
        w_pos_ *= 1.0 + bet * dx;
        if (w_pos_ > kRenormHigh || w_pos_ < kRenormLow) {
            w_scale_ += std::log(w_pos_);
            w_pos_ = 1.0;
        }
        if (strategy_.kind == BetStrategy::Kind::mixture) {
            double mx = 0.0, sw = 0.0, swl = 0.0;
            const std::size_t k = node_w_.size();
            for (std::size_t i = 0; i < k; ++i) {
                const double w = node_w_[i] * (1.0 + node_lambda_[i] * dx);
                node_w_[i] = w;
                mx = std::max(mx, w);
                const double ww = node_weight_[i] * w;
                sw += ww;
                swl += ww * node_lambda_[i];
            }
            if (mx > kRenormHigh || mx < kRenormLow) {
                for (auto& w : node_w_) w /= mx;
                sw /= mx;
                swl /= mx;
                node_scale_ += std::log(mx);
            }
            sum_w_ = sw;
            sum_wl_ = swl;
        }
    }
    last_bet_ = bet;
    ++t_;
}

double WealthState::log_wealth() const {
    if (plus_minus()) return w_scale_ + std::log(0.5 * (w_pos_ + w_neg_));
    return w_scale_ + std::log(w_pos_);
}

std::pair<double, double> WealthState::log_wealth_pair() const {
    if (plus_minus())
        return {w_scale_ + std::log(w_pos_), w_scale_ + std::log(w_neg_)};
    const double lw = log_wealth();
    return {lw, lw};
}

std::vector<double> WealthState::mixture_node_log_wealths() const {
    std::vector<double> out(node_w_.size());
    for (std::size_t i = 0; i < node_w_.size(); ++i)
        out[i] = node_scale_ + std::log(node_w_[i]);
    return out;
}

double next_bet(const WealthState& state, const BetStrategy&) { return state.next_bet(); }

WealthState update_wealth(WealthState state, double x, const BetStrategy&) {
    state.update(x);
    return state;
}

// ---------------------------------------------------------------------------
// sup log wealth

SupLogWealth sup_log_wealth(const Sample& sample, double m, double clip_eps) {
    if (sample.n() == 0) throw EmptyError("sup-log-wealth needs observations");
    if (!(m > 0.0 && m < 1.0)) throw DomainError("sup-log-wealth needs m in (0,1)");
    if (!(clip_eps > 0.0 && clip_eps <= 1e-2))
        throw BadParamError("clip_eps must lie in (0, 1e-2]");

    const std::vector<double>& xs = sample.values;
    auto slope = [&](double l) {
        double g = 0.0;
        for (double x : xs) {
            const double d = x - m;
            g += d / (1.0 + l * d);
        }
        return g;
    };
    auto objective = [&](double l) {
        double v = 0.0;
        for (double x : xs) v += std::log1p(l * (x - m));
        return v;
    };

    double lo, hi;
    bet_range(m, clip_eps, &lo, &hi);
    if (slope(hi) >= 0.0) return {hi, objective(hi)};
    if (slope(lo) <= 0.0) return {lo, objective(lo)};
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (slope(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double star = 0.5 * (lo + hi);
    double value = objective(star);
    if (value < 0.0 && value > -1e-12) value = 0.0;
    return {star, value};
}

// ---------------------------------------------------------------------------
// grid inversion

namespace {

// Per-m wealth replay over a fixed sample, tuned for the grid sweep: node
// wealths and the played wealth stay in linear domain with log offsets.
struct SweepContext {
    const std::vector<double>& xs;
    double alpha;
    const BetStrategy& strat;
    const std::vector<double>* prpl_lams; // precomputed PrPl bets (m-independent)
    bool any_positive = false;
    bool any_below_one = false;
    double log_threshold;

    SweepContext(const std::vector<double>& xs, double alpha, const BetStrategy& strat,
                 const std::vector<double>* lams)
        : xs(xs), alpha(alpha), strat(strat), prpl_lams(lams),
          log_threshold(std::log(1.0 / alpha)) {
        for (double x : xs) {
            if (x > 0.0) any_positive = true;
            if (x < 1.0) any_below_one = true;
        }
    }

    double final_log_wealth(double m) const {
        using Kind = BetStrategy::Kind;
        if (strat.kind == Kind::prpl_lambda) {
            double wp = 1.0, wm = 1.0, scale = 0.0;
            for (std::size_t t = 0; t < xs.size(); ++t) {
                const double d = (*prpl_lams)[t] * (xs[t] - m);
                wp *= 1.0 + d;
                wm *= 1.0 - d;
                const double mx = std::max(wp, wm);
                if (mx > kRenormHigh || mx < kRenormLow) {
                    wp /= mx;
                    wm /= mx;
                    scale += std::log(mx);
                }
            }
            return scale + std::log(0.5 * (wp + wm));
        }
        if (strat.kind == Kind::mixture) {
            WealthState st(m, alpha, strat);
            for (double x : xs) st.update(x);
            return st.log_wealth();
        }
        // fixed / oracle: one signed product
        double lam;
        if (strat.kind == Kind::log_optimal_oracle)
            lam = solve_log_optimal(strat.oracle_atoms, m, strat.clip_eps);
        else {
            double lo, hi;
            bet_range(m, strat.clip_eps, &lo, &hi);
            lam = std::clamp(strat.fixed_lambda, lo, hi);
        }
        double w = 1.0, scale = 0.0;
        for (double x : xs) {
            w *= 1.0 + lam * (x - m);
            if (w > kRenormHigh || w < kRenormLow) {
                scale += std::log(w);
                w = 1.0;
            }
        }
        return scale + std::log(w);
    }

    // Endpoints carry the logical rule: m=0 means X=0 a.s., so any positive
    // observation excludes it outright (symmetrically for m=1).
    bool accepted(double m) const {
        if (m <= 0.0) return !any_positive;
        if (m >= 1.0) return !any_below_one;
        return final_log_wealth(m) < log_threshold;
    }
};

std::vector<double> linspace01(std::size_t g) {
    std::vector<double> ms(g);
    for (std::size_t i = 0; i < g; ++i)
        ms[i] = static_cast<double>(i) / static_cast<double>(g - 1);
    ms.front() = 0.0;
    ms.back() = 1.0;
    return ms;
}

// Generic hull extraction: sweep a predicate over the grid, refine both
// boundaries by bisection to refine_tol, report outer (rejected-side) edges.
template <typename Accepted, typename Score>
Interval invert_grid(const Accepted& accepted, const Score& score, double alpha,
                     std::size_t n, Method tag, const GridConfig& grid) {
    if (grid.points < 2) throw BadParamError("grid needs at least 2 points");
    if (!(grid.refine_tol > 0.0)) throw BadParamError("refine_tol must be positive");
    const std::vector<double> ms = linspace01(grid.points);
    const std::size_t g = ms.size();

    std::vector<unsigned char> acc(g, 0);
    parallel_for(g, [&](std::size_t i) { acc[i] = accepted(ms[i]) ? 1 : 0; });

    std::size_t i_lo = g, i_hi = g;
    for (std::size_t i = 0; i < g; ++i) {
        if (acc[i]) {
            if (i_lo == g) i_lo = i;
            i_hi = i;
        }
    }

    if (i_lo == g) {
        // nothing accepted: degenerate at the minimal-score grid point
        std::vector<double> sc(g, kInf);
        parallel_for(g, [&](std::size_t i) {
            if (ms[i] > 0.0 && ms[i] < 1.0) sc[i] = score(ms[i]);
        });
        std::size_t best = 0;
        for (std::size_t i = 1; i < g; ++i)
            if (sc[i] < sc[best]) best = i;
        Interval iv{ms[best], ms[best], alpha, n, tag};
        iv.empty_acceptance = true;
        return iv;
    }

    double lower = ms[i_lo];
    if (i_lo > 0) {
        double rej = ms[i_lo - 1], accp = ms[i_lo];
        while (accp - rej > grid.refine_tol) {
            const double mid = 0.5 * (rej + accp);
            if (accepted(mid))
                accp = mid;
            else
                rej = mid;
        }
        lower = rej;
    }
    double upper = ms[i_hi];
    if (i_hi + 1 < g) {
        double accp = ms[i_hi], rej = ms[i_hi + 1];
        while (rej - accp > grid.refine_tol) {
            const double mid = 0.5 * (accp + rej);
            if (accepted(mid))
                accp = mid;
            else
                rej = mid;
        }
        upper = rej;
    }
    return Interval{lower, upper, alpha, n, tag};
}

BetStrategy resolve_strategy(const BetStrategy& strategy, std::size_t n) {
    BetStrategy s = strategy;
    if (s.kind == BetStrategy::Kind::prpl_lambda && s.n_target == 0) s.n_target = n;
    return s;
}

} // namespace

Interval betting_ci(const Sample& sample, double alpha, const BetStrategy& strategy,
                    const GridConfig& grid) {
    check_alpha(alpha);
    check_strategy(strategy);
    const Method tag = strategy.ci_method();
    if (sample.n() == 0) return Interval{0.0, 1.0, alpha, 0, tag}; // W_0 = 1 everywhere

    const BetStrategy strat = resolve_strategy(strategy, sample.n());
    std::vector<double> lams;
    if (strat.kind == BetStrategy::Kind::prpl_lambda)
        lams = prpl_lambda_sequence(sample, strat.n_target, alpha, strat.cap);

    SweepContext ctx(sample.values, alpha, strat, &lams);
    return invert_grid([&](double m) { return ctx.accepted(m); },
                       [&](double m) { return ctx.final_log_wealth(m); }, alpha, sample.n(),
                       tag, grid);
}

Interval regret_corrected_cs(const Sample& sample, double alpha, double r_n,
                             const GridConfig& grid) {
    check_alpha(alpha);
    if (sample.n() == 0) throw EmptyError("regret-corrected CS needs observations");
    if (!(r_n >= 0.0)) throw BadParamError("regret allowance must be >= 0");

    bool any_positive = false, any_below_one = false;
    for (double x : sample.values) {
        if (x > 0.0) any_positive = true;
        if (x < 1.0) any_below_one = true;
    }
    const double threshold = std::log(1.0 / alpha) + r_n;
    auto accepted = [&](double m) {
        if (m <= 0.0) return !any_positive;
        if (m >= 1.0) return !any_below_one;
        return sup_log_wealth(sample, m).value < threshold;
    };
    auto score = [&](double m) { return sup_log_wealth(sample, m).value; };
    return invert_grid(accepted, score, alpha, sample.n(), Method::regret_cs, grid);
}

double realized_regret(const Sample& sample, double m, const BetStrategy& strategy,
                       double alpha) {
    if (sample.n() == 0) throw EmptyError("regret needs observations");
    const BetStrategy strat = resolve_strategy(strategy, sample.n());
    WealthState st(m, alpha, strat);
    for (double x : sample.values) st.update(x);
    // the comparator is the best constant bet for the signed payoff sequence
    const double realized = st.log_wealth_pair().first;
    return sup_log_wealth(sample, m, strat.clip_eps).value - realized;
}

// ---------------------------------------------------------------------------
// Confidence sequence

CsState::CsState(double alpha, const BetStrategy& strategy, const GridConfig& grid)
    : alpha_(alpha), strategy_(strategy), grid_(grid),
      log_threshold_(std::log(1.0 / alpha)) {
    check_alpha(alpha);
    check_strategy(strategy);
    if (!strategy.horizon_free())
        throw HorizonDependentStrategyError(
            "confidence sequences need horizon-free bets (mixture or fixed)");
    if (grid.points < 2) throw BadParamError("grid needs at least 2 points");

    ms_ = linspace01(grid.points);
    rejected_.assign(ms_.size(), 0);
    states_.reserve(ms_.size() - 2);
    for (std::size_t i = 1; i + 1 < ms_.size(); ++i)
        states_.emplace_back(ms_[i], alpha, strategy_);
    running_ = Interval{0.0, 1.0, alpha, 0, Method::betting_cs};
}

Interval CsState::step(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw OutOfRangeError(history_.size(), x);
    history_.push_back(x);

    const std::size_t g = ms_.size();
    if (x > 0.0) rejected_[0] = 1;      // m=0 excluded by any positive observation
    if (x < 1.0) rejected_[g - 1] = 1;  // m=1 likewise
    for (std::size_t i = 1; i + 1 < g; ++i) {
        if (rejected_[i]) continue; // permanently dead under the running intersection
        WealthState& st = states_[i - 1];
        st.update(x);
        if (st.log_wealth() >= log_threshold_) rejected_[i] = 1;
    }

    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < g; ++i) {
        if (!rejected_[i]) {
            lo = std::min(lo, ms_[i]);
            hi = std::max(hi, ms_[i]);
        }
    }
    if (lo > hi) {
        // every grid point rejected: the running set is empty
        const double mid = 0.5 * (running_.lower + running_.upper);
        running_.lower = running_.upper = mid;
        running_.empty_acceptance = true;
    } else {
        // rejection is permanent, so the instantaneous hull is already nested
        running_.lower = std::max(running_.lower, lo);
        running_.upper = std::min(running_.upper, hi);
        if (running_.upper < running_.lower) running_.upper = running_.lower;
    }
    running_.n = history_.size();
    return running_;
}

std::size_t CsState::active_points() const {
    std::size_t c = 0;
    for (unsigned char r : rejected_)
        if (!r) ++c;
    return c;
}

Interval CsState::refined_interval() const {
    if (history_.empty() || running_.empty_acceptance) return running_;

    // survives == wealth stays under 1/alpha throughout the replay
    auto survives = [&](double m) {
        WealthState st(m, alpha_, strategy_);
        for (double x : history_) {
            st.update(x);
            if (st.log_wealth() >= log_threshold_) return false;
        }
        return true;
    };

    const std::size_t g = ms_.size();
    std::size_t i_lo = g, i_hi = g;
    for (std::size_t i = 0; i < g; ++i) {
        if (!rejected_[i]) {
            if (i_lo == g) i_lo = i;
            i_hi = i;
        }
    }
    Interval out = running_;
    if (i_lo != g && i_lo > 0) {
        double rej = ms_[i_lo - 1], acc = ms_[i_lo];
        while (acc - rej > grid_.refine_tol) {
            const double mid = 0.5 * (rej + acc);
            if (mid > 0.0 && mid < 1.0 && survives(mid))
                acc = mid;
            else
                rej = mid;
        }
        out.lower = rej;
    }
    if (i_hi != g && i_hi + 1 < g) {
        double acc = ms_[i_hi], rej = ms_[i_hi + 1];
        while (rej - acc > grid_.refine_tol) {
            const double mid = 0.5 * (acc + rej);
            if (mid > 0.0 && mid < 1.0 && survives(mid))
                acc = mid;
            else
                rej = mid;
        }
        out.upper = rej;
    }
    return out;
}

Interval betting_cs_step(CsState& cs, double x) { return cs.step(x); }

} // namespace betbounds
