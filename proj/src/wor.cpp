#include "betbounds/wor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "betbounds/classical.hpp"

namespace betbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9; // slack on m_t in [0,1] before declaring m contradicted

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadParamError("alpha must lie in (0,1)");
}

void check_counts(std::size_t n, std::size_t M) {
    if (n == 0) throw EmptyError("need at least one observation");
    if (n > M) throw TooManyError("sample larger than population: n=" + std::to_string(n) +
                                  " M=" + std::to_string(M));
}

} // namespace

double FinitePopulation::mean() const {
    double s = 0.0;
    for (double v : items) s += v;
    return s / static_cast<double>(items.size());
}

double FinitePopulation::variance() const {
    const double mu = mean();
    double s = 0.0;
    for (double v : items) s += (v - mu) * (v - mu);
    return s / static_cast<double>(items.size());
}

FinitePopulation validate_population(std::vector<double> items) {
    if (items.empty()) throw EmptyError("population must not be empty");
    for (std::size_t i = 0; i < items.size(); ++i)
        if (!(items[i] >= 0.0 && items[i] <= 1.0)) throw OutOfRangeError(i, items[i]);
    return FinitePopulation{std::move(items)};
}

Sample draw_wor(const FinitePopulation& pop, std::size_t n, Seed seed) {
    const std::size_t M = pop.size();
    if (n > M) throw TooManyError("cannot draw " + std::to_string(n) + " of " + std::to_string(M));
    std::vector<double> items = pop.items;
    CounterRng rng(seed);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t j = t + static_cast<std::size_t>(rng.next_below(M - t));
        std::swap(items[t], items[j]);
    }
    items.resize(n);
    return Sample{std::move(items)};
}

Interval bernstein_serfling_ci(const Sample& sample, std::size_t M, double alpha,
                               double sigma) {
    check_counts(sample.n(), M);
    check_alpha(alpha);
    if (!(sigma >= 0.0)) throw BadParamError("sigma must be >= 0");

    const double n = static_cast<double>(sample.n());
    const double Md = static_cast<double>(M);
    const double L = std::log(2.0 / alpha);
    const double shrink = 1.0 - n / Md;
    const double var_term = sigma * std::sqrt(2.0 * shrink * (1.0 + 1.0 / n) * L / n);
    const double kappa = std::max((Md / (n + 1.0) - 1.0) * shrink, 0.0);
    const double half = var_term + (4.0 / 3.0 + std::sqrt(kappa)) * L / n;
    const double c = sample.mean();
    return Interval{c - half, c + half, alpha, sample.n(), Method::bernstein_serfling};
}

Interval wor_prpl_eb_ci(const Sample& sample, std::size_t M, double alpha,
                        double lambda_cap) {
    check_counts(sample.n(), M);
    check_alpha(alpha);
    if (!(lambda_cap > 0.0 && lambda_cap < 1.0)) throw BadParamError("cap must lie in (0,1)");

    const std::size_t n = sample.n();
    const double L = std::log(2.0 / alpha);
    double mu_hat = 0.0;  // mu_0 = 0
    double sq_acc = 0.25; // 1/4 + sum (X_i - mu_{i-1})^2
    double prefix = 0.0;  // sum of observations before step i
    double num_center = 0.0, denom = 0.0, num_width = L;

    for (std::size_t i = 1; i <= n; ++i) {
        const double x = sample.values[i - 1];
        const double v_prev = i == 1 ? 0.25 : sq_acc / static_cast<double>(i - 1);
        const double lam =
            std::min(std::sqrt(2.0 * L / (static_cast<double>(n) * v_prev)), lambda_cap);
        const double remaining = static_cast<double>(M - (i - 1));
        // M/(M-i+1), the inflation from conditioning on the i-1 seen items
        const double inflate = 1.0 + static_cast<double>(i - 1) / remaining;
        const double dev = x - mu_hat;

        num_center += lam * (x + prefix / remaining);
        denom += lam * inflate;
        num_width += 4.0 * psi_e(lam) * dev * dev;

        prefix += x;
        sq_acc += dev * dev;
        mu_hat += dev / static_cast<double>(i);
    }

    const double center = num_center / denom;
    const double half = num_width / denom;
    return Interval{center - half, center + half, alpha, n, Method::wor_prpl_eb};
}

namespace {

// Wealth replay at a single candidate m with the conditional centers m_t.
// Returns +inf as soon as m is contradicted (m_t outside [0,1]).
struct WorSweep {
    const std::vector<double>& xs;
    std::size_t M;
    double alpha;
    const BetStrategy& strat;
    const std::vector<double>* prpl_lams;

    double final_log_wealth(double m) const {
        const double Md = static_cast<double>(M);
        double prefix = 0.0;

        if (strat.kind == BetStrategy::Kind::prpl_lambda) {
            double wp = 1.0, wm = 1.0, scale = 0.0;
            for (std::size_t t = 0; t < xs.size(); ++t) {
                const double remaining = Md - static_cast<double>(t);
                const double mt = (Md * m - prefix) / remaining;
                if (mt < -kFeasTol || mt > 1.0 + kFeasTol) return kInf;
                const double d = (*prpl_lams)[t] * (xs[t] - mt);
                wp *= std::max(1.0 + d, 0.0);
                wm *= std::max(1.0 - d, 0.0);
                const double mx = std::max(wp, wm);
                if (mx <= 0.0) return -kInf;
                if (mx > 1e250 || mx < 1e-250) {
                    wp /= mx;
                    wm /= mx;
                    scale += std::log(mx);
                }
                prefix += xs[t];
            }
            return scale + std::log(0.5 * (wp + wm));
        }

        // mixture (or fixed): nodes laid out on the t=1 range, then clamped
        // per step into the currently feasible range
        const int K = strat.kind == BetStrategy::Kind::mixture ? strat.mixture_nodes : 1;
        const double eps = strat.clip_eps;
        std::vector<double> lam(K), wt(K), w(K, 1.0);
        {
            const double m1 = std::clamp(m, 1e-12, 1.0 - 1e-12);
            const double lo = -(1.0 - eps) / (1.0 - m1);
            const double hi = (1.0 - eps) / m1;
            for (int k = 0; k < K; ++k) {
                lam[k] = K == 1 ? strat.fixed_lambda
                                : lo + (hi - lo) * static_cast<double>(k) / (K - 1);
                wt[k] = (k == 0 || k == K - 1) ? 0.5 : 1.0;
            }
        }
        double scale = 0.0, W = 1.0, wscale = 0.0;
        double sum_w = 0.0, sum_wl = 0.0;
        bool have_sums = false;

        for (std::size_t t = 0; t < xs.size(); ++t) {
            const double remaining = Md - static_cast<double>(t);
            const double mt = (Md * m - prefix) / remaining;
            if (mt < -kFeasTol || mt > 1.0 + kFeasTol) return kInf;
            const double mc = std::clamp(mt, 1e-12, 1.0 - 1e-12);
            const double lo = -(1.0 - eps) / (1.0 - mc);
            const double hi = (1.0 - eps) / mc;

            double bet = 0.0;
            if (have_sums) bet = std::clamp(sum_wl / sum_w, lo, hi);
            const double dx = xs[t] - mt;
            W *= 1.0 + bet * dx;
            if (W > 1e250 || W < 1e-250) {
                wscale += std::log(W);
                W = 1.0;
            }

            double mx = 0.0, sw = 0.0, swl = 0.0;
            for (int k = 0; k < K; ++k) {
                const double lk = std::clamp(lam[k], lo, hi);
                const double nw = w[k] * (1.0 + lk * dx);
                w[k] = nw;
                mx = std::max(mx, nw);
                const double ww = wt[k] * nw;
                sw += ww;
                swl += ww * lk;
            }
            if (mx > 1e250 || mx < 1e-250) {
                for (auto& v : w) v /= mx;
                sw /= mx;
                swl /= mx;
                scale += std::log(mx);
            }
            sum_w = sw;
            sum_wl = swl;
            have_sums = true;
            prefix += xs[t];
        }
        return wscale + std::log(W);
    }
};

} // namespace

Interval wor_betting_ci(const Sample& sample, std::size_t M, double alpha,
                        const BetStrategy& strategy, const GridConfig& grid) {
    check_counts(sample.n(), M);
    check_alpha(alpha);
    if (grid.points < 2) throw BadParamError("grid needs at least 2 points");

    BetStrategy strat = strategy;
    if (strat.kind == BetStrategy::Kind::prpl_lambda && strat.n_target == 0)
        strat.n_target = sample.n();
    std::vector<double> lams;
    if (strat.kind == BetStrategy::Kind::prpl_lambda)
        lams = prpl_lambda_sequence(sample, strat.n_target, alpha, strat.cap);

    WorSweep ctx{sample.values, M, alpha, strat, &lams};
    const double log_threshold = std::log(1.0 / alpha);
    const std::size_t g = grid.points;

    std::vector<double> ms(g);
    for (std::size_t i = 0; i < g; ++i)
        ms[i] = static_cast<double>(i) / static_cast<double>(g - 1);

    std::vector<double> flw(g);
    parallel_for(g, [&](std::size_t i) { flw[i] = ctx.final_log_wealth(ms[i]); });

    std::size_t i_lo = g, i_hi = g;
    for (std::size_t i = 0; i < g; ++i) {
        if (flw[i] < log_threshold) {
            if (i_lo == g) i_lo = i;
            i_hi = i;
        }
    }

    if (i_lo == g) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < g; ++i)
            if (flw[i] < flw[best]) best = i;
        Interval iv{ms[best], ms[best], alpha, sample.n(), Method::wor_betting};
        iv.empty_acceptance = true;
        return iv;
    }

    auto accepted = [&](double m) { return ctx.final_log_wealth(m) < log_threshold; };
    double lower = ms[i_lo];
    if (i_lo > 0) {
        double rej = ms[i_lo - 1], acc = ms[i_lo];
        while (acc - rej > grid.refine_tol) {
            const double mid = 0.5 * (rej + acc);
            if (accepted(mid))
                acc = mid;
            else
                rej = mid;
        }
        lower = rej;
    }
    double upper = ms[i_hi];
    if (i_hi + 1 < g) {
        double acc = ms[i_hi], rej = ms[i_hi + 1];
        while (rej - acc > grid.refine_tol) {
            const double mid = 0.5 * (acc + rej);
            if (accepted(mid))
                acc = mid;
            else
                rej = mid;
        }
        upper = rej;
    }
    return Interval{lower, upper, alpha, sample.n(), Method::wor_betting};
}

} // namespace betbounds
