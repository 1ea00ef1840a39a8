#include "betbounds/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "betbounds/classical.hpp"
#include "betbounds/klinf.hpp"

namespace betbounds {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return kNaN;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(i);
    return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

struct Quartiles {
    double q25, median, q75;
};

Quartiles quartiles(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return {quantile_sorted(v, 0.25), quantile_sorted(v, 0.5), quantile_sorted(v, 0.75)};
}

bool is_betting(Method m) {
    return m == Method::betting_mixture || m == Method::betting_prpl ||
           m == Method::betting_fixed || m == Method::betting_oracle;
}

BetStrategy strategy_for(Method m, const ExperimentSpec& spec, std::size_t n) {
    switch (m) {
        case Method::betting_prpl: {
            BetStrategy s = BetStrategy::prpl_lambda(n, spec.prpl_cap);
            return s;
        }
        case Method::betting_oracle: {
            std::vector<Atom> atoms;
            if (spec.dist.kind == NamedDistribution::Kind::bernoulli) {
                atoms = {{0.0, 1.0 - spec.dist.a}, {1.0, spec.dist.a}};
            } else if (spec.dist.kind == NamedDistribution::Kind::point_mass) {
                atoms = {{spec.dist.a, 1.0}};
            } else {
                throw UnsupportedDistributionError(
                    "log-optimal oracle needs a finite-support distribution");
            }
            return BetStrategy::log_optimal_oracle(DiscreteDistribution::from_atoms(atoms));
        }
        case Method::betting_fixed:
            return BetStrategy::fixed(0.5);
        default:
            return BetStrategy::mixture(spec.mixture_nodes);
    }
}

double sigma_for(const ExperimentSpec& spec) {
    if (spec.sigma_known > 0.0) return spec.sigma_known;
    return std::sqrt(spec.dist.variance());
}

// Containment of the true mean for a betting CI, decided by the wealth at
// m = mu (exact test inversion; the hull only adds points).
bool betting_contains_mu(const Sample& sample, double mu, double alpha,
                         const BetStrategy& strategy) {
    if (mu <= 0.0 || mu >= 1.0) {
        for (double x : sample.values) {
            if (mu <= 0.0 && x > 0.0) return false;
            if (mu >= 1.0 && x < 1.0) return false;
        }
        return true;
    }
    WealthState st(mu, alpha, strategy);
    for (double x : sample.values) st.update(x);
    return st.log_wealth() < std::log(1.0 / alpha);
}

Interval build_ci(Method m, const Sample& sample, const ExperimentSpec& spec) {
    switch (m) {
        case Method::hoeffding: return hoeffding_ci(sample, spec.alpha);
        case Method::bernstein: return bernstein_ci(sample, spec.alpha, sigma_for(spec));
        case Method::mp_eb: return mp_eb_ci(sample, spec.alpha);
        case Method::prpl_eb: return prpl_eb_ci(sample, spec.alpha, spec.prpl_cap);
        default:
            return betting_ci(sample, spec.alpha, strategy_for(m, spec, sample.n()),
                              spec.grid);
    }
}

} // namespace

std::vector<CoverageRow> coverage_experiment(const ExperimentSpec& spec) {
    if (spec.replicates == 0) throw BadParamError("need replicates >= 1");
    if (spec.methods.empty()) throw BadParamError("need at least one method");
    if (spec.n_grid.size() != 1) throw BadParamError("coverage runs at a single n");
    const std::size_t n = spec.n_grid.front();
    const double mu = spec.dist.mean();
    const std::size_t m_count = spec.methods.size();

    std::vector<unsigned char> contained(spec.replicates * m_count, 0);
    std::vector<double> widths(spec.replicates * m_count, kNaN);

    parallel_for(spec.replicates, [&](std::size_t r) {
        const Sample sample =
            draw_sample(spec.dist, n, spec.seed.replicate(spec.seed.replicate_index + r));
        for (std::size_t k = 0; k < m_count; ++k) {
            const Method method = spec.methods[k];
            bool in;
            double width = kNaN;
            if (is_betting(method)) {
                const BetStrategy strat = strategy_for(method, spec, n);
                in = betting_contains_mu(sample, mu, spec.alpha, strat);
                if (spec.record_betting_widths || method == Method::betting_prpl)
                    width = betting_ci(sample, spec.alpha, strat, spec.grid)
                                .clipped()
                                .width();
            } else {
                const Interval iv = build_ci(method, sample, spec);
                in = iv.contains(mu);
                width = iv.clipped().width();
            }
            contained[r * m_count + k] = in ? 1 : 0;
            widths[r * m_count + k] = width;
        }
    });

    std::vector<CoverageRow> rows;
    for (std::size_t k = 0; k < m_count; ++k) {
        CoverageRow row;
        row.method = spec.methods[k];
        row.n = n;
        row.replicates = spec.replicates;
        std::vector<double> ws;
        for (std::size_t r = 0; r < spec.replicates; ++r) {
            row.contained += contained[r * m_count + k];
            const double w = widths[r * m_count + k];
            if (!std::isnan(w)) ws.push_back(w);
        }
        row.coverage = static_cast<double>(row.contained) / static_cast<double>(spec.replicates);
        if (!ws.empty()) {
            const Quartiles q = quartiles(std::move(ws));
            row.width_q25 = q.q25;
            row.width_median = q.median;
            row.width_q75 = q.q75;
        } else {
            row.width_q25 = row.width_median = row.width_q75 = kNaN;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<WidthCurveRow> width_curve(const ExperimentSpec& spec) {
    if (spec.replicates == 0) throw BadParamError("need replicates >= 1");
    if (spec.methods.empty()) throw BadParamError("need at least one method");
    if (spec.n_grid.empty()) throw BadParamError("need an n grid");
    for (std::size_t i = 1; i < spec.n_grid.size(); ++i)
        if (spec.n_grid[i] <= spec.n_grid[i - 1])
            throw BadParamError("n grid must be strictly increasing");

    std::vector<WidthCurveRow> rows;
    for (std::size_t n : spec.n_grid) {
        const std::size_t m_count = spec.methods.size();
        std::vector<double> widths(spec.replicates * m_count);
        parallel_for(spec.replicates, [&](std::size_t r) {
            const Sample sample = draw_sample(
                spec.dist, n, spec.seed.replicate(spec.seed.replicate_index + r));
            for (std::size_t k = 0; k < m_count; ++k)
                widths[r * m_count + k] =
                    build_ci(spec.methods[k], sample, spec).clipped().width();
        });
        for (std::size_t k = 0; k < m_count; ++k) {
            std::vector<double> ws(spec.replicates);
            for (std::size_t r = 0; r < spec.replicates; ++r)
                ws[r] = widths[r * m_count + k];
            const Quartiles q = quartiles(std::move(ws));
            rows.push_back(WidthCurveRow{n, spec.methods[k], q.q25, q.median, q.q75});
        }
    }
    return rows;
}

std::vector<LowerVsOracleRow> lower_vs_oracle_curve(const NamedDistribution& dist,
                                                    const std::vector<std::size_t>& n_grid,
                                                    double alpha) {
    if (n_grid.empty()) throw BadParamError("need an n grid");
    std::vector<LowerVsOracleRow> rows;
    for (std::size_t n : n_grid) {
        LowerVsOracleRow row;
        row.n = n;
        if (dist.kind == NamedDistribution::Kind::gaussian_family) {
            row.lower = gaussian_lower_bound(dist.a, n, alpha);
        } else if (dist.kind == NamedDistribution::Kind::bernoulli) {
            if (!(dist.a > 0.0 && dist.a < 1.0))
                throw BadParamError("Bernoulli lower bound needs p in (0,1)");
            const DiscreteDistribution two = DiscreteDistribution::from_atoms(
                {{0.0, 1.0 - dist.a}, {1.0, dist.a}});
            row.lower = ci_width_lower_bound(two, n, alpha).w_star;
        } else {
            throw UnsupportedDistributionError(
                "lower-vs-oracle handles Bernoulli and GaussianFamily");
        }
        row.oracle = oracle_ci_width(dist, n, alpha);
        row.ratio_direct = row.oracle / row.lower;
        row.ratio_factor2 = 2.0 * row.ratio_direct;
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> geometric_w_grid(double w_max, double w_min, std::size_t count) {
    if (!(w_max > w_min && w_min > 0.0) || count < 2) throw BadParamError("bad width grid");
    std::vector<double> ws(count);
    const double ratio = std::pow(w_min / w_max, 1.0 / static_cast<double>(count - 1));
    double w = w_max;
    for (std::size_t i = 0; i < count; ++i) {
        ws[i] = w;
        w *= ratio;
    }
    return ws;
}

EffectiveWidthReport effective_width_estimate(const NamedDistribution& dist,
                                              const BetStrategy& strategy, double alpha,
                                              std::vector<double> w_grid,
                                              std::size_t replicates, std::size_t n_max,
                                              const GridConfig& grid, Seed seed,
                                              std::vector<std::size_t> n_request) {
    if (replicates == 0) throw BadParamError("need replicates >= 1");
    if (w_grid.empty()) throw BadParamError("need a width grid");
    for (std::size_t i = 1; i < w_grid.size(); ++i)
        if (!(w_grid[i] < w_grid[i - 1])) throw BadParamError("width grid must decrease");
    if (n_max == 0) throw BadParamError("need a positive censoring horizon");

    const std::size_t wk = w_grid.size();
    const std::size_t censored_mark = n_max + 1;
    std::vector<std::size_t> stop(replicates * wk, censored_mark);

    parallel_for(replicates, [&](std::size_t r) {
        CounterRng rng(seed.replicate(seed.replicate_index + r));
        // draw online to avoid materializing n_max observations per replicate
        CsState cs(alpha, strategy, grid);
        std::size_t next_w = 0;
        double prev_width = std::numeric_limits<double>::infinity();
        for (std::size_t t = 1; t <= n_max && next_w < wk; ++t) {
            double x;
            switch (dist.kind) {
                case NamedDistribution::Kind::bernoulli:
                    x = rng.next_bernoulli(dist.a) ? 1.0 : 0.0;
                    break;
                case NamedDistribution::Kind::beta:
                    x = rng.next_beta(dist.a, dist.b);
                    break;
                case NamedDistribution::Kind::point_mass:
                    x = dist.a;
                    break;
                case NamedDistribution::Kind::discrete_uniform:
                    x = dist.points[rng.next_below(dist.points.size())];
                    break;
                default:
                    throw UnsupportedDistributionError("CS needs a [0,1]-bounded distribution");
            }
            const Interval iv = cs.step(x);
            const double width = iv.width();
            if (width > prev_width + 1e-12)
                throw std::logic_error("CS width increased along a path");
            prev_width = width;
            while (next_w < wk && width <= w_grid[next_w]) {
                stop[r * wk + next_w] = t;
                ++next_w;
            }
        }
    });

    EffectiveWidthReport rep;
    rep.w_grid = w_grid;
    rep.mean_T.assign(wk, 0.0);
    rep.censored.assign(wk, 0);
    for (std::size_t k = 0; k < wk; ++k) {
        double total = 0.0;
        std::size_t cens = 0;
        for (std::size_t r = 0; r < replicates; ++r) {
            const std::size_t t = stop[r * wk + k];
            if (t == censored_mark) {
                ++cens;
                total += static_cast<double>(n_max); // lower bound contribution
            } else {
                total += static_cast<double>(t);
            }
        }
        rep.mean_T[k] = total / static_cast<double>(replicates);
        rep.censored[k] = cens;
    }

    rep.n_request = n_request;
    for (std::size_t n : n_request) {
        double best = kNaN;
        for (std::size_t k = 0; k < wk; ++k) {
            if (rep.censored[k] == 0 && rep.mean_T[k] <= static_cast<double>(n))
                best = rep.w_grid[k]; // grid decreases, so the last hit is smallest
        }
        if (std::isnan(best))
            throw AllCensoredError("no uncensored width reaches mean stopping time <= " +
                                   std::to_string(n));
        rep.w_e.push_back(best);
    }
    return rep;
}

LimitingWidthResult limiting_width_check(const NamedDistribution& dist, Method method,
                                         double alpha, std::size_t n,
                                         std::size_t replicates, Seed seed,
                                         const ExperimentSpec& opts) {
    const double sigma = std::sqrt(dist.variance());
    LimitingWidthResult res;
    res.method = method;
    res.n = n;
    switch (method) {
        case Method::hoeffding:
            res.target = 2.0 * std::sqrt(std::log(2.0 / alpha) / 2.0);
            break;
        case Method::bernstein:
        case Method::prpl_eb:
            res.target = 2.0 * sigma * std::sqrt(2.0 * std::log(2.0 / alpha));
            break;
        case Method::mp_eb:
            res.target = 2.0 * sigma * std::sqrt(2.0 * std::log(4.0 / alpha));
            break;
        case Method::betting_prpl:
        case Method::betting_mixture:
            res.target = 2.0 * sigma * std::sqrt(2.0 * std::log(2.0 / alpha));
            res.one_sided = true; // betting is asymptotically no worse than PrPl-EB
            break;
        default:
            throw BadParamError("no limiting-width target for this method");
    }

    ExperimentSpec spec = opts;
    spec.dist = dist;
    spec.alpha = alpha;
    spec.seed = seed;
    spec.sigma_known = sigma;
    std::vector<double> scaled(replicates);
    parallel_for(replicates, [&](std::size_t r) {
        const Sample sample =
            draw_sample(dist, n, seed.replicate(seed.replicate_index + r));
        const Interval iv = build_ci(method, sample, spec);
        scaled[r] = std::sqrt(static_cast<double>(n)) * iv.width();
    });
    std::sort(scaled.begin(), scaled.end());
    res.median_scaled = quantile_sorted(scaled, 0.5);
    res.rel_error = (res.median_scaled - res.target) / res.target;
    return res;
}

SecondOrderReport second_order_statistic(const NamedDistribution& dist, double alpha,
                                         std::size_t n, std::size_t replicates, Seed seed) {
    if (replicates < 2) throw BadParamError("need replicates >= 2");
    const double sigma2 = dist.variance();
    const double sigma = std::sqrt(sigma2);
    const double mu4 = dist.fourth_central_moment();
    const double L = std::log(4.0 / alpha);
    const double gamma1 = 2.0 * sigma * std::sqrt(2.0 * L);

    std::vector<double> s(replicates);
    parallel_for(replicates, [&](std::size_t r) {
        const Sample sample =
            draw_sample(dist, n, seed.replicate(seed.replicate_index + r));
        const double w = mp_eb_ci(sample, alpha).width();
        s[r] = static_cast<double>(n) * (w - gamma1 / std::sqrt(static_cast<double>(n)));
    });

    SecondOrderReport rep;
    rep.n = n;
    rep.replicates = replicates;
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(replicates);
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    var /= static_cast<double>(replicates - 1);
    rep.mean_s = mean;
    rep.target_mean = 14.0 * L / 3.0;
    rep.sample_variance = var;
    rep.target_variance = 2.0 * L * (mu4 - sigma2 * sigma2);
    return rep;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

void put(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

} // namespace

void write_csv(std::ostream& out, const std::vector<CoverageRow>& rows) {
    out << "method,n,replicates,contained,coverage,width_q25,width_median,width_q75\n";
    for (const auto& r : rows) {
        out << method_name(r.method) << ',' << r.n << ',' << r.replicates << ','
            << r.contained << ',';
        put(out, r.coverage);
        out << ',';
        put(out, r.width_q25);
        out << ',';
        put(out, r.width_median);
        out << ',';
        put(out, r.width_q75);
        out << '\n';
    }
}

void write_csv(std::ostream& out, const std::vector<WidthCurveRow>& rows) {
    out << "n,method,width_q25,width_median,width_q75\n";
    for (const auto& r : rows) {
        out << r.n << ',' << method_name(r.method) << ',';
        put(out, r.width_q25);
        out << ',';
        put(out, r.width_median);
        out << ',';
        put(out, r.width_q75);
        out << '\n';
    }
}

void write_csv(std::ostream& out, const std::vector<LowerVsOracleRow>& rows) {
    out << "n,lower,oracle,ratio_direct,ratio_factor2\n";
    for (const auto& r : rows) {
        out << r.n << ',';
        put(out, r.lower);
        out << ',';
        put(out, r.oracle);
        out << ',';
        put(out, r.ratio_direct);
        out << ',';
        put(out, r.ratio_factor2);
        out << '\n';
    }
}

void write_csv(std::ostream& out, const EffectiveWidthReport& report) {
    out << "w,mean_T,censored\n";
    for (std::size_t k = 0; k < report.w_grid.size(); ++k) {
        put(out, report.w_grid[k]);
        out << ',';
        put(out, report.mean_T[k]);
        out << ',' << report.censored[k] << '\n';
    }
    out << "n,w_e\n";
    for (std::size_t i = 0; i < report.n_request.size(); ++i) {
        out << report.n_request[i] << ',';
        put(out, report.w_e[i]);
        out << '\n';
    }
}

void write_csv(std::ostream& out, const SecondOrderReport& report) {
    out << "n,replicates,mean_s,target_mean,sample_variance,target_variance\n";
    out << report.n << ',' << report.replicates << ',';
    put(out, report.mean_s);
    out << ',';
    put(out, report.target_mean);
    out << ',';
    put(out, report.sample_variance);
    out << ',';
    put(out, report.target_variance);
    out << '\n';
}

} // namespace betbounds
