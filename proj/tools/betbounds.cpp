// Command-line front end: build CIs/CSs from files or named distributions,
// compute width lower bounds, and run the Monte Carlo experiments. Emits CSV
// (and optional JSON); all randomness derives from --seed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "betbounds/betting.hpp"
#include "betbounds/classical.hpp"
#include "betbounds/core.hpp"
#include "betbounds/klinf.hpp"
#include "betbounds/sim.hpp"
#include "betbounds/wor.hpp"

using namespace betbounds;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// grammar: bernoulli:p | beta:a,b | pointmass:c | gaussian:sigma
NamedDistribution parse_dist(const std::string& spec, bool allow_gaussian) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw UsageError("bad distribution spec: " + spec);
    const std::string kind = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    auto nums = [&args]() {
        std::vector<double> out;
        std::stringstream ss(args);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw UsageError("bad number in distribution spec: " + tok);
            }
        }
        return out;
    }();
    if (kind == "bernoulli" && nums.size() == 1) return NamedDistribution::bernoulli(nums[0]);
    if (kind == "beta" && nums.size() == 2) return NamedDistribution::beta(nums[0], nums[1]);
    if (kind == "pointmass" && nums.size() == 1) return NamedDistribution::point_mass(nums[0]);
    if (kind == "gaussian" && nums.size() == 1) {
        if (!allow_gaussian)
            throw UsageError("gaussian distributions are accepted only by lower-bound");
        return NamedDistribution::gaussian_family(nums[0]);
    }
    throw UsageError("bad distribution spec: " + spec);
}

// grammar: comma list "1000,3000" or range "lo:hi:log[:count]" / "lo:hi:lin[:count]"
std::vector<std::size_t> parse_n_grid(const std::string& spec) {
    std::vector<std::size_t> out;
    if (spec.find(':') != std::string::npos) {
        std::stringstream ss(spec);
        std::string lo_s, hi_s, scale, count_s;
        std::getline(ss, lo_s, ':');
        std::getline(ss, hi_s, ':');
        std::getline(ss, scale, ':');
        std::size_t count = 10;
        if (std::getline(ss, count_s, ':')) count = std::stoull(count_s);
        const double lo = std::stod(lo_s), hi = std::stod(hi_s);
        if (!(lo >= 1 && hi > lo && count >= 2)) throw UsageError("bad n grid: " + spec);
        for (std::size_t i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(count - 1);
            double v = scale == "log" ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
            const auto n = static_cast<std::size_t>(std::llround(v));
            if (out.empty() || n > out.back()) out.push_back(n);
        }
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
    if (out.empty()) throw UsageError("empty n grid");
    return out;
}

std::vector<Method> parse_methods(const std::string& spec) {
    std::vector<Method> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_method(tok));
    if (out.empty()) throw UsageError("empty method list");
    return out;
}

struct OutputSink {
    std::string path; // empty = stdout
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(path);
        if (!f) throw UsageError("cannot open output file: " + path);
        f << text;
    }
};

void maybe_write_json(const std::string& path, const json& doc) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw UsageError("cannot open json file: " + path);
    f << doc.dump(2) << '\n';
}

std::string interval_csv(const Interval& iv, bool clip) {
    const Interval out = clip ? iv.clipped() : iv;
    std::ostringstream os;
    os << "method,n,alpha,lower,upper,width\n";
    os << method_name(out.method) << ',' << out.n << ',' << fmt17(out.alpha) << ','
       << fmt17(out.lower) << ',' << fmt17(out.upper) << ',' << fmt17(out.width()) << '\n';
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"nonasymptotic confidence intervals and sequences for bounded means"};
    app.require_subcommand(1);

    // shared knobs
    std::string dist_spec, input_path, population_path, output_path, json_path;
    std::string method_spec, n_grid_spec, methods_spec = "hoeffding,mp-eb,prpl-eb,betting-mixture";
    std::string strategy_name = "mixture", w_grid_spec, n_request_spec = "1000,10000";
    double alpha = 0.05, sigma = 0.5, cap = 0.5, fixed_lambda = 0.5, refine_tol = 1e-6;
    std::uint64_t seed = 1;
    std::size_t n = 0, M = 0, reps = 2000, n_max = 100000, grid_points = 2048;
    int nodes = 64;
    bool no_clip = false, record_betting_widths = false;

    auto* ci = app.add_subcommand("ci", "fixed-n confidence interval");
    ci->add_option("--method", method_spec, "CI method")->required();
    ci->add_option("--dist", dist_spec, "distribution spec, e.g. bernoulli:0.5");
    ci->add_option("--input", input_path, "sample file (newline floats, # comments)");
    ci->add_option("--population", population_path, "population file for WoR methods");
    ci->add_option("--n", n, "sample size when drawing");
    ci->add_option("--M", M, "population size for WoR methods with --input");
    ci->add_option("--alpha", alpha);
    ci->add_option("--seed", seed);
    ci->add_option("--sigma", sigma, "known sigma for bernstein variants");
    ci->add_option("--cap", cap, "PrPl bet cap");
    ci->add_option("--nodes", nodes, "mixture quadrature nodes");
    ci->add_option("--fixed-lambda", fixed_lambda);
    ci->add_option("--grid-points", grid_points);
    ci->add_option("--refine-tol", refine_tol);
    ci->add_flag("--no-clip", no_clip, "report the unclipped interval");
    ci->add_option("--output", output_path);

    auto* cs = app.add_subcommand("cs", "stream a confidence sequence from stdin");
    cs->add_option("--alpha", alpha);
    cs->add_option("--strategy", strategy_name, "mixture or fixed");
    cs->add_option("--fixed-lambda", fixed_lambda);
    cs->add_option("--nodes", nodes);
    cs->add_option("--grid-points", grid_points)->default_val(512);
    cs->add_option("--refine-tol", refine_tol);
    cs->add_option("--output", output_path);

    auto* lb = app.add_subcommand("lower-bound", "method-agnostic width lower bound");
    lb->add_option("--dist", dist_spec)->required();
    lb->add_option("--n", n);
    lb->add_option("--n-grid", n_grid_spec);
    lb->add_option("--alpha", alpha);
    lb->add_option("--output", output_path);
    lb->add_option("--json", json_path);

    auto* cmp = app.add_subcommand("compare", "width-vs-n curves across methods");
    cmp->add_option("--dist", dist_spec)->required();
    cmp->add_option("--n-grid", n_grid_spec)->required();
    cmp->add_option("--methods", methods_spec);
    cmp->add_option("--alpha", alpha);
    cmp->add_option("--reps", reps)->default_val(200);
    cmp->add_option("--seed", seed);
    cmp->add_option("--sigma", sigma);
    cmp->add_option("--nodes", nodes);
    cmp->add_option("--grid-points", grid_points)->default_val(512);
    cmp->add_option("--output", output_path);
    cmp->add_option("--json", json_path);

    auto* cov = app.add_subcommand("coverage", "empirical coverage study");
    cov->add_option("--dist", dist_spec)->required();
    cov->add_option("--n", n)->required();
    cov->add_option("--methods", methods_spec);
    cov->add_option("--alpha", alpha);
    cov->add_option("--reps", reps);
    cov->add_option("--seed", seed);
    cov->add_option("--sigma", sigma);
    cov->add_option("--nodes", nodes);
    cov->add_option("--grid-points", grid_points)->default_val(512);
    cov->add_flag("--record-betting-widths", record_betting_widths,
                  "grid-sweep mixture widths too (slow)");
    cov->add_option("--output", output_path);
    cov->add_option("--json", json_path);

    auto* ew = app.add_subcommand("effective-width", "CS stopping-time study");
    ew->add_option("--dist", dist_spec)->required();
    ew->add_option("--alpha", alpha);
    ew->add_option("--reps", reps)->default_val(500);
    ew->add_option("--n-max", n_max);
    ew->add_option("--w-grid", w_grid_spec, "wmax:wmin:count geometric, default 0.5:0.02:20");
    ew->add_option("--n-request", n_request_spec);
    ew->add_option("--nodes", nodes);
    ew->add_option("--grid-points", grid_points)->default_val(512);
    ew->add_option("--seed", seed);
    ew->add_option("--output", output_path);
    ew->add_option("--json", json_path);

    auto* so = app.add_subcommand("second-order", "MP-EB second-order width statistic");
    so->add_option("--dist", dist_spec)->required();
    so->add_option("--n", n)->required();
    so->add_option("--alpha", alpha);
    so->add_option("--reps", reps)->default_val(200);
    so->add_option("--seed", seed);
    so->add_option("--output", output_path);
    so->add_option("--json", json_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the parse error
        return code == 0 ? 0 : 1;
    }
    const OutputSink sink{output_path};

    if (ci->parsed()) {
        const Method method = parse_method(method_spec);
        const GridConfig grid{grid_points, refine_tol};
        Sample sample{{}};
        std::optional<FinitePopulation> pop;
        if (!population_path.empty()) {
            pop = validate_population(read_sample_file(population_path).values);
            if (n == 0) throw UsageError("--population needs --n");
            sample = draw_wor(*pop, n, Seed{seed});
            M = pop->size();
        } else if (!input_path.empty()) {
            sample = read_sample_file(input_path);
        } else if (!dist_spec.empty()) {
            if (n == 0) throw UsageError("--dist needs --n");
            sample = draw_sample(parse_dist(dist_spec, false), n, Seed{seed});
        } else {
            throw UsageError("ci needs --input, --population, or --dist");
        }

        Interval iv;
        switch (method) {
            case Method::hoeffding: iv = hoeffding_ci(sample, alpha); break;
            case Method::bernstein: iv = bernstein_ci(sample, alpha, sigma); break;
            case Method::mp_eb: iv = mp_eb_ci(sample, alpha); break;
            case Method::prpl_eb: iv = prpl_eb_ci(sample, alpha, cap); break;
            case Method::betting_mixture:
                iv = betting_ci(sample, alpha, BetStrategy::mixture(nodes), grid);
                break;
            case Method::betting_prpl:
                iv = betting_ci(sample, alpha, BetStrategy::prpl_lambda(0, cap), grid);
                break;
            case Method::betting_fixed:
                iv = betting_ci(sample, alpha, BetStrategy::fixed(fixed_lambda), grid);
                break;
            case Method::bernstein_serfling:
                if (M == 0) throw UsageError("WoR methods need --M or --population");
                iv = bernstein_serfling_ci(sample, M, alpha, sigma);
                break;
            case Method::wor_prpl_eb:
                if (M == 0) throw UsageError("WoR methods need --M or --population");
                iv = wor_prpl_eb_ci(sample, M, alpha, cap);
                break;
            case Method::wor_betting:
                if (M == 0) throw UsageError("WoR methods need --M or --population");
                iv = wor_betting_ci(sample, M, alpha, BetStrategy::mixture(nodes), grid);
                break;
            default:
                throw UsageError(std::string("method not available from ci: ") +
                                 method_name(method));
        }
        sink.write(interval_csv(iv, !no_clip));
        return 0;
    }

    if (cs->parsed()) {
        BetStrategy strat = strategy_name == "fixed" ? BetStrategy::fixed(fixed_lambda)
                            : strategy_name == "mixture"
                                ? BetStrategy::mixture(nodes)
                                : throw UsageError("unknown strategy: " + strategy_name);
        CsState state(alpha, strat, GridConfig{grid_points, refine_tol});
        std::ostringstream os;
        os << "t,lower,upper,width\n";
        std::string line;
        while (std::getline(std::cin, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            const double x = std::stod(line);
            const Interval iv = state.step(x);
            os << state.t() << ',' << fmt17(iv.lower) << ',' << fmt17(iv.upper) << ','
               << fmt17(iv.width()) << '\n';
        }
        sink.write(os.str());
        return 0;
    }

    if (lb->parsed()) {
        const NamedDistribution dist = parse_dist(dist_spec, true);
        std::vector<std::size_t> ns;
        if (!n_grid_spec.empty())
            ns = parse_n_grid(n_grid_spec);
        else if (n > 0)
            ns = {n};
        else
            throw UsageError("lower-bound needs --n or --n-grid");
        const auto rows = lower_vs_oracle_curve(dist, ns, alpha);
        std::ostringstream os;
        write_csv(os, rows);
        sink.write(os.str());
        json j;
        j["command"] = "lower-bound";
        j["alpha"] = alpha;
        j["dist"] = dist.describe();
        for (const auto& r : rows)
            j["rows"].push_back({{"n", r.n},
                                 {"lower", r.lower},
                                 {"oracle", r.oracle},
                                 {"ratio_direct", r.ratio_direct},
                                 {"ratio_factor2", r.ratio_factor2}});
        maybe_write_json(json_path, j);
        return 0;
    }

    if (cmp->parsed() || cov->parsed()) {
        ExperimentSpec spec;
        spec.dist = parse_dist(dist_spec, false);
        spec.methods = parse_methods(methods_spec);
        spec.n_grid = cmp->parsed() ? parse_n_grid(n_grid_spec) : std::vector<std::size_t>{n};
        spec.alpha = alpha;
        spec.replicates = reps;
        spec.seed = Seed{seed};
        spec.sigma_known = sigma;
        spec.mixture_nodes = nodes;
        spec.grid = GridConfig{grid_points, refine_tol};
        spec.record_betting_widths = record_betting_widths;

        std::ostringstream os;
        json j;
        if (cmp->parsed()) {
            const auto rows = width_curve(spec);
            write_csv(os, rows);
            j["command"] = "compare";
            for (const auto& r : rows)
                j["rows"].push_back({{"n", r.n},
                                     {"method", method_name(r.method)},
                                     {"width_median", r.width_median}});
        } else {
            const auto rows = coverage_experiment(spec);
            write_csv(os, rows);
            j["command"] = "coverage";
            for (const auto& r : rows)
                j["rows"].push_back({{"method", method_name(r.method)},
                                     {"coverage", r.coverage},
                                     {"contained", r.contained},
                                     {"replicates", r.replicates}});
        }
        j["alpha"] = alpha;
        j["dist"] = spec.dist.describe();
        j["seed"] = seed;
        sink.write(os.str());
        maybe_write_json(json_path, j);
        return 0;
    }

    if (ew->parsed()) {
        const NamedDistribution dist = parse_dist(dist_spec, false);
        std::vector<double> w_grid;
        if (w_grid_spec.empty()) {
            w_grid = geometric_w_grid(0.5, 0.02, 20);
        } else {
            std::stringstream ss(w_grid_spec);
            std::string a, b, c;
            std::getline(ss, a, ':');
            std::getline(ss, b, ':');
            std::getline(ss, c, ':');
            w_grid = geometric_w_grid(std::stod(a), std::stod(b), std::stoull(c));
        }
        std::vector<std::size_t> n_request;
        for (std::size_t v : parse_n_grid(n_request_spec)) n_request.push_back(v);
        const auto report = effective_width_estimate(
            dist, BetStrategy::mixture(nodes), alpha, w_grid, reps, n_max,
            GridConfig{grid_points, refine_tol}, Seed{seed}, n_request);
        std::ostringstream os;
        write_csv(os, report);
        sink.write(os.str());
        json j;
        j["command"] = "effective-width";
        j["w_grid"] = report.w_grid;
        j["mean_T"] = report.mean_T;
        j["censored"] = report.censored;
        j["n_request"] = report.n_request;
        j["w_e"] = report.w_e;
        maybe_write_json(json_path, j);
        return 0;
    }

    if (so->parsed()) {
        const auto report = second_order_statistic(parse_dist(dist_spec, false), alpha, n,
                                                   reps, Seed{seed});
        std::ostringstream os;
        write_csv(os, report);
        sink.write(os.str());
        json j;
        j["command"] = "second-order";
        j["mean_s"] = report.mean_s;
        j["target_mean"] = report.target_mean;
        j["sample_variance"] = report.sample_variance;
        j["target_variance"] = report.target_variance;
        maybe_write_json(json_path, j);
        return 0;
    }

    throw UsageError("no subcommand");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const BadParamError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
