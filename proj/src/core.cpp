#include "betbounds/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace betbounds {

// ---------------------------------------------------------------------------
// Sample

double Sample::mean() const {
    if (values.empty()) throw EmptyError("mean of empty sample");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double Sample::variance(bool unbiased) const {
    const std::size_t m = values.size();
    if (m < (unbiased ? 2u : 1u)) throw EmptyError("variance needs more observations");
    const double mu = mean();
    double s = 0.0;
    for (double v : values) s += (v - mu) * (v - mu);
    return s / static_cast<double>(unbiased ? m - 1 : m);
}

Sample validate_sample(std::vector<double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!(v >= 0.0 && v <= 1.0)) throw OutOfRangeError(i, v);
    }
    return Sample{std::move(values)};
}

// ---------------------------------------------------------------------------
// Interval

const char* method_name(Method m) {
    switch (m) {
        case Method::hoeffding: return "hoeffding";
        case Method::bernstein: return "bernstein";
        case Method::mp_eb: return "mp-eb";
        case Method::prpl_eb: return "prpl-eb";
        case Method::betting_mixture: return "betting-mixture";
        case Method::betting_prpl: return "betting-prpl";
        case Method::betting_fixed: return "betting-fixed";
        case Method::betting_oracle: return "betting-oracle";
        case Method::betting_cs: return "betting-cs";
        case Method::regret_cs: return "regret-cs";
        case Method::bernstein_serfling: return "bernstein-serfling";
        case Method::wor_prpl_eb: return "wor-prpl-eb";
        case Method::wor_betting: return "wor-betting";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    static const Method all[] = {
        Method::hoeffding,      Method::bernstein,     Method::mp_eb,
        Method::prpl_eb,        Method::betting_mixture, Method::betting_prpl,
        Method::betting_fixed,  Method::betting_oracle,  Method::betting_cs,
        Method::regret_cs,      Method::bernstein_serfling,
        Method::wor_prpl_eb,    Method::wor_betting,
    };
    for (Method m : all)
        if (name == method_name(m)) return m;
    throw BadParamError("unknown method: " + name);
}

Interval Interval::clipped() const {
    Interval out = *this;
    out.lower = std::max(0.0, std::min(1.0, lower));
    out.upper = std::max(0.0, std::min(1.0, upper));
    if (out.lower > out.upper) out.lower = out.upper;
    return out;
}

double interval_width(const Interval& iv) { return iv.width(); }

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution DiscreteDistribution::from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw EmptyError("distribution needs at least one atom");
    std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });

    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (a.p < 0.0) throw BadParamError("negative atom probability");
        const double scale = std::max({1.0, std::fabs(a.x),
                                       merged.empty() ? 0.0 : std::fabs(merged.back().x)});
        if (!merged.empty() && a.x - merged.back().x <= 1e-15 * scale) {
            merged.back().p += a.p; // duplicate support point
        } else {
            merged.push_back(a);
        }
    }

    double total = 0.0;
    for (const Atom& a : merged) total += a.p;
    if (std::fabs(total - 1.0) > 1e-12)
        throw BadParamError("atom probabilities sum to " + std::to_string(total));

    DiscreteDistribution d;
    d.atoms_ = std::move(merged);
    double mu = 0.0;
    for (const Atom& a : d.atoms_) mu += a.p * a.x;
    double var = 0.0;
    for (const Atom& a : d.atoms_) var += a.p * (a.x - mu) * (a.x - mu);
    d.mean_ = mu;
    d.variance_ = var;
    return d;
}

DiscreteDistribution empirical_distribution(const Sample& sample) {
    if (sample.n() == 0) throw EmptyError("empirical distribution of empty sample");
    std::vector<double> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Atom> atoms;
    const double w = 1.0 / static_cast<double>(sorted.size());
    for (double v : sorted) {
        if (!atoms.empty() && v - atoms.back().x <= 1e-15 * std::max(1.0, std::fabs(v)))
            atoms.back().p += w;
        else
            atoms.push_back(Atom{v, w});
    }
    return DiscreteDistribution::from_atoms(std::move(atoms));
}

// ---------------------------------------------------------------------------
// NamedDistribution

NamedDistribution NamedDistribution::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw BadParamError("bernoulli p outside [0,1]");
    NamedDistribution d;
    d.kind = Kind::bernoulli;
    d.a = p;
    return d;
}

NamedDistribution NamedDistribution::beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw BadParamError("beta parameters must be positive");
    NamedDistribution d;
    d.kind = Kind::beta;
    d.a = a;
    d.b = b;
    return d;
}

NamedDistribution NamedDistribution::discrete_uniform(std::vector<double> points) {
    if (points.empty()) throw BadParamError("discrete uniform needs points");
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!(points[i] >= 0.0 && points[i] <= 1.0)) throw OutOfRangeError(i, points[i]);
    NamedDistribution d;
    d.kind = Kind::discrete_uniform;
    d.points = std::move(points);
    return d;
}

NamedDistribution NamedDistribution::point_mass(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw BadParamError("point mass outside [0,1]");
    NamedDistribution d;
    d.kind = Kind::point_mass;
    d.a = c;
    return d;
}

NamedDistribution NamedDistribution::gaussian_family(double sigma) {
    if (!(sigma > 0.0)) throw BadParamError("gaussian sigma must be positive");
    NamedDistribution d;
    d.kind = Kind::gaussian_family;
    d.a = sigma;
    return d;
}

// Raw moment E[X^k] of Beta(a,b): prod_{i<k} (a+i)/(a+b+i).
static double beta_raw_moment(double a, double b, int k) {
    double m = 1.0;
    for (int i = 0; i < k; ++i) m *= (a + i) / (a + b + i);
    return m;
}

double NamedDistribution::mean() const {
    switch (kind) {
        case Kind::bernoulli: return a;
        case Kind::beta: return a / (a + b);
        case Kind::point_mass: return a;
        case Kind::gaussian_family: return 0.0; // location-free family
        case Kind::discrete_uniform: {
            double s = 0.0;
            for (double x : points) s += x;
            return s / static_cast<double>(points.size());
        }
    }
    return 0.0;
}

double NamedDistribution::variance() const {
    switch (kind) {
        case Kind::bernoulli: return a * (1.0 - a);
        case Kind::beta: return a * b / ((a + b) * (a + b) * (a + b + 1.0));
        case Kind::point_mass: return 0.0;
        case Kind::gaussian_family: return a * a;
        case Kind::discrete_uniform: {
            const double mu = mean();
            double s = 0.0;
            for (double x : points) s += (x - mu) * (x - mu);
            return s / static_cast<double>(points.size());
        }
    }
    return 0.0;
}

double NamedDistribution::fourth_central_moment() const {
    switch (kind) {
        case Kind::bernoulli: {
            const double p = a, q = 1.0 - a;
            return p * q * (q * q * q + p * p * p);
        }
        case Kind::beta: {
            const double m1 = beta_raw_moment(a, b, 1);
            const double m2 = beta_raw_moment(a, b, 2);
            const double m3 = beta_raw_moment(a, b, 3);
            const double m4 = beta_raw_moment(a, b, 4);
            return m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
        }
        case Kind::point_mass: return 0.0;
        case Kind::gaussian_family: return 3.0 * a * a * a * a;
        case Kind::discrete_uniform: {
            const double mu = mean();
            double s = 0.0;
            for (double x : points) {
                const double d = x - mu;
                s += d * d * d * d;
            }
            return s / static_cast<double>(points.size());
        }
    }
    return 0.0;
}

std::string NamedDistribution::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::bernoulli: os << "bernoulli:" << a; break;
        case Kind::beta: os << "beta:" << a << "," << b; break;
        case Kind::point_mass: os << "pointmass:" << a; break;
        case Kind::gaussian_family: os << "gaussian:" << a; break;
        case Kind::discrete_uniform: os << "discreteuniform[" << points.size() << "]"; break;
    }
    return os.str();
}

Sample draw_sample(const NamedDistribution& dist, std::size_t n, Seed seed) {
    if (!dist.bounded01())
        throw UnsupportedDistributionError("cannot draw bounded samples from GaussianFamily");
    CounterRng rng(seed);
    std::vector<double> xs(n);
    switch (dist.kind) {
        case NamedDistribution::Kind::bernoulli:
            for (auto& x : xs) x = rng.next_bernoulli(dist.a) ? 1.0 : 0.0;
            break;
        case NamedDistribution::Kind::beta:
            for (auto& x : xs) x = rng.next_beta(dist.a, dist.b);
            break;
        case NamedDistribution::Kind::point_mass:
            for (auto& x : xs) x = dist.a;
            break;
        case NamedDistribution::Kind::discrete_uniform:
            for (auto& x : xs) x = dist.points[rng.next_below(dist.points.size())];
            break;
        case NamedDistribution::Kind::gaussian_family:
            break; // unreachable
    }
    return Sample{std::move(xs)};
}

// ---------------------------------------------------------------------------
// Sample file IO

Sample read_sample(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string tok = line.substr(first, last - first + 1);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw BadParamError("bad number on line " + std::to_string(lineno) + ": " + tok);
        values.push_back(v);
    }
    return validate_sample(std::move(values));
}

Sample read_sample_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadParamError("cannot open sample file: " + path);
    return read_sample(in);
}

void write_sample(std::ostream& out, const Sample& sample) {
    char buf[64];
    for (double v : sample.values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out << buf;
    }
}

// ---------------------------------------------------------------------------
// Threads

unsigned max_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("BETBOUNDS_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(max_threads(), count == 0 ? 1 : count));
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = count * w / workers;
        const std::size_t hi = count * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::scoped_lock lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace betbounds
