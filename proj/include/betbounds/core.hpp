#pragma once
// Shared data model: bounded samples, intervals, finite-support distributions,
// named sampling families, file formats, and the thread helper used by the
// Monte Carlo drivers. Everything here is immutable after construction and
// safe to share across threads.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "betbounds/errors.hpp"
#include "betbounds/rng.hpp"

namespace betbounds {

// ---------------------------------------------------------------------------
// Sample: ordered observations, each in [0,1].

struct Sample {
    std::vector<double> values;

    std::size_t n() const { return values.size(); }
    double mean() const;
    double variance(bool unbiased) const; // divisor n-1 when unbiased, else n
};

// Validates bounds, preserves order. Empty sequences are permitted; the CI
// constructors reject them at their own boundary.
Sample validate_sample(std::vector<double> values);

// ---------------------------------------------------------------------------
// Interval: the hull of a confidence set. Stored unclipped; presentation-time
// clipping to [0,1] lives behind clipped().

enum class Method {
    hoeffding,
    bernstein,
    mp_eb,
    prpl_eb,
    betting_mixture,
    betting_prpl,
    betting_fixed,
    betting_oracle,
    betting_cs,
    regret_cs,
    bernstein_serfling,
    wor_prpl_eb,
    wor_betting,
};

const char* method_name(Method m);
Method parse_method(const std::string& name); // throws BadParamError

struct Interval {
    double lower = 0.0;
    double upper = 1.0;
    double alpha = 0.0;
    std::size_t n = 0;
    Method method = Method::hoeffding;
    // set when a betting grid sweep rejected every point and the interval
    // degenerated to the minimal-wealth grid point
    bool empty_acceptance = false;

    double width() const { return upper - lower; }
    bool contains(double x) const { return lower <= x && x <= upper; }
    Interval clipped() const;
};

double interval_width(const Interval& iv);

// ---------------------------------------------------------------------------
// DiscreteDistribution: finite support in [0,1] with exact moments.

struct Atom {
    double x = 0.0;
    double p = 0.0;
};

class DiscreteDistribution {
public:
    // Atoms are sorted, near-duplicates (1e-15 relative) merged, probabilities
    // must be nonnegative and sum to 1 within 1e-12.
    static DiscreteDistribution from_atoms(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    double mean() const { return mean_; }
    double variance() const { return variance_; }
    double min_support() const { return atoms_.front().x; }
    double max_support() const { return atoms_.back().x; }

private:
    std::vector<Atom> atoms_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

// Distinct sample values with multiplicity/n weights. Throws EmptyError on n=0.
DiscreteDistribution empirical_distribution(const Sample& sample);

// ---------------------------------------------------------------------------
// NamedDistribution: the sampling families used by the experiments.
// GaussianFamily is accepted only by the closed-form oracle/lower-bound
// operations, never by [0,1]-bounded samplers or CI constructors.

struct NamedDistribution {
    enum class Kind { bernoulli, beta, discrete_uniform, point_mass, gaussian_family };

    Kind kind = Kind::bernoulli;
    double a = 0.5; // bernoulli p / beta a / point mass c / gaussian sigma
    double b = 0.0; // beta b
    std::vector<double> points; // discrete uniform support

    static NamedDistribution bernoulli(double p);
    static NamedDistribution beta(double a, double b);
    static NamedDistribution discrete_uniform(std::vector<double> points);
    static NamedDistribution point_mass(double c);
    static NamedDistribution gaussian_family(double sigma);

    bool bounded01() const { return kind != Kind::gaussian_family; }
    double mean() const;
    double variance() const;
    double fourth_central_moment() const;
    std::string describe() const;
};

// i.i.d. draws, deterministic given (dist, n, seed). GaussianFamily rejected.
Sample draw_sample(const NamedDistribution& dist, std::size_t n, Seed seed);

// ---------------------------------------------------------------------------
// Sample file format: newline-delimited decimal floats, UTF-8, '#' comments.

Sample read_sample(std::istream& in);
Sample read_sample_file(const std::string& path);
void write_sample(std::ostream& out, const Sample& sample); // 17 significant digits

// ---------------------------------------------------------------------------
// Parallel helper. Thread count = min(hardware, BETBOUNDS_THREADS). Indices
// are partitioned into contiguous blocks; results must be written to
// per-index slots so serial and parallel runs agree bit for bit.

unsigned max_threads();
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace betbounds
