#include "betbounds/klinf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace betbounds {

namespace {

constexpr double kLambdaClip = 1.0 - 1e-9; // keeps log(1 + l(x-m)) finite at support extremes
constexpr double kValueTol = 1e-12;
constexpr double kLambdaTol = 1e-10;
constexpr int kMaxIter = 200;

double dual_objective(const DiscreteDistribution& dist, double m, double lambda) {
    double v = 0.0;
    for (const Atom& a : dist.atoms()) v += a.p * std::log1p(lambda * (a.x - m));
    return v;
}

// derivative of the dual objective; strictly decreasing in lambda
double dual_slope(const DiscreteDistribution& dist, double m, double lambda) {
    double g = 0.0;
    for (const Atom& a : dist.atoms()) {
        const double d = a.x - m;
        g += a.p * d / (1.0 + lambda * d);
    }
    return g;
}

void check_dist01(const DiscreteDistribution& dist) {
    if (dist.min_support() < 0.0 || dist.max_support() > 1.0)
        throw UnsupportedDistributionError("distribution has atoms outside [0,1]");
}

} // namespace

KlInfResult kl_inf(const DiscreteDistribution& dist, double m, Side side) {
    check_dist01(dist);

    KlInfResult out;
    out.side = side;

    double lo, hi;
    if (side == Side::plus) {
        if (!(m < 1.0)) throw DomainError("kl_inf plus needs m < 1");
        if (m <= dist.mean()) return out; // lambda* = 0, value 0
        lo = -kLambdaClip / (1.0 - m);
        hi = 0.0;
    } else {
        if (!(m > 0.0)) throw DomainError("kl_inf minus needs m > 0");
        if (m >= dist.mean()) return out;
        lo = 0.0;
        hi = kLambdaClip / m;
    }

    // slope is decreasing: positive slope at hi means boundary optimum at hi,
    // negative slope at lo means boundary optimum at lo
    if (dual_slope(dist, m, hi) >= 0.0) {
        out.lambda_star = hi;
        out.at_boundary = side == Side::minus; // hi=0 for plus is the trivial interior case
        out.value = dual_objective(dist, m, hi);
        return out;
    }
    if (dual_slope(dist, m, lo) <= 0.0) {
        out.lambda_star = lo;
        out.at_boundary = side == Side::plus;
        out.value = dual_objective(dist, m, lo);
        return out;
    }

    for (int it = 0; it < kMaxIter && hi - lo > kLambdaTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dual_slope(dist, m, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    out.lambda_star = 0.5 * (lo + hi);
    out.value = dual_objective(dist, m, out.lambda_star);
    if (out.value < 0.0 && out.value > -kValueTol) out.value = 0.0;
    return out;
}

double kl_inf_inverse(const DiscreteDistribution& dist, double x, Side side) {
    check_dist01(dist);
    if (x < 0.0) throw NonPositiveLevelError("inverse projection needs a level >= 0");
    const double mu = dist.mean();
    if (x == 0.0) return mu;

    constexpr double kEdge = 1e-12;
    constexpr double kMTol = 1e-9;

    if (side == Side::plus) {
        double hi = 1.0 - kEdge;
        if (mu >= hi) return 1.0;
        if (kl_inf(dist, hi, Side::plus).value < x) return 1.0; // level unattainable: clamp
        double lo = mu;
        while (hi - lo > kMTol) {
            const double mid = 0.5 * (lo + hi);
            if (kl_inf(dist, mid, Side::plus).value >= x)
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    }

    double lo = kEdge;
    if (mu <= lo) return 0.0;
    if (kl_inf(dist, lo, Side::minus).value < x) return 0.0;
    double hi = mu;
    while (hi - lo > kMTol) {
        const double mid = 0.5 * (lo + hi);
        if (kl_inf(dist, mid, Side::minus).value >= x)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

double a_n_alpha(std::size_t n, double alpha) {
    if (n == 0) throw EmptyError("a(n, alpha) needs n >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadParamError("alpha must lie in (0,1)");
    const double num = (1.0 - alpha) * std::log(1.0 - alpha) + (2.0 * alpha - 1.0) * std::log(alpha);
    if (!(num > 0.0))
        throw NonPositiveLevelError("a(n, alpha) nonpositive at alpha = " + std::to_string(alpha));
    return num / static_cast<double>(n);
}

LowerBoundResult ci_width_lower_bound(const DiscreteDistribution& dist, std::size_t n,
                                      double alpha) {
    LowerBoundResult r;
    r.a = a_n_alpha(n, alpha);
    const double mu = dist.mean();
    r.upper_dev = kl_inf_inverse(dist, r.a, Side::plus) - mu;
    r.lower_dev = mu - kl_inf_inverse(dist, r.a, Side::minus);
    r.w_star = std::max(r.upper_dev, r.lower_dev);
    return r;
}

double gaussian_lower_bound(double sigma, std::size_t n, double alpha) {
    if (!(sigma > 0.0)) throw BadParamError("sigma must be positive");
    return sigma * std::sqrt(2.0 * a_n_alpha(n, alpha));
}

// Acklam's rational approximation, then one Newton step against the erf-based
// CDF pushes the absolute error well below 1e-9.
double normal_quantile(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw BadParamError("quantile level must lie in (0,1)");

    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};

    const double plow = 0.02425;
    double x;
    if (beta < plow) {
        const double q = std::sqrt(-2.0 * std::log(beta));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (beta <= 1.0 - plow) {
        const double q = beta - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - beta));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    for (int i = 0; i < 2; ++i) {
        const double cdf = 0.5 * std::erfc(-x / std::sqrt(2.0));
        const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
        if (pdf <= 0.0) break;
        x -= (cdf - beta) / pdf;
    }
    return x;
}

long long binomial_quantile(std::size_t n, double p, double beta) {
    if (!(p >= 0.0 && p <= 1.0)) throw BadParamError("binomial p outside [0,1]");
    if (!(beta > 0.0 && beta < 1.0)) throw BadParamError("quantile level must lie in (0,1)");
    if (p == 0.0) return 0;
    if (p == 1.0) return static_cast<long long>(n);

    // pmf(k) in extended precision via log-gamma, Kahan-summed CDF
    const long double lp = std::log(static_cast<long double>(p));
    const long double lq = std::log1p(static_cast<long double>(-p));
    const long double lgn = std::lgammal(static_cast<long double>(n) + 1.0L);
    long double cdf = 0.0L, comp = 0.0L;
    long long last_le = -1; // largest k with CDF(k) <= beta
    for (std::size_t k = 0; k <= n; ++k) {
        const long double lpmf = lgn - std::lgammal(static_cast<long double>(k) + 1.0L) -
                                 std::lgammal(static_cast<long double>(n - k) + 1.0L) +
                                 static_cast<long double>(k) * lp +
                                 static_cast<long double>(n - k) * lq;
        const long double term = std::expl(lpmf) - comp;
        const long double next = cdf + term;
        comp = (next - cdf) - term;
        cdf = next;
        if (cdf >= static_cast<long double>(beta)) {
            if (beta >= 0.5) return static_cast<long long>(k); // smallest k with CDF >= beta
            if (cdf <= static_cast<long double>(beta)) last_le = static_cast<long long>(k);
            return last_le; // outer lower quantile
        }
        last_le = static_cast<long long>(k);
    }
    return static_cast<long long>(n);
}

double oracle_ci_width(const NamedDistribution& dist, std::size_t n, double alpha) {
    if (n == 0) throw EmptyError("oracle width needs n >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadParamError("alpha must lie in (0,1)");

    if (dist.kind == NamedDistribution::Kind::gaussian_family) {
        const double z = normal_quantile(1.0 - alpha / 2.0) - normal_quantile(alpha / 2.0);
        return dist.a * z / std::sqrt(static_cast<double>(n));
    }
    if (dist.kind == NamedDistribution::Kind::bernoulli) {
        const long long zl = binomial_quantile(n, dist.a, alpha / 2.0);
        const long long zh = binomial_quantile(n, dist.a, 1.0 - alpha / 2.0);
        return static_cast<double>(zh - zl) / static_cast<double>(n);
    }
    throw UnsupportedDistributionError("oracle width handles Bernoulli and GaussianFamily only");
}

double betting_ci_width_upper_bound_empirical(const Sample& sample, double alpha) {
    if (sample.n() == 0) throw EmptyError("empirical width bound needs observations");
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadParamError("alpha must lie in (0,1)");
    const double n = static_cast<double>(sample.n());
    const double level = std::log(3.0 * n * n / alpha) / n;
    const DiscreteDistribution emp = empirical_distribution(sample);
    const double mu = emp.mean();
    const double up = kl_inf_inverse(emp, level, Side::plus) - mu;
    const double dn = mu - kl_inf_inverse(emp, level, Side::minus);
    return 2.0 * std::max(up, dn);
}

double betting_ci_width_upper_bound_deterministic(const DiscreteDistribution& dist,
                                                  std::size_t n, double alpha) {
    if (n == 0) throw EmptyError("deterministic width bound needs n >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadParamError("alpha must lie in (0,1)");
    const double sigma2 = dist.variance();
    if (!(sigma2 > 0.0)) throw ZeroVarianceError("deterministic width bound needs sigma > 0");
    const double nd = static_cast<double>(n);
    const double logterm = std::log(3.0 * nd * nd / alpha);
    const double b = logterm / nd + 9.0 * logterm / (nd * sigma2);
    const double mu = dist.mean();
    const double up = kl_inf_inverse(dist, b, Side::plus) - mu;
    const double dn = mu - kl_inf_inverse(dist, b, Side::minus);
    return std::max(up, dn) + 1.0 / (nd * nd);
}

} // namespace betbounds
