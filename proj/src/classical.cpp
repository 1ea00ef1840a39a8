#include "betbounds/classical.hpp"

#include <cmath>

namespace betbounds {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadParamError("alpha must lie in (0,1)");
}

void check_nonempty(const Sample& s, std::size_t least) {
    if (s.n() < least)
        throw EmptyError("need at least " + std::to_string(least) + " observations");
}

} // namespace

double psi_e(double lambda) {
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw DomainError("psi_e domain is [0,1), got " + std::to_string(lambda));
    // -log(1-l) - l has no constant or linear term; log1p keeps it accurate near 0
    return (-std::log1p(-lambda) - lambda) / 4.0;
}

Interval hoeffding_ci(const Sample& sample, double alpha) {
    check_nonempty(sample, 1);
    check_alpha(alpha);
    const double n = static_cast<double>(sample.n());
    const double half = std::sqrt(std::log(2.0 / alpha) / (2.0 * n));
    const double c = sample.mean();
    return Interval{c - half, c + half, alpha, sample.n(), Method::hoeffding};
}

Interval bernstein_ci(const Sample& sample, double alpha, double sigma) {
    check_nonempty(sample, 1);
    check_alpha(alpha);
    if (!(sigma > 0.0 && sigma <= 0.5)) throw BadParamError("sigma must lie in (0, 0.5]");
    const double n = static_cast<double>(sample.n());
    const double L = std::log(2.0 / alpha);
    const double half = sigma * std::sqrt(2.0 * L / n) + 2.0 * L / (3.0 * n);
    const double c = sample.mean();
    return Interval{c - half, c + half, alpha, sample.n(), Method::bernstein};
}

Interval mp_eb_ci(const Sample& sample, double alpha) {
    check_nonempty(sample, 2);
    check_alpha(alpha);
    const double n = static_cast<double>(sample.n());
    const double L = std::log(4.0 / alpha);
    const double sigma_hat = std::sqrt(sample.variance(/*unbiased=*/true));
    const double half = sigma_hat * std::sqrt(2.0 * L / n) + 7.0 * L / (3.0 * (n - 1.0));
    const double c = sample.mean();
    return Interval{c - half, c + half, alpha, sample.n(), Method::mp_eb};
}

PrPlState::PrPlState(std::size_t n_target, double alpha, double lambda_cap)
    : n_target_(n_target), lambda_cap_(lambda_cap), alpha_(alpha) {
    check_alpha(alpha);
    if (n_target == 0) throw EmptyError("PrPl bets need a positive horizon");
    if (!(lambda_cap > 0.0 && lambda_cap < 1.0)) throw BadParamError("lambda cap must lie in (0,1)");
}

double PrPlState::running_variance() const {
    return t_ == 0 ? 0.25 : sq_acc_ / static_cast<double>(t_);
}

double PrPlState::next_lambda() const {
    const double v_prev = running_variance(); // V_t, predicting step t+1
    const double raw =
        std::sqrt(2.0 * std::log(2.0 / alpha_) / (static_cast<double>(n_target_) * v_prev));
    return std::min(raw, lambda_cap_);
}

void PrPlState::update(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw OutOfRangeError(t_, x);
    const double lam = next_lambda();
    const double dev = x - mu_hat_;
    sum_lambda_ += lam;
    sum_lambda_x_ += lam * x;
    sum_psi_term_ += 4.0 * psi_e(lam) * dev * dev;
    sq_acc_ += dev * dev;
    ++t_;
    mu_hat_ += dev / static_cast<double>(t_);
}

Interval PrPlState::interval() const {
    if (t_ == 0) throw EmptyError("PrPl-EB interval needs at least one observation");
    const double center = sum_lambda_x_ / sum_lambda_;
    const double half = (std::log(2.0 / alpha_) + sum_psi_term_) / sum_lambda_;
    return Interval{center - half, center + half, alpha_, t_, Method::prpl_eb};
}

Interval prpl_eb_ci(const Sample& sample, double alpha, double lambda_cap) {
    check_nonempty(sample, 1);
    PrPlState st(sample.n(), alpha, lambda_cap);
    for (double x : sample.values) st.update(x);
    return st.interval();
}

std::vector<double> prpl_lambda_sequence(const Sample& sample, std::size_t n_target,
                                         double alpha, double lambda_cap) {
    PrPlState st(n_target, alpha, lambda_cap);
    std::vector<double> lams;
    lams.reserve(sample.n());
    for (double x : sample.values) {
        lams.push_back(st.next_lambda());
        st.update(x);
    }
    return lams;
}

} // namespace betbounds
