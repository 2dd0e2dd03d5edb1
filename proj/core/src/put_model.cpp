#include "riskcap/put_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "riskcap/errors.hpp"
#include "riskcap/normal.hpp"
#include "riskcap/risk_measures.hpp"

namespace riskcap::models {

void PutParams::validate() const {
    if (!(s0 > 0.0 && strike > 0.0 && sigma >= 0.0 && maturity > 0.0 && horizon > 0.0)) {
        throw InvalidInput("put model: s0, strike, maturity and horizon must be positive");
    }
    if (!(horizon < maturity)) throw InvalidInput("put model: horizon must precede maturity");
}

PutModel::PutModel(PutParams params) : p_(params) {
    p_.validate();
    loading_ = Eigen::MatrixXd::Constant(1, 1, p_.sigma * std::sqrt(p_.horizon));
}

is::MonotonicityProfile PutModel::monotonicity(std::uint64_t) const {
    return is::MonotonicityProfile({-1});
}

void PutModel::factors(std::span<const double> z, std::span<double> x) const {
    const double drift = (p_.drift - 0.5 * p_.sigma * p_.sigma) * p_.horizon;
    x[0] = p_.s0 * std::exp(drift + loading_(0, 0) * z[0]);
}

double PutModel::payoff(std::span<const double> x, Rng& inner) const {
    const double h = p_.maturity - p_.horizon;
    const double st =
        x[0] * std::exp((p_.rate - 0.5 * p_.sigma * p_.sigma) * h + p_.sigma * std::sqrt(h) * inner.normal());
    return std::exp(-p_.rate * h) * std::max(p_.strike - st, 0.0);
}

std::optional<double> PutModel::conditional_value(std::span<const double> x) const {
    return bs_price(OptionKind::put, x[0], p_.strike, p_.rate, p_.sigma, p_.maturity - p_.horizon);
}

double PutModel::horizon_quantile(double level) const {
    const double drift = (p_.drift - 0.5 * p_.sigma * p_.sigma) * p_.horizon;
    return p_.s0 * std::exp(drift + loading_(0, 0) * standard_normal_quantile(level));
}

ReferenceValues PutModel::reference(double alpha_var, double alpha_es, std::size_t n_ref,
                                    std::uint64_t seed) const {
    ReferenceValues ref;
    ref.alpha_var = alpha_var;
    ref.alpha_es = alpha_es;
    ref.n_ref = n_ref;
    ref.var = *conditional_value(std::array{horizon_quantile(1.0 - alpha_var)});

    const SampleSet xs = simulate_factors(n_ref, nullptr, seed);
    std::vector<double> losses(xs.size());
    for (std::size_t i = 0; i < losses.size(); ++i) losses[i] = *conditional_value(xs.row(i));
    ref.es = risk::empirical_var_es(losses, alpha_es).es;
    return ref;
}

} // namespace riskcap::models
