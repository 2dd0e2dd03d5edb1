#include "riskcap/portfolio_model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "riskcap/errors.hpp"
#include "riskcap/risk_measures.hpp"

namespace riskcap::models {
namespace {

Eigen::MatrixXd equicorrelation_factor(std::size_t n, double rho) {
    Eigen::MatrixXd corr = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(n), rho);
    corr.diagonal().setOnes();
    Eigen::LLT<Eigen::MatrixXd> llt(corr);
    if (llt.info() != Eigen::Success) {
        throw InvalidInput("portfolio model: correlation matrix is not positive definite");
    }
    return llt.matrixL();
}

} // namespace

PortfolioParams PortfolioParams::standard() {
    PortfolioParams p;
    for (int half = 0; half < 2; ++half) {
        for (int i = 1; i <= 10; ++i) {
            OptionPosition pos;
            pos.drift = (2.5 + i / 2.0) / 100.0;
            pos.sigma = (14.0 + i) / 100.0;
            pos.kind = half == 0 ? OptionKind::call : OptionKind::put;
            p.positions.push_back(pos);
        }
    }
    return p;
}

void PortfolioParams::validate() const {
    if (positions.empty()) throw InvalidInput("portfolio model: no positions");
    for (const auto& pos : positions) {
        if (!(pos.s0 > 0.0 && pos.sigma > 0.0 && pos.strike > 0.0)) {
            throw InvalidInput("portfolio model: s0, sigma and strike must be positive");
        }
    }
    if (!(horizon > 0.0 && horizon < maturity)) {
        throw InvalidInput("portfolio model: need 0 < horizon < maturity");
    }
}

PortfolioModel::PortfolioModel(PortfolioParams params) : p_(std::move(params)) {
    p_.validate();
    const std::size_t n = p_.positions.size();
    Eigen::VectorXd scale(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        scale(static_cast<Eigen::Index>(i)) = p_.positions[i].sigma * std::sqrt(p_.horizon);
    }
    loading_ = scale.asDiagonal() * equicorrelation_factor(n, p_.correlation);
    inner_factor_ = equicorrelation_factor(n, p_.inner_correlation);
}

is::MonotonicityProfile PortfolioModel::monotonicity(std::uint64_t) const {
    std::vector<int> v;
    for (const auto& pos : p_.positions) v.push_back(pos.kind == OptionKind::call ? 1 : -1);
    return is::MonotonicityProfile(std::move(v));
}

void PortfolioModel::factors(std::span<const double> z, std::span<double> x) const {
    const auto n = static_cast<Eigen::Index>(p_.positions.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        double y = 0.0;
        for (Eigen::Index m = 0; m <= i; ++m) y += loading_(i, m) * z[static_cast<std::size_t>(m)];
        const auto& pos = p_.positions[static_cast<std::size_t>(i)];
        x[static_cast<std::size_t>(i)] =
            pos.s0 * std::exp((pos.drift - 0.5 * pos.sigma * pos.sigma) * p_.horizon + y);
    }
}

double PortfolioModel::payoff(std::span<const double> x, Rng& inner) const {
    const std::size_t n = p_.positions.size();
    const double h = p_.maturity - p_.horizon;
    const double sqrt_h = std::sqrt(h);
    std::vector<double> v(n);
    inner.fill_normal(v);

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = 0.0;
        for (std::size_t m = 0; m <= i; ++m) {
            w += inner_factor_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) * v[m];
        }
        const auto& pos = p_.positions[i];
        const double st = x[i] * std::exp((p_.rate - 0.5 * pos.sigma * pos.sigma) * h + pos.sigma * sqrt_h * w);
        total += pos.kind == OptionKind::call ? std::max(st - pos.strike, 0.0)
                                              : std::max(pos.strike - st, 0.0);
    }
    return std::exp(-p_.rate * h) * total;
}

std::optional<double> PortfolioModel::conditional_value(std::span<const double> x) const {
    const double h = p_.maturity - p_.horizon;
    double total = 0.0;
    for (std::size_t i = 0; i < p_.positions.size(); ++i) {
        const auto& pos = p_.positions[i];
        total += bs_price(pos.kind, x[i], pos.strike, p_.rate, pos.sigma, h);
    }
    return total;
}

ReferenceValues PortfolioModel::reference(double alpha_var, double alpha_es, std::size_t n_ref,
                                          std::uint64_t seed) const {
    const SampleSet xs = simulate_factors(n_ref, nullptr, seed);
    std::vector<double> losses(xs.size());
    for (std::size_t i = 0; i < losses.size(); ++i) losses[i] = *conditional_value(xs.row(i));

    ReferenceValues ref;
    ref.alpha_var = alpha_var;
    ref.alpha_es = alpha_es;
    ref.n_ref = n_ref;
    ref.var = risk::empirical_var_es(losses, alpha_var).var;
    ref.es = risk::empirical_var_es(losses, alpha_es).es;
    return ref;
}

} // namespace riskcap::models
