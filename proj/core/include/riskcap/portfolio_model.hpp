#pragma once

#include <vector>

#include "riskcap/black_scholes.hpp"
#include "riskcap/scenario_model.hpp"

namespace riskcap::models {

struct OptionPosition {
    double s0 = 100.0;
    double drift = 0.05;
    double sigma = 0.20;
    double strike = 100.0;
    OptionKind kind = OptionKind::put;
};

struct PortfolioParams {
    std::vector<OptionPosition> positions;  // one underlying per position
    double rate = 0.01;
    double maturity = 1.0 / 3.0;
    double horizon = 1.0 / 52.0;
    double correlation = 0.30;        // real-world equicorrelation
    double inner_correlation = 0.30;  // pricing-measure equicorrelation

    // 20 short options: calls on assets 1-10 and puts on 11-20, with
    // drift_i = drift_{10+i} = (2.5 + i/2)% and sigma_i = sigma_{10+i} = (14 + i)%.
    static PortfolioParams standard();
    void validate() const;
};

// Portfolio of short European options on equicorrelated Black-Scholes assets.
class PortfolioModel final : public ScenarioModel {
public:
    explicit PortfolioModel(PortfolioParams params = PortfolioParams::standard());

    std::string_view id() const override { return "options20"; }
    std::size_t factor_dim() const override { return p_.positions.size(); }
    std::size_t latent_dim() const override { return p_.positions.size(); }
    // diag(sigma_i sqrt(tau)) times the Cholesky factor of the correlation.
    const Eigen::MatrixXd& loading() const override { return loading_; }
    is::MonotonicityProfile monotonicity(std::uint64_t) const override;
    void factors(std::span<const double> z, std::span<double> x) const override;
    double payoff(std::span<const double> x, Rng& inner) const override;
    std::optional<double> conditional_value(std::span<const double> x) const override;

    const PortfolioParams& params() const { return p_; }

    // Empirical VaR/ES of the sum of Black-Scholes values over n_ref
    // simulated horizon prices.
    ReferenceValues reference(double alpha_var, double alpha_es, std::size_t n_ref,
                              std::uint64_t seed) const;

private:
    PortfolioParams p_;
    Eigen::MatrixXd loading_;
    Eigen::MatrixXd inner_factor_;  // Cholesky factor of the pricing correlation
};

} // namespace riskcap::models
