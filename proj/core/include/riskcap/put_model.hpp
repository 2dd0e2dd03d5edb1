#pragma once

#include "riskcap/black_scholes.hpp"
#include "riskcap/scenario_model.hpp"

namespace riskcap::models {

struct PutParams {
    double s0 = 100.0;
    double strike = 100.0;
    double rate = 0.01;
    double drift = 0.05;
    double sigma = 0.20;
    double maturity = 1.0 / 3.0;
    double horizon = 1.0 / 52.0;

    void validate() const;
};

// Short put on one Black-Scholes asset. X = S_tau, Y = e^{-r(T-tau)} (K - S_T)^+.
class PutModel final : public ScenarioModel {
public:
    explicit PutModel(PutParams params = {});

    std::string_view id() const override { return "put"; }
    std::size_t factor_dim() const override { return 1; }
    std::size_t latent_dim() const override { return 1; }
    const Eigen::MatrixXd& loading() const override { return loading_; }
    is::MonotonicityProfile monotonicity(std::uint64_t) const override;
    void factors(std::span<const double> z, std::span<double> x) const override;
    double payoff(std::span<const double> x, Rng& inner) const override;
    std::optional<double> conditional_value(std::span<const double> x) const override;

    const PutParams& params() const { return p_; }

    // S_tau at the given quantile of its real-world law.
    double horizon_quantile(double level) const;

    // VaR from the Black-Scholes value at the (1 - alpha_var)-quantile of
    // S_tau (the loss decreases in S_tau); ES from the empirical estimator over
    // Black-Scholes values of n_ref simulated S_tau.
    ReferenceValues reference(double alpha_var, double alpha_es, std::size_t n_ref,
                              std::uint64_t seed) const;

private:
    PutParams p_;
    Eigen::MatrixXd loading_;
};

} // namespace riskcap::models
