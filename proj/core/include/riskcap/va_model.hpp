#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "riskcap/scenario_model.hpp"

namespace riskcap::models {

// Gaussian short rate and mortality intensity under the pricing measure:
//   dr  = zeta (gamma_bar - r) dt + sigma_r dW^r
//   dmu = kappa mu dt + sigma_mu dW^mu,   d<W^r, W^mu> = rho dt
struct AffineRates {
    double zeta = 0.25;
    double gamma_bar = 0.0192;
    double sigma_r = 0.01;
    double kappa = 0.07;
    double sigma_mu = 0.0012;
    double rho = -0.04;
};

// Pure endowment value A(k) exp(-B_r(k) r - B_mu(k) mu) with
//   B_r'  = 1 - zeta B_r,   B_mu' = 1 + kappa B_mu,   B(0) = 0,
//   (log A)' = -zeta gamma_bar B_r + (sigma_r^2 B_r^2 + sigma_mu^2 B_mu^2)/2
//              + rho sigma_r sigma_mu B_r B_mu,       log A(0) = 0.
struct EndowmentCoefficients {
    double log_a = 0.0;
    double b_r = 0.0;
    double b_mu = 0.0;

    double value(double r, double mu) const { return std::exp(log_a - b_r * r - b_mu * mu); }
};

EndowmentCoefficients endowment_coefficients(const AffineRates& rates, double k);

// How a payoff draw given X is generated.
enum class VaInnerScheme {
    pathwise,        // e^{-int (r + mu)} max{...} under the pricing measure
    forward_measure  // E(tau, T) max{...} under the endowment-numeraire measure
};

struct VaParams {
    double age = 55.0;
    double horizon = 1.0;
    double maturity = 15.0;
    double annuity_rate = 10.792;   // b
    double q0 = 4.605;              // log account value at 0
    double equity_drift = 0.05;     // m
    double sigma_s = 0.18;
    double r0 = 0.025;
    double zeta = 0.25;
    double gamma = 0.02;
    double sigma_r = 0.01;
    double lambda = 0.02;           // interest rate risk premium
    double mu0 = 0.01;              // mortality intensity at age x
    double kappa = 0.07;
    double sigma_mu = 0.0012;
    double rho_sr = -0.30;
    double rho_smu = 0.06;
    double rho_rmu = -0.04;
    int annuity_terms = 50;
    double max_age = 120.0;
    VaInnerScheme inner_scheme = VaInnerScheme::pathwise;

    // gamma - lambda sigma_r / zeta (gamma when sigma_r = 0).
    double gamma_bar() const;
    AffineRates pricing_rates() const;
    Eigen::Matrix3d correlation() const;
    void validate() const;
};

// Variable annuity with a guaranteed minimum income benefit. X = (q_tau, r_tau,
// mu_{x+tau}); Y discounts max{e^{q_T}, b a_{x+T}(T)} back to tau.
class VaModel final : public ScenarioModel {
public:
    explicit VaModel(VaParams params = {});

    std::string_view id() const override { return "va-gmib"; }
    std::size_t factor_dim() const override { return 3; }
    std::size_t latent_dim() const override { return 3; }
    // Cholesky factor of the covariance of X, so X = mean + A Z.
    const Eigen::MatrixXd& loading() const override { return loading_; }
    // Sign of the rank correlation of each factor with Y over 10^4 plain
    // pilot draws; |rho| < 0.01 maps to 0.
    is::MonotonicityProfile monotonicity(std::uint64_t pilot_seed) const override;
    void factors(std::span<const double> z, std::span<double> x) const override;
    double payoff(std::span<const double> x, Rng& inner) const override;

    const VaParams& params() const { return p_; }
    const Eigen::Vector3d& factor_mean() const { return mean_; }
    const Eigen::Matrix3d& factor_covariance() const { return cov_; }

    // {}_kE_{x+t}(t); zero once age x + t + k passes max_age.
    double endowment(double t, double k, double r, double mu) const;
    // a_{x+T}(T) = sum_{k=1}^{terms} {}_kE_{x+T}(T).
    double annuity(double r, double mu) const;

    // Covariance of (dW^S, r_T, mu_T, int r, int mu) noise over [tau, T] under
    // the pricing measure; the state-dependent means are added per draw.
    const Eigen::Matrix<double, 5, 5>& inner_covariance() const { return inner_cov_; }

    // Published comparison figures; there is no closed-form reference.
    static ReferenceValues reference();

    static constexpr std::size_t kPilotDraws = 10000;
    static constexpr double kPilotCutoff = 0.01;

private:
    VaParams p_;
    Eigen::Vector3d mean_;
    Eigen::Matrix3d cov_;
    Eigen::MatrixXd loading_;
    Eigen::Matrix<double, 5, 5> inner_cov_;
    Eigen::Matrix<double, 5, 5> inner_factor_;
    std::array<double, 3> forward_shift_{};  // -Cov(q_T, r_T, mu_T ; int (r + mu))
    double decay_r_ = 0.0;   // e^{-zeta (T - tau)}
    double growth_mu_ = 0.0; // e^{kappa (T - tau)}
    double int_r_ = 0.0;     // B_r(T - tau)
    double int_mu_ = 0.0;    // B_mu(T - tau)
    EndowmentCoefficients horizon_endowment_;
    std::vector<EndowmentCoefficients> annuity_terms_;
};

} // namespace riskcap::models
