#include "riskcap/va_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Cholesky>

#include "riskcap/errors.hpp"

namespace riskcap::models {
namespace {

constexpr double kAgeTolerance = 1e-9;

// (e^{a t} - 1) / a, continuous at a = 0.
double growth_integral(double a, double t) { return a == 0.0 ? t : std::expm1(a * t) / a; }

template <class F>
double simpson(F&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    const int panels = 2 * std::max(32, static_cast<int>(std::ceil((b - a) * 100.0)));
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3.0;
}

// A Gaussian noise term int k(T - s) dW^driver_s over an interval of length h.
struct NoiseTerm {
    int driver;
    std::function<double(double)> kernel;
};

Eigen::MatrixXd noise_covariance(const std::vector<NoiseTerm>& terms, const Eigen::Matrix3d& corr,
                                 double h) {
    const auto n = static_cast<Eigen::Index>(terms.size());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b <= a; ++b) {
            const auto& ta = terms[static_cast<std::size_t>(a)];
            const auto& tb = terms[static_cast<std::size_t>(b)];
            const double rho = corr(ta.driver, tb.driver);
            const double v =
                rho == 0.0 ? 0.0
                           : rho * simpson([&](double u) { return ta.kernel(u) * tb.kernel(u); }, 0.0, h);
            cov(a, b) = v;
            cov(b, a) = v;
        }
    }
    return cov;
}

enum Driver { kEquity = 0, kRate = 1, kMortality = 2 };

} // namespace

EndowmentCoefficients endowment_coefficients(const AffineRates& rates, double k) {
    if (!(k >= 0.0)) throw InvalidInput("endowment: maturity k must be non-negative");
    auto b_r = [&](double u) { return growth_integral(-rates.zeta, u); };
    auto b_mu = [&](double u) { return growth_integral(rates.kappa, u); };
    EndowmentCoefficients c;
    c.b_r = b_r(k);
    c.b_mu = b_mu(k);
    c.log_a = simpson(
        [&](double u) {
            const double br = b_r(u);
            const double bm = b_mu(u);
            return -rates.zeta * rates.gamma_bar * br +
                   0.5 * rates.sigma_r * rates.sigma_r * br * br +
                   0.5 * rates.sigma_mu * rates.sigma_mu * bm * bm +
                   rates.rho * rates.sigma_r * rates.sigma_mu * br * bm;
        },
        0.0, k);
    return c;
}

double VaParams::gamma_bar() const {
    if (sigma_r == 0.0 || lambda == 0.0) return gamma;
    return gamma - lambda * sigma_r / zeta;
}

AffineRates VaParams::pricing_rates() const {
    return AffineRates{zeta, gamma_bar(), sigma_r, kappa, sigma_mu, rho_rmu};
}

Eigen::Matrix3d VaParams::correlation() const {
    Eigen::Matrix3d c;
    c << 1.0, rho_sr, rho_smu,
         rho_sr, 1.0, rho_rmu,
         rho_smu, rho_rmu, 1.0;
    return c;
}

void VaParams::validate() const {
    if (!(horizon > 0.0 && horizon < maturity)) throw InvalidInput("va model: need 0 < tau < T");
    if (sigma_s < 0.0 || sigma_r < 0.0 || sigma_mu < 0.0) {
        throw InvalidInput("va model: volatilities must be non-negative");
    }
    if (sigma_r > 0.0 && lambda != 0.0 && zeta == 0.0) {
        throw InvalidInput("va model: a rate risk premium needs zeta != 0");
    }
    if (annuity_terms < 0) throw InvalidInput("va model: annuity_terms must be non-negative");
    Eigen::LLT<Eigen::Matrix3d> llt(correlation());
    if (llt.info() != Eigen::Success) {
        throw InvalidInput("va model: correlation matrix is not positive definite");
    }
}

VaModel::VaModel(VaParams params) : p_(params) {
    p_.validate();
    const Eigen::Matrix3d corr = p_.correlation();
    const double tau = p_.horizon;
    const double h = p_.maturity - p_.horizon;
    const double zeta = p_.zeta;
    const double kappa = p_.kappa;
    const double sr = p_.sigma_r;
    const double sm = p_.sigma_mu;

    // Real-world law of X at tau.
    mean_ << p_.q0 + (p_.equity_drift - 0.5 * p_.sigma_s * p_.sigma_s) * tau,
        p_.gamma + (p_.r0 - p_.gamma) * std::exp(-zeta * tau),
        p_.mu0 * std::exp(kappa * tau);
    const std::vector<NoiseTerm> outer = {
        {kEquity, [&](double) { return p_.sigma_s; }},
        {kRate, [&](double u) { return sr * std::exp(-zeta * u); }},
        {kMortality, [&](double u) { return sm * std::exp(kappa * u); }},
    };
    cov_ = noise_covariance(outer, corr, tau);
    loading_ = covariance_factor(cov_);

    // Pricing-measure noise over [tau, T].
    const std::vector<NoiseTerm> inner = {
        {kEquity, [](double) { return 1.0; }},
        {kRate, [&](double u) { return sr * std::exp(-zeta * u); }},
        {kMortality, [&](double u) { return sm * std::exp(kappa * u); }},
        {kRate, [&](double u) { return sr * growth_integral(-zeta, u); }},
        {kMortality, [&](double u) { return sm * growth_integral(kappa, u); }},
    };
    inner_cov_ = noise_covariance(inner, corr, h);
    inner_factor_ = covariance_factor(inner_cov_);

    decay_r_ = std::exp(-zeta * h);
    growth_mu_ = std::exp(kappa * h);
    int_r_ = growth_integral(-zeta, h);
    int_mu_ = growth_integral(kappa, h);

    // Changing to the measure with density e^{-I}/E[e^{-I}], I = int (r + mu),
    // moves each Gaussian component by -Cov(component, I).
    Eigen::Matrix<double, 5, 1> c_int, c_q, c_r, c_mu;
    c_int << 0, 0, 0, 1, 1;
    c_q << p_.sigma_s, 0, 0, 1, 0;
    c_r << 0, 1, 0, 0, 0;
    c_mu << 0, 0, 1, 0, 0;
    forward_shift_ = {-c_q.dot(inner_cov_ * c_int), -c_r.dot(inner_cov_ * c_int),
                      -c_mu.dot(inner_cov_ * c_int)};

    const AffineRates rates = p_.pricing_rates();
    horizon_endowment_ = endowment_coefficients(rates, h);
    for (int k = 1; k <= p_.annuity_terms; ++k) {
        if (p_.age + p_.maturity + k > p_.max_age + kAgeTolerance) break;
        annuity_terms_.push_back(endowment_coefficients(rates, k));
    }
}

is::MonotonicityProfile VaModel::monotonicity(std::uint64_t pilot_seed) const {
    const SampleSet pilot = simulate(kPilotDraws, 1, nullptr, pilot_seed);
    return is::pilot_monotonicity(pilot.x, factor_dim(), pilot.y, kPilotCutoff);
}

void VaModel::factors(std::span<const double> z, std::span<double> x) const {
    for (Eigen::Index i = 0; i < 3; ++i) {
        double v = mean_(i);
        for (Eigen::Index m = 0; m < 3; ++m) v += loading_(i, m) * z[static_cast<std::size_t>(m)];
        x[static_cast<std::size_t>(i)] = v;
    }
}

double VaModel::payoff(std::span<const double> x, Rng& inner) const {
    std::array<double, 5> v{};
    inner.fill_normal(v);
    std::array<double, 5> e{};
    for (int i = 0; i < 5; ++i) {
        double s = 0.0;
        for (int m = 0; m < 5; ++m) s += inner_factor_(i, m) * v[static_cast<std::size_t>(m)];
        e[static_cast<std::size_t>(i)] = s;
    }

    const double q = x[0];
    const double r = x[1];
    const double mu = x[2];
    const double gb = p_.gamma_bar();
    const double h = p_.maturity - p_.horizon;

    const double mean_rt = gb + (r - gb) * decay_r_;
    const double mean_mut = mu * growth_mu_;
    const double mean_int_r = gb * h + (r - gb) * int_r_;
    const double mean_int_mu = mu * int_mu_;
    const double q_noise = p_.sigma_s * e[0] + e[3];
    const double q_base = q + mean_int_r - 0.5 * p_.sigma_s * p_.sigma_s * h;

    if (p_.inner_scheme == VaInnerScheme::forward_measure) {
        const double qt = q_base + q_noise + forward_shift_[0];
        const double rt = mean_rt + e[1] + forward_shift_[1];
        const double mut = mean_mut + e[2] + forward_shift_[2];
        return horizon_endowment_.value(r, mu) *
               std::max(std::exp(qt), p_.annuity_rate * annuity(rt, mut));
    }

    const double qt = q_base + q_noise;
    const double rt = mean_rt + e[1];
    const double mut = mean_mut + e[2];
    const double discount = std::exp(-(mean_int_r + e[3]) - (mean_int_mu + e[4]));
    return discount * std::max(std::exp(qt), p_.annuity_rate * annuity(rt, mut));
}

double VaModel::endowment(double t, double k, double r, double mu) const {
    if (!(k >= 0.0)) throw InvalidInput("endowment: maturity k must be non-negative");
    if (p_.age + t + k > p_.max_age + kAgeTolerance) return 0.0;
    return endowment_coefficients(p_.pricing_rates(), k).value(r, mu);
}

double VaModel::annuity(double r, double mu) const {
    double total = 0.0;
    for (const auto& c : annuity_terms_) total += c.value(r, mu);
    return total;
}

ReferenceValues VaModel::reference() {
    ReferenceValues ref;
    ref.alpha_var = 0.995;
    ref.alpha_es = 0.99;
    ref.var = 139.74;  // polynomial regression, 37 monomials, 4e7 simulations
    ref.es = std::nullopt;
    ref.es_authoritative = false;
    ref.anchors = {{"var_network_plain", 138.64},
                   {"var_network_is", 138.52},
                   {"es_network_plain", 141.12},
                   {"es_network_is", 142.12}};
    return ref;
}

} // namespace riskcap::models
