#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "riskcap/importance_sampling.hpp"
#include "riskcap/rng.hpp"
#include "riskcap/sample_set.hpp"

namespace riskcap::models {

// Reference figures a model can produce (or quote) for VaR and ES.
struct ReferenceValues {
    double alpha_var = 0.0;
    double alpha_es = 0.0;
    double var = 0.0;
    std::optional<double> es;
    std::size_t n_ref = 0;
    bool es_authoritative = true;
    std::vector<std::pair<std::string, double>> anchors;  // published comparison figures
};

// Risk factors X = u(A Z) with Z ~ N(0, I_k) under the plain measure and a
// payoff Y drawn from the conditional law given X under the pricing measure.
class ScenarioModel {
public:
    virtual ~ScenarioModel() = default;

    virtual std::string_view id() const = 0;
    virtual std::size_t factor_dim() const = 0;  // d
    virtual std::size_t latent_dim() const = 0;  // k
    virtual const Eigen::MatrixXd& loading() const = 0;  // A, p x k

    // v for the mean-shift construction. Models that need a pilot simulation
    // to find it use pilot_seed; the others ignore it.
    virtual is::MonotonicityProfile monotonicity(std::uint64_t pilot_seed) const = 0;

    // x = u(A z).
    virtual void factors(std::span<const double> z, std::span<double> x) const = 0;

    // One draw of Y given X = x, consuming only the inner stream.
    virtual double payoff(std::span<const double> x, Rng& inner) const = 0;

    // Closed-form l(x) = E[Y | X = x] where the model has one.
    virtual std::optional<double> conditional_value(std::span<const double> /*x*/) const {
        return std::nullopt;
    }

    // n_outer factor draws, each with n_inner payoff draws (tree structure),
    // stored outer-major. With a spec, latent draws come from N(m, I) and
    // log_weight holds log(f/g). Outer and inner streams are derived from seed
    // per chunk of outer draws, so results do not depend on thread count.
    SampleSet simulate(std::size_t n_outer, std::size_t n_inner, const is::ISSpec* spec,
                       std::uint64_t seed) const;

    // Factor draws only (y left empty); identical to the X of simulate() with
    // the same seed and spec.
    SampleSet simulate_factors(std::size_t n, const is::ISSpec* spec, std::uint64_t seed) const;

    static constexpr std::size_t kChunk = 1024;

private:
    SampleSet run(std::size_t n_outer, std::size_t n_inner, const is::ISSpec* spec,
                  std::uint64_t seed, bool with_payoff) const;
};

// L with L L^T = cov: the Cholesky factor, or a symmetric square root when
// cov is only positive semidefinite.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov);

} // namespace riskcap::models
