#include "riskcap/scenario_model.hpp"

#include <algorithm>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "riskcap/errors.hpp"
#include "riskcap/parallel.hpp"

namespace riskcap::models {

SampleSet ScenarioModel::simulate(std::size_t n_outer, std::size_t n_inner,
                                  const is::ISSpec* spec, std::uint64_t seed) const {
    if (n_outer == 0 || n_inner == 0) throw InvalidInput("simulate: sample counts must be >= 1");
    return run(n_outer, n_inner, spec, seed, true);
}

SampleSet ScenarioModel::simulate_factors(std::size_t n, const is::ISSpec* spec,
                                          std::uint64_t seed) const {
    if (n == 0) throw InvalidInput("simulate_factors: sample count must be >= 1");
    return run(n, 1, spec, seed, false);
}

SampleSet ScenarioModel::run(std::size_t n_outer, std::size_t n_inner, const is::ISSpec* spec,
                             std::uint64_t seed, bool with_payoff) const {
    const std::size_t d = factor_dim();
    const std::size_t k = latent_dim();
    if (spec && spec->dim() != k) throw InvalidInput("simulate: IS shift has wrong dimension");

    const std::size_t total = n_outer * n_inner;
    SampleSet out;
    out.dim = d;
    out.x.resize(total * d);
    if (with_payoff) out.y.resize(total);
    if (spec) out.log_weight.resize(total);

    parallel_for_chunks(chunk_count(n_outer, kChunk), [&](std::size_t c) {
        Rng outer(derive_seed(seed, "outer", c));
        Rng inner(derive_seed(seed, "inner", c));
        std::vector<double> z(k);
        std::vector<double> x(d);
        const std::size_t begin = c * kChunk;
        const std::size_t end = std::min(n_outer, begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) {
            outer.fill_normal(z);
            double lw = 0.0;
            if (spec) {
                for (std::size_t m = 0; m < k; ++m) z[m] += spec->shift(static_cast<Eigen::Index>(m));
                lw = is::log_weight(z, *spec);
            }
            factors(z, x);
            for (std::size_t j = 0; j < n_inner; ++j) {
                const std::size_t idx = i * n_inner + j;
                std::copy(x.begin(), x.end(), out.x.begin() + static_cast<std::ptrdiff_t>(idx * d));
                if (with_payoff) out.y[idx] = payoff(x, inner);
                if (spec) out.log_weight[idx] = lw;
            }
        }
    });
    return out;
}

Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) return llt.matrixL();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success || (eig.eigenvalues().array() < -1e-12 * cov.norm()).any()) {
        throw InvalidInput("covariance_factor: matrix is not positive semidefinite");
    }
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

} // namespace riskcap::models
