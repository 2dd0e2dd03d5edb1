#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace riskcap {

// Realizations (X^m, Y^m) of risk factors and discounted payoffs. X is stored
// row-major (one row per sample), which is the column-major d x n layout the
// network consumes. y is empty for factor-only draws. log_weight is empty
// under the plain measure; otherwise it holds log(f/g) of the latent draw.
struct SampleSet {
    std::size_t dim = 0;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> log_weight;

    std::size_t size() const { return dim == 0 ? y.size() : x.size() / dim; }
    bool weighted() const { return !log_weight.empty(); }

    std::span<const double> row(std::size_t i) const { return {x.data() + i * dim, dim}; }

    // d x n view of the factors.
    Eigen::Map<const Eigen::MatrixXd> factors() const {
        return {x.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(size())};
    }
};

} // namespace riskcap
