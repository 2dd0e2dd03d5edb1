#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "riskcap/normal.hpp"

namespace riskcap::is {

// Sign pattern v of l o u in each coordinate of y = A z: +1 increasing,
// -1 decreasing, 0 unknown or flat.
class MonotonicityProfile {
public:
    MonotonicityProfile() = default;
    explicit MonotonicityProfile(std::vector<int> signs);

    std::size_t size() const { return signs_.size(); }
    int operator[](std::size_t i) const { return signs_[i]; }
    const std::vector<int>& signs() const { return signs_; }
    Eigen::VectorXd as_vector() const;

private:
    std::vector<int> signs_;
};

// Proposal N(shift, I_k) for the latent standard normal vector. A zero shift
// is the plain measure.
struct ISSpec {
    Eigen::VectorXd shift;
    double alpha = 0.0;

    std::size_t dim() const { return static_cast<std::size_t>(shift.size()); }
    bool is_identity() const { return shift.isZero(0.0); }
};

// m = A^T v / |A^T v| * z_alpha, or m = 0 when A^T v = 0. A is p x k.
ISSpec mean_shift(const Eigen::MatrixXd& loading, const MonotonicityProfile& v, double alpha);

ISSpec no_shift(std::size_t k);

// log f(z) - log f_m(z) = -m.z + |m|^2 / 2, the log density ratio of N(0, I)
// to N(m, I). The 1/n factor of the estimator weights is left to the caller.
double log_weight(std::span<const double> z, const ISSpec& spec);

// Monte Carlo estimate of E[1{L >= l_alpha} (f/g)^2] from draws z_i ~ g
// (rows of z, row-major n x k) with losses L_i.
double variance_criterion(std::span<const double> z, std::span<const double> losses,
                          const ISSpec& spec, double threshold);

// Spearman rank correlation with average ranks for ties.
double spearman_correlation(std::span<const double> a, std::span<const double> b);

// Signs of the rank correlation between each factor coordinate (rows of x,
// row-major n x d) and the payoff y; entries with |rho| < cutoff become 0.
MonotonicityProfile pilot_monotonicity(std::span<const double> x, std::size_t dim,
                                       std::span<const double> y, double cutoff = 0.01);

} // namespace riskcap::is
