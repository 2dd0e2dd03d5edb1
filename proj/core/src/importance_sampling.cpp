#include "riskcap/importance_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "riskcap/errors.hpp"

namespace riskcap::is {
namespace {

std::vector<double> average_ranks(std::span<const double> a) {
    std::vector<std::size_t> order(a.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a[i] < a[j]; });
    std::vector<double> ranks(a.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t k = i;
        while (k + 1 < order.size() && a[order[k + 1]] == a[order[i]]) ++k;
        const double r = 0.5 * static_cast<double>(i + k) + 1.0;
        for (std::size_t m = i; m <= k; ++m) ranks[order[m]] = r;
        i = k + 1;
    }
    return ranks;
}

} // namespace

MonotonicityProfile::MonotonicityProfile(std::vector<int> signs) : signs_(std::move(signs)) {
    for (int s : signs_) {
        if (s < -1 || s > 1) throw InvalidInput("monotonicity profile entries must be -1, 0 or +1");
    }
}

Eigen::VectorXd MonotonicityProfile::as_vector() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(signs_.size()));
    for (std::size_t i = 0; i < signs_.size(); ++i) v(static_cast<Eigen::Index>(i)) = signs_[i];
    return v;
}

ISSpec mean_shift(const Eigen::MatrixXd& loading, const MonotonicityProfile& v, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("mean_shift: alpha must lie in (0, 1)");
    if (static_cast<std::size_t>(loading.rows()) != v.size()) {
        throw InvalidInput("mean_shift: monotonicity profile length must equal rows of A");
    }
    if (!loading.allFinite()) throw InvalidInput("mean_shift: loading matrix must be finite");

    ISSpec spec;
    spec.alpha = alpha;
    const Eigen::VectorXd direction = loading.transpose() * v.as_vector();
    const double norm = direction.norm();
    if (norm == 0.0) {
        spec.shift = Eigen::VectorXd::Zero(loading.cols());
    } else {
        spec.shift = direction / norm * standard_normal_quantile(alpha);
    }
    return spec;
}

ISSpec no_shift(std::size_t k) {
    return ISSpec{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k)), 0.0};
}

double log_weight(std::span<const double> z, const ISSpec& spec) {
    if (z.size() != spec.dim()) throw InvalidInput("log_weight: dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) dot += spec.shift(static_cast<Eigen::Index>(i)) * z[i];
    return -dot + 0.5 * spec.shift.squaredNorm();
}

double variance_criterion(std::span<const double> z, std::span<const double> losses,
                          const ISSpec& spec, double threshold) {
    const std::size_t k = spec.dim();
    if (losses.empty() || k == 0 || z.size() != losses.size() * k) {
        throw InvalidInput("variance_criterion: z must hold one k-vector per loss");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < losses.size(); ++i) {
        if (losses[i] >= threshold) sum += std::exp(2.0 * log_weight(z.subspan(i * k, k), spec));
    }
    return sum / static_cast<double>(losses.size());
}

double spearman_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw InvalidInput("spearman_correlation: need two equal-length samples of size >= 2");
    }
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    const double mean = (n + 1.0) / 2.0;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        const double da = ra[i] - mean;
        const double db = rb[i] - mean;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

MonotonicityProfile pilot_monotonicity(std::span<const double> x, std::size_t dim,
                                       std::span<const double> y, double cutoff) {
    if (dim == 0 || x.size() != y.size() * dim) {
        throw InvalidInput("pilot_monotonicity: x must hold one d-vector per payoff");
    }
    std::vector<int> signs(dim, 0);
    std::vector<double> column(y.size());
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t i = 0; i < y.size(); ++i) column[i] = x[i * dim + c];
        const double rho = spearman_correlation(column, y);
        if (std::abs(rho) >= cutoff) signs[c] = rho > 0.0 ? 1 : -1;
    }
    return MonotonicityProfile(std::move(signs));
}

} // namespace riskcap::is
