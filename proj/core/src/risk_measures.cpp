#include "riskcap/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "riskcap/errors.hpp"

namespace riskcap::risk {
namespace {

// Relative slack when comparing cumulative weights against 1 - alpha, so that
// i/n landing exactly on the boundary in exact arithmetic is not counted as
// exceeding it because of rounding in 1 - alpha or in the running sum.
constexpr double kBoundarySlack = 1e-12;

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("risk estimator: alpha must lie in (0, 1)");
}

} // namespace

RiskEstimate weighted_var_es(std::span<const LossSample> samples, double alpha) {
    check_alpha(alpha);
    if (samples.empty()) throw InvalidInput("risk estimator: empty sample");
    for (const auto& s : samples) {
        if (!(s.weight > 0.0) || !std::isfinite(s.weight) || !std::isfinite(s.loss)) {
            throw InvalidInput("risk estimator: weights must be positive and losses finite");
        }
    }

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return samples[a].loss > samples[b].loss;
    });

    const double tail = 1.0 - alpha;
    const double boundary = tail * (1.0 + kBoundarySlack);
    double cum = 0.0;
    double tail_sum = 0.0; // sum_{i<j} w_i L_i
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& s = samples[order[i]];
        if (cum + s.weight > boundary) {
            RiskEstimate est;
            est.alpha = alpha;
            est.n = samples.size();
            est.tail_index = i + 1;
            est.var = s.loss;
            est.es = tail_sum / tail + (1.0 - cum / tail) * s.loss;
            return est;
        }
        cum += s.weight;
        tail_sum += s.weight * s.loss;
    }
    throw InsufficientTail("risk estimator: total weight " + std::to_string(cum) +
                           " does not exceed 1 - alpha = " + std::to_string(tail));
}

RiskEstimate empirical_var_es(std::span<const double> losses, double alpha) {
    if (losses.empty()) throw InvalidInput("risk estimator: empty sample");
    const double w = 1.0 / static_cast<double>(losses.size());
    std::vector<LossSample> samples(losses.size());
    for (std::size_t i = 0; i < losses.size(); ++i) samples[i] = {losses[i], w};
    return weighted_var_es(samples, alpha);
}

Exceedance exceedance_probability(std::span<const LossSample> samples, double threshold) {
    if (samples.empty()) throw InvalidInput("exceedance_probability: empty sample");
    const auto n = static_cast<double>(samples.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& s : samples) {
        if (s.loss >= threshold) {
            const double term = n * s.weight;
            sum += term;
            sum_sq += term * term;
        }
    }
    Exceedance out;
    out.estimate = sum / n;
    if (samples.size() > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
        out.std_error = std::sqrt(var / n);
    }
    return out;
}

std::vector<LossSample> weighted_losses(std::span<const double> losses,
                                        std::span<const double> log_weights) {
    if (losses.size() != log_weights.size()) {
        throw InvalidInput("weighted_losses: losses and log weights differ in length");
    }
    const auto n = static_cast<double>(losses.size());
    std::vector<LossSample> out(losses.size());
    for (std::size_t i = 0; i < losses.size(); ++i) {
        out[i] = {losses[i], std::exp(log_weights[i]) / n};
    }
    return out;
}

std::vector<std::size_t> log_spaced_counts(std::size_t n, std::size_t points, std::size_t min_n) {
    std::vector<std::size_t> out;
    if (n == 0) return out;
    min_n = std::min(std::max<std::size_t>(min_n, 1), n);
    if (points < 2 || min_n == n) return {n};
    const double lo = std::log(static_cast<double>(min_n));
    const double hi = std::log(static_cast<double>(n));
    for (std::size_t k = 0; k < points; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(points - 1);
        auto c = static_cast<std::size_t>(std::llround(std::exp(lo + t * (hi - lo))));
        c = std::clamp<std::size_t>(c, min_n, n);
        if (out.empty() || c > out.back()) out.push_back(c);
    }
    if (out.back() != n) out.push_back(n);
    return out;
}

} // namespace riskcap::risk
