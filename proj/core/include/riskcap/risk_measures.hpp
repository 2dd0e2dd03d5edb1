#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace riskcap::risk {

struct LossSample {
    double loss = 0.0;
    double weight = 0.0;
};

struct TracePoint {
    std::size_t n = 0;
    double var = 0.0;
    double es = 0.0;
};

struct RiskEstimate {
    double var = 0.0;
    double es = 0.0;
    double alpha = 0.0;
    std::size_t n = 0;
    std::size_t tail_index = 0;  // j, 1-based
    std::vector<TracePoint> trace;
};

// VaR/ES of the empirical measure (1/n) sum delta_{L_i}. Losses are ranked in
// descending order with ties broken by input position, and
//   j   = min{ i : i/n > 1 - alpha }
//   VaR = L_(j)
//   ES  = sum_{i<j} L_(i) / (n (1 - alpha)) + (1 - (j-1)/((1-alpha) n)) L_(j)
// Evaluated through the weighted estimator with weights 1/n, so both agree
// bit for bit on uniform weights.
RiskEstimate empirical_var_es(std::span<const double> losses, double alpha);

// Same estimator with i/n replaced by the cumulative weight of the i largest
// losses. Throws InsufficientTail when the total weight does not exceed
// 1 - alpha.
RiskEstimate weighted_var_es(std::span<const LossSample> samples, double alpha);

struct Exceedance {
    double estimate = 0.0;
    double std_error = 0.0;
};

// sum_i 1{L_i >= x} w_i. The standard error treats n w_i 1{L_i >= x} as the
// i.i.d. summands of a sample mean.
Exceedance exceedance_probability(std::span<const LossSample> samples, double threshold);

// Importance weights exp(log_weight_i) / n for the first n entries.
std::vector<LossSample> weighted_losses(std::span<const double> losses,
                                        std::span<const double> log_weights);

// Counts from min_n to n spaced evenly in log scale; always ends with n.
std::vector<std::size_t> log_spaced_counts(std::size_t n, std::size_t points, std::size_t min_n = 1000);

} // namespace riskcap::risk
