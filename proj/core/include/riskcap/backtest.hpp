#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "riskcap/network.hpp"
#include "riskcap/sample_set.hpp"

namespace riskcap::backtest {

enum class Side { below, above };  // x < s_beta or x > s_beta

// Condition on one coordinate relative to its empirical beta-quantile.
struct Condition {
    std::size_t coordinate = 0;
    Side side = Side::below;
    double level = 0.5;
};

// A conjunction of quantile conditions, before thresholds are fitted.
struct SetSpec {
    std::string label;
    std::vector<Condition> conditions;
};

struct Bound {
    std::size_t coordinate = 0;
    Side side = Side::below;
    double threshold = 0.0;
};

// Region of factor space described by fixed coordinate thresholds. An empty
// bound list is the whole space.
struct IndicatorSet {
    std::string label;
    std::vector<Bound> bounds;

    bool contains(std::span<const double> x) const;
};

// Empirical beta-quantile: the ceil(beta n)-th smallest value.
double empirical_quantile(std::span<const double> values, double beta);

// Fits the thresholds of each spec on the rows of x (row-major n x dim).
std::vector<IndicatorSet> quantile_sets(std::span<const double> x, std::size_t dim,
                                        const std::vector<SetSpec>& specs);

struct Statistic {
    std::string label;
    double value = 0.0;
    double std_error = 0.0;
    double fraction = 1.0;   // share of test points inside the set
    std::size_t count = 0;   // test points inside the set
    bool reliable = true;    // false when the set holds fewer than kMinSetCount points
    bool passed = false;     // |value| <= multiplier * std_error
};

struct BacktestReport {
    Statistic a;  // mean of l(X) - Y
    Statistic b;  // mean of (l(X) - Y) l(X)
    std::vector<Statistic> c;  // mean of (l(X) - Y) 1_B(X), one per set
    std::size_t m3 = 0;
    double multiplier = 3.0;

    // Unreliable set statistics do not count against the verdict.
    bool passed() const;
};

inline constexpr std::size_t kMinSetCount = 100;
inline constexpr double kDefaultMultiplier = 3.0;

BacktestReport run_backtest(std::span<const double> predictions, std::span<const double> y,
                            std::span<const double> x, std::size_t dim,
                            const std::vector<IndicatorSet>& sets,
                            double multiplier = kDefaultMultiplier);

BacktestReport run_backtest(const nn::NetworkParams& params, const SampleSet& test_set,
                            const std::vector<IndicatorSet>& sets,
                            double multiplier = kDefaultMultiplier);

// One backtest per epoch, for plotting the statistics over training.
struct TraceRow {
    std::size_t epoch = 0;
    std::string statistic;
    double value = 0.0;
    double std_error = 0.0;
};

void append_trace(std::vector<TraceRow>& trace, std::size_t epoch, const BacktestReport& report);

} // namespace riskcap::backtest
