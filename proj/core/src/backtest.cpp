#include "riskcap/backtest.hpp"

#include <algorithm>
#include <cmath>

#include "riskcap/errors.hpp"
#include "riskcap/parallel.hpp"

namespace riskcap::backtest {
namespace {

constexpr std::size_t kChunk = 8192;

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;
};

Statistic finish(std::string label, const Moments& m, std::size_t n, double multiplier) {
    Statistic s;
    s.label = std::move(label);
    const double nn = static_cast<double>(n);
    s.value = m.sum / nn;
    const double var = n > 1 ? std::max(0.0, (m.sum_sq - nn * s.value * s.value) / (nn - 1.0)) : 0.0;
    s.std_error = std::sqrt(var / nn);
    s.count = m.count;
    s.fraction = static_cast<double>(m.count) / nn;
    s.passed = std::abs(s.value) <= multiplier * s.std_error;
    return s;
}

} // namespace

bool IndicatorSet::contains(std::span<const double> x) const {
    for (const auto& b : bounds) {
        const double v = x[b.coordinate];
        if (b.side == Side::below ? !(v < b.threshold) : !(v > b.threshold)) return false;
    }
    return true;
}

double empirical_quantile(std::span<const double> values, double beta) {
    if (values.empty()) throw InvalidInput("empirical_quantile: empty sample");
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidInput("empirical_quantile: beta must lie in (0, 1)");
    std::vector<double> v(values.begin(), values.end());
    const double pos = std::ceil(beta * static_cast<double>(v.size()) - 1e-9);
    const auto k = static_cast<std::size_t>(std::clamp(pos, 1.0, static_cast<double>(v.size()))) - 1;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

std::vector<IndicatorSet> quantile_sets(std::span<const double> x, std::size_t dim,
                                        const std::vector<SetSpec>& specs) {
    if (dim == 0 || x.empty() || x.size() % dim != 0) {
        throw InvalidInput("quantile_sets: sample must be a non-empty n x dim array");
    }
    const std::size_t n = x.size() / dim;
    std::vector<IndicatorSet> out;
    std::vector<double> column(n);
    for (const auto& spec : specs) {
        if (spec.conditions.empty()) throw InvalidInput("quantile_sets: set '" + spec.label + "' has no conditions");
        IndicatorSet set{spec.label, {}};
        for (const auto& c : spec.conditions) {
            if (c.coordinate >= dim) throw InvalidInput("quantile_sets: coordinate out of range in '" + spec.label + "'");
            for (std::size_t i = 0; i < n; ++i) column[i] = x[i * dim + c.coordinate];
            set.bounds.push_back({c.coordinate, c.side, empirical_quantile(column, c.level)});
        }
        out.push_back(std::move(set));
    }
    return out;
}

bool BacktestReport::passed() const {
    if (!a.passed || !b.passed) return false;
    return std::all_of(c.begin(), c.end(), [](const Statistic& s) { return !s.reliable || s.passed; });
}

BacktestReport run_backtest(std::span<const double> predictions, std::span<const double> y,
                            std::span<const double> x, std::size_t dim,
                            const std::vector<IndicatorSet>& sets, double multiplier) {
    const std::size_t n = y.size();
    if (n == 0) throw InvalidInput("run_backtest: empty test set");
    if (predictions.size() != n || x.size() != n * dim) {
        throw InvalidInput("run_backtest: predictions, payoffs and factors disagree in size");
    }
    if (!(multiplier > 0.0)) throw InvalidInput("run_backtest: multiplier must be positive");

    const std::size_t stats = 2 + sets.size();
    const std::size_t chunks = chunk_count(n, kChunk);
    std::vector<Moments> partial(chunks * stats);
    parallel_for_chunks(chunks, [&](std::size_t c) {
        Moments* m = partial.data() + c * stats;
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            const double l = predictions[i];
            const double r = l - y[i];
            m[0].sum += r;
            m[0].sum_sq += r * r;
            ++m[0].count;
            m[1].sum += r * l;
            m[1].sum_sq += r * l * r * l;
            ++m[1].count;
            const auto row = x.subspan(i * dim, dim);
            for (std::size_t s = 0; s < sets.size(); ++s) {
                if (!sets[s].contains(row)) continue;
                m[2 + s].sum += r;
                m[2 + s].sum_sq += r * r;
                ++m[2 + s].count;
            }
        }
    });
    std::vector<Moments> total(stats);
    for (std::size_t c = 0; c < chunks; ++c) {
        for (std::size_t s = 0; s < stats; ++s) {
            total[s].sum += partial[c * stats + s].sum;
            total[s].sum_sq += partial[c * stats + s].sum_sq;
            total[s].count += partial[c * stats + s].count;
        }
    }

    BacktestReport report;
    report.m3 = n;
    report.multiplier = multiplier;
    report.a = finish("a", total[0], n, multiplier);
    report.b = finish("b", total[1], n, multiplier);
    for (std::size_t s = 0; s < sets.size(); ++s) {
        Statistic st = finish(sets[s].label, total[2 + s], n, multiplier);
        st.reliable = st.count >= kMinSetCount;
        report.c.push_back(std::move(st));
    }
    for (Statistic* s : {&report.a, &report.b}) {
        if (!std::isfinite(s->value) || !std::isfinite(s->std_error)) {
            throw NumericError("run_backtest: non-finite statistic " + s->label);
        }
    }
    return report;
}

BacktestReport run_backtest(const nn::NetworkParams& params, const SampleSet& test_set,
                            const std::vector<IndicatorSet>& sets, double multiplier) {
    if (test_set.dim != params.arch.input_dim) {
        throw InvalidInput("run_backtest: test factors do not match the network input");
    }
    const Eigen::VectorXd pred = nn::forward(params, test_set.factors(), nn::Mode::infer);
    return run_backtest({pred.data(), static_cast<std::size_t>(pred.size())}, test_set.y, test_set.x,
                        test_set.dim, sets, multiplier);
}

void append_trace(std::vector<TraceRow>& trace, std::size_t epoch, const BacktestReport& report) {
    trace.push_back({epoch, "a", report.a.value, report.a.std_error});
    trace.push_back({epoch, "b", report.b.value, report.b.std_error});
    for (const auto& s : report.c) trace.push_back({epoch, "c:" + s.label, s.value, s.std_error});
}

} // namespace riskcap::backtest
