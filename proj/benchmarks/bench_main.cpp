#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "riskcap/network.hpp"
#include "riskcap/portfolio_model.hpp"
#include "riskcap/put_model.hpp"
#include "riskcap/risk_measures.hpp"

using namespace riskcap;

namespace {

void BM_LossAndGradient(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const nn::Architecture arch{d, {15, 15}, nn::OutputActivation::exponential, false};
    const auto params = nn::init_params(arch, 0.0, 1);
    const Eigen::Index batch = 1000;
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(d), batch);
    const Eigen::VectorXd y = Eigen::VectorXd::Random(batch).array().exp();
    for (auto _ : state) benchmark::DoNotOptimize(nn::loss_and_gradient(params, x, y));
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_LossAndGradient)->Arg(1)->Arg(20);

void BM_WeightedVarEs(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 eng(3);
    std::normal_distribution<double> n01;
    std::vector<double> losses(n), lw(n);
    for (std::size_t i = 0; i < n; ++i) {
        losses[i] = std::exp(n01(eng));
        lw[i] = 0.1 * n01(eng);
    }
    for (auto _ : state) {
        const auto samples = risk::weighted_losses(losses, lw);
        benchmark::DoNotOptimize(risk::weighted_var_es(samples, 0.995));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_WeightedVarEs)->Arg(100000)->Arg(1000000);

void BM_SimulatePut(benchmark::State& state) {
    const models::PutModel m;
    for (auto _ : state) benchmark::DoNotOptimize(m.simulate(100000, 1, nullptr, 7));
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SimulatePut);

void BM_SimulatePortfolio(benchmark::State& state) {
    const models::PortfolioModel m;
    for (auto _ : state) benchmark::DoNotOptimize(m.simulate(10000, 5, nullptr, 7));
    state.SetItemsProcessed(state.iterations() * 50000);
}
BENCHMARK(BM_SimulatePortfolio);

}  // namespace
BENCHMARK_MAIN();
