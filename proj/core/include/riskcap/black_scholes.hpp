#pragma once

namespace riskcap::models {

enum class OptionKind { call, put };

// Black-Scholes value of a European option. Spot, strike, volatility and
// maturity must be positive.
double bs_price(OptionKind kind, double spot, double strike, double rate, double sigma,
                double maturity);

} // namespace riskcap::models
