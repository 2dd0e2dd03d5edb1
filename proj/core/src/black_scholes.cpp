#include "riskcap/black_scholes.hpp"

#include <cmath>

#include "riskcap/errors.hpp"
#include "riskcap/normal.hpp"

namespace riskcap::models {

double bs_price(OptionKind kind, double spot, double strike, double rate, double sigma,
                double maturity) {
    if (!(spot > 0.0 && strike > 0.0 && sigma > 0.0 && maturity > 0.0)) {
        throw InvalidInput("bs_price: spot, strike, sigma and maturity must be positive");
    }
    const double vol = sigma * std::sqrt(maturity);
    const double d1 = (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * maturity) / vol;
    const double d2 = d1 - vol;
    const double df = std::exp(-rate * maturity);
    if (kind == OptionKind::call) return spot * normal_cdf(d1) - strike * df * normal_cdf(d2);
    return strike * df * normal_cdf(-d2) - spot * normal_cdf(-d1);
}

} // namespace riskcap::models
