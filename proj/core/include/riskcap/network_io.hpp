#pragma once

#include <filesystem>
#include <string>

#include "riskcap/network.hpp"

namespace riskcap::nn {

inline constexpr int kNetworkFormatVersion = 1;

// Versioned JSON document: layer sizes, row-major weights, biases, input
// scaling and batch-norm statistics. Doubles round-trip exactly.
std::string to_json_string(const NetworkParams& params);
NetworkParams from_json_string(const std::string& text);

void save_network(const NetworkParams& params, const std::filesystem::path& path);
NetworkParams load_network(const std::filesystem::path& path);

} // namespace riskcap::nn
