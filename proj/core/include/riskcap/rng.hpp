#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace riskcap {

using Engine = std::mt19937_64;

// 64-bit FNV-1a hash.
std::uint64_t fnv1a(std::string_view text);

// Derives a child seed from a parent seed and a label. Distinct labels give
// statistically unrelated streams; the mapping is fixed across platforms.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label, std::uint64_t index);

// A seeded engine plus a standard normal generator.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    void fill_normal(std::span<double> out) {
        for (auto& v : out) v = normal_(engine_);
    }

    Engine& engine() { return engine_; }

private:
    Engine engine_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
};

} // namespace riskcap
