#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sample {

inline std::vector<double> normal(std::size_t n, std::uint64_t seed, double mu = 0.0, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(mu, sd);
    std::vector<double> out(n);
    for (double& v : out) v = z(rng);
    return out;
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
    auto x = normal(n, seed);
    for (std::size_t i = 1; i < n; ++i) x[i] += x[i - 1];
    return x;
}

}  // namespace sample
