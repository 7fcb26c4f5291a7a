#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace lbcim {

using Rng = std::mt19937_64;

// Stable 64-bit mixer (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

// Child seed for (master, index, tag). Used to split independent streams
// for graph creation and play so every game is reproducible on its own.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::string_view tag);

// Uniform integer in [0, n). n must be positive.
std::size_t uniform_index(Rng &rng, std::size_t n);

// Uniform integer in [lo, hi], inclusive.
int uniform_int(Rng &rng, int lo, int hi);

double uniform_real(Rng &rng);

bool bernoulli(Rng &rng, double p);

} // namespace lbcim
