#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "lrpd/linalg.hpp"

namespace lrpd {

using Rng = std::mt19937_64;

/// Child seed for a named stream: splitmix64(root ^ fnv1a64(stream)).
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream);

/// Standard normal entries, filled column by column.
Matrix gaussian_matrix(Index rows, Index cols, Rng& rng);

/// Uniform +/-1 entries, filled column by column.
Matrix rademacher_matrix(Index rows, Index cols, Rng& rng);

}  // namespace lrpd
