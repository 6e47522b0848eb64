/// @file monte_carlo.hpp
/// Failure-order sampling oracle: exponential failure times per event,
/// expression evaluated on the realized ordering truncated at mission time.
#pragma once

#include <cstdint>

#include "tfta/quantify.hpp"

namespace tfta {

struct McConfig {
  uint64_t samples = 1'000'000;
  uint64_t seed = 0x5eedf417ull;  // fixed, documented default
  double t_end = 1000.0;
};

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
  uint64_t hits = 0;
};

/// Random source: std::mt19937_64 seeded per block (block seeds derive from
/// the base seed with splitmix64), inverse-transform exponential sampling.
/// Results are bit-reproducible for a fixed seed and sample count.
McResult monte_carlo_F(const BasicEvents& basics, const ExprPtr& e, const McConfig& cfg);

}  // namespace tfta
