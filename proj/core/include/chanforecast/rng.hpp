// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace chanforecast {

// Deterministic xoshiro256++ stream seeded through splitmix64. Identical seeds
// give bit-identical draw sequences on every platform; streams spawned with
// distinct indices from one seed are reproducible and mutually independent
// for practical purposes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent child stream; depends only on this stream's seed and the
  // index, never on how many draws were taken.
  Rng spawn(std::uint64_t index) const;

  std::uint64_t stream_seed() const { return stream_seed_; }

  std::uint64_t next_u64();
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n)
  double uniform01();                    // uniform in [0, 1)
  double uniform(double a, double b);
  double normal();  // standard normal (Box-Muller, two draws per call)

  std::vector<std::uint32_t> permutation(std::uint32_t n);  // Fisher-Yates

 private:
  std::uint64_t stream_seed_;
  std::array<std::uint64_t, 4> s_;
};

}  // namespace chanforecast
