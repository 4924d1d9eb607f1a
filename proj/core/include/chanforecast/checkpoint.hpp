// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "chanforecast/nn.hpp"

namespace chanforecast::nn {

// Parameter checkpoint stream, bit-exact on round-trip:
//   magic "CFNN", u32 version, u32 entry count, then per entry:
//   u32 name length + UTF-8 name, u8 rank, rank x u32 dims,
//   little-endian f64 payload in row-major order.
// Rank 1 is used for n x 1 tensors, rank 2 otherwise.

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_params(std::ostream& os, const ParamStore& store);
ParamStore load_params(std::istream& is);

void save_params(const std::filesystem::path& path, const ParamStore& store);
ParamStore load_params(const std::filesystem::path& path);

}  // namespace chanforecast::nn
