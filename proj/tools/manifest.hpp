// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chanforecast::cli {

inline constexpr const char* kCodeVersion = "chanforecast 0.1.0";

std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string fnv1a64_hex(std::uint64_t digest);

struct RunManifest {
  std::string command;
  std::string code_version = kCodeVersion;
  std::uint64_t seed = 0;
  bool deterministic = false;
  // Omitted under --deterministic so reruns stay byte-identical.
  std::optional<double> wall_clock_s;
  std::string config_echo;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  std::vector<std::pair<std::string, std::string>> extra;  // key, value
};

// Writes "<file>.manifest.json" next to every output, each carrying the run
// metadata plus fresh digests of all inputs and outputs.
void write_manifests(const RunManifest& m);

// Recomputes the digest recorded in "<file>.manifest.json" when present;
// throws on mismatch. Returns false when no manifest accompanies the file.
bool verify_against_manifest(const std::filesystem::path& file);

}  // namespace chanforecast::cli
