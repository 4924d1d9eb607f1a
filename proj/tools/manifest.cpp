// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "manifest.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "config.hpp"

namespace chanforecast::cli {

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("digest: cannot open " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[65536];
  while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
    const std::streamsize n = is.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      hash ^= static_cast<std::uint8_t>(buf[i]);
      hash *= 0x100000001b3ull;
    }
    if (!is) break;
  }
  return hash;
}

std::string fnv1a64_hex(std::uint64_t digest) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << digest;
  return os.str();
}

namespace {

nlohmann::json digest_entry(const std::filesystem::path& p) {
  return {{"path", p.filename().string()},
          {"bytes", static_cast<std::uint64_t>(std::filesystem::file_size(p))},
          {"fnv1a64", fnv1a64_hex(fnv1a64_file(p))}};
}

}  // namespace

void write_manifests(const RunManifest& m) {
  nlohmann::json j;
  j["code_version"] = m.code_version;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["deterministic"] = m.deterministic;
  if (m.wall_clock_s.has_value()) j["wall_clock_s"] = *m.wall_clock_s;
  j["config"] = m.config_echo;
  j["inputs"] = nlohmann::json::array();
  for (const auto& p : m.inputs) j["inputs"].push_back(digest_entry(p));
  j["outputs"] = nlohmann::json::array();
  for (const auto& p : m.outputs) j["outputs"].push_back(digest_entry(p));
  for (const auto& [k, v] : m.extra) j["extra"][k] = v;

  for (const auto& out : m.outputs) {
    std::filesystem::path mp = out;
    mp += ".manifest.json";
    std::ofstream os(mp, std::ios::binary);
    if (!os) throw IoError("manifest: cannot open " + mp.string());
    os << j.dump(2) << "\n";
    if (!os) throw IoError("manifest: write failure for " + mp.string());
  }
}

bool verify_against_manifest(const std::filesystem::path& file) {
  std::filesystem::path mp = file;
  mp += ".manifest.json";
  if (!std::filesystem::exists(mp)) return false;

  std::ifstream is(mp);
  if (!is) throw IoError("manifest: cannot open " + mp.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw IoError("manifest: bad JSON in " + mp.string() + ": " + e.what());
  }

  const std::string name = file.filename().string();
  for (const auto& entry : j.value("outputs", nlohmann::json::array())) {
    if (entry.value("path", "") != name) continue;
    const std::string recorded = entry.value("fnv1a64", "");
    const std::string actual = fnv1a64_hex(fnv1a64_file(file));
    if (recorded != actual)
      throw IoError("manifest: digest mismatch for " + file.string() + " (recorded " +
                    recorded + ", recomputed " + actual + ")");
    return true;
  }
  throw IoError("manifest: no digest entry for " + file.string() + " in " + mp.string());
}

}  // namespace chanforecast::cli
