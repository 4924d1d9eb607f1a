// SPDX-License-Identifier: Apache-2.0
//
// chanforecast: time-varying MIMO channel prediction workbench
// Copyright (C) 2026 the chanforecast authors

#include "chanforecast/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace chanforecast::nn {

namespace {

constexpr char kMagic[4] = {'C', 'F', 'N', 'N'};

void write_u8(std::ostream& os, std::uint8_t v) {
  os.put(static_cast<char>(v));
}

void write_u32(std::ostream& os, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(buf, 4);
}

void write_f64(std::ostream& os, double d) {
  const std::uint64_t v = std::bit_cast<std::uint64_t>(d);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(buf, 8);
}

std::uint8_t read_u8(std::istream& is) {
  char c;
  if (!is.get(c)) throw std::runtime_error("checkpoint: truncated stream");
  return static_cast<std::uint8_t>(c);
}

std::uint32_t read_u32(std::istream& is) {
  char buf[4];
  if (!is.read(buf, 4)) throw std::runtime_error("checkpoint: truncated stream");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(buf[i])) << (8 * i);
  return v;
}

double read_f64(std::istream& is) {
  char buf[8];
  if (!is.read(buf, 8)) throw std::runtime_error("checkpoint: truncated stream");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(buf[i])) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void save_params(std::ostream& os, const ParamStore& store) {
  os.write(kMagic, 4);
  write_u32(os, kCheckpointVersion);
  write_u32(os, static_cast<std::uint32_t>(store.tensor_count()));
  for (const auto& e : store.entries()) {
    write_u32(os, static_cast<std::uint32_t>(e.name.size()));
    os.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    const bool vector_shape = e.value.cols() == 1;
    write_u8(os, vector_shape ? 1 : 2);
    write_u32(os, static_cast<std::uint32_t>(e.value.rows()));
    if (!vector_shape) write_u32(os, static_cast<std::uint32_t>(e.value.cols()));
    for (Eigen::Index r = 0; r < e.value.rows(); ++r)
      for (Eigen::Index c = 0; c < e.value.cols(); ++c) write_f64(os, e.value(r, c));
  }
  if (!os) throw std::runtime_error("checkpoint: write failure");
}

ParamStore load_params(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  const std::uint32_t version = read_u32(is);
  if (version != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  const std::uint32_t count = read_u32(is);

  ParamStore store;
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t name_len = read_u32(is);
    std::string name(name_len, '\0');
    if (!is.read(name.data(), name_len))
      throw std::runtime_error("checkpoint: truncated stream");
    const std::uint8_t rank = read_u8(is);
    if (rank != 1 && rank != 2)
      throw std::runtime_error("checkpoint: unsupported tensor rank");
    const std::uint32_t rows = read_u32(is);
    const std::uint32_t cols = rank == 2 ? read_u32(is) : 1;
    store.add(name, rows, cols, InitKind::Zero);
    RMat& value = store.value(name);
    for (std::uint32_t r = 0; r < rows; ++r)
      for (std::uint32_t c = 0; c < cols; ++c) value(r, c) = read_f64(is);
  }
  return store;
}

void save_params(const std::filesystem::path& path, const ParamStore& store) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path.string());
  save_params(os, store);
}

ParamStore load_params(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path.string());
  return load_params(is);
}

}  // namespace chanforecast::nn
