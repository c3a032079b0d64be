// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "satprec/types.hpp"

namespace satprec {

// Raised for unreadable, truncated or corrupt snapshot files.
struct SnapshotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SnapshotKind : std::uint8_t { Channel = 0, Precoder = 1, Generic = 2 };

// Versioned binary matrix container: header (magic, version, kind, flags,
// seed, K, N, G, flavor, alpha) followed by row-major complex doubles.
struct MatrixSnapshot {
  SnapshotKind kind = SnapshotKind::Generic;
  std::uint64_t seed = 0;
  std::uint32_t num_gateways = 0;
  std::uint8_t flavor = 0;     // PrecoderFlavor for precoder snapshots
  bool quantized = false;
  double alpha = 0.0;
  CMatX matrix;
};

void write_snapshot(const std::string& path, const MatrixSnapshot& snap);
MatrixSnapshot read_snapshot(const std::string& path);

}  // namespace satprec
