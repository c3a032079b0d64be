// SPDX-License-Identifier: Apache-2.0
#include "satprec/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace satprec {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'M', 'X'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& in, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw SnapshotError(std::string("snapshot: truncated reading ") + what);
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const MatrixSnapshot& snap) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SnapshotError("snapshot: cannot write " + path);
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, static_cast<std::uint8_t>(snap.kind));
  put(out, snap.flavor);
  put(out, static_cast<std::uint8_t>(snap.quantized ? 1 : 0));
  put(out, std::uint8_t{0});
  put(out, snap.seed);
  put(out, static_cast<std::uint32_t>(snap.matrix.rows()));
  put(out, static_cast<std::uint32_t>(snap.matrix.cols()));
  put(out, snap.num_gateways);
  put(out, snap.alpha);
  for (Index i = 0; i < snap.matrix.rows(); ++i) {
    for (Index j = 0; j < snap.matrix.cols(); ++j) {
      put(out, snap.matrix(i, j).real());
      put(out, snap.matrix(i, j).imag());
    }
  }
  if (!out) throw SnapshotError("snapshot: write failed for " + path);
}

MatrixSnapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("snapshot: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw SnapshotError("snapshot: bad magic in " + path);
  }
  const auto version = take<std::uint32_t>(in, "version");
  if (version != kVersion) {
    throw SnapshotError("snapshot: unsupported version " + std::to_string(version));
  }
  MatrixSnapshot snap;
  snap.kind = static_cast<SnapshotKind>(take<std::uint8_t>(in, "kind"));
  snap.flavor = take<std::uint8_t>(in, "flavor");
  snap.quantized = take<std::uint8_t>(in, "quantized") != 0;
  take<std::uint8_t>(in, "pad");
  snap.seed = take<std::uint64_t>(in, "seed");
  const auto rows = take<std::uint32_t>(in, "rows");
  const auto cols = take<std::uint32_t>(in, "cols");
  snap.num_gateways = take<std::uint32_t>(in, "gateways");
  snap.alpha = take<double>(in, "alpha");
  if (rows == 0 || cols == 0 || static_cast<std::uint64_t>(rows) * cols > (1u << 26)) {
    throw SnapshotError("snapshot: implausible dimensions in " + path);
  }
  snap.matrix.resize(rows, cols);
  for (Index i = 0; i < snap.matrix.rows(); ++i) {
    for (Index j = 0; j < snap.matrix.cols(); ++j) {
      const double re = take<double>(in, "entry");
      const double im = take<double>(in, "entry");
      snap.matrix(i, j) = {re, im};
    }
  }
  return snap;
}

}  // namespace satprec
