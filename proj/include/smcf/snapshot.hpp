#pragma once

#include "smcf/grid.hpp"

#include <string>
#include <utility>

namespace smcf {

/// Binary field snapshot, little-endian regardless of host:
///   magic "SMCF", u32 version, u32 d, u32 n[d], f64 length, f64 t,
///   payload 2 * n^d f64 (re, im interleaved, row-major).
/// Round trips are bit-exact.
inline constexpr std::uint32_t snapshot_version = 1;

void write_snapshot(const std::string& path, const Field& f, double t);
std::pair<Field, double> read_snapshot(const std::string& path);

} // namespace smcf
