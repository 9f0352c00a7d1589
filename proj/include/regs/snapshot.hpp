#pragma once

#include "regs/field4.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

// Binary state snapshots. Layout (little-endian):
//   bytes 0..3   magic "RGS4"
//   u32          format version (currently 1)
//   u32          dim
//   3 x u64      points per axis (unused axes stored as 1)
//   3 x f64      domain length per axis
//   f64          time
//   bytes        species tags "uvpq" (fixed order of the payload blocks)
//   payload      4 blocks of n_total f64, species in tag order
// Round-trips are bit-exact.

namespace regs {

struct SnapshotError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SnapshotHeader {
    std::uint32_t version = 0;
    int dim = 0;
    std::array<std::uint64_t, 3> n{1, 1, 1};
    std::array<double, 3> length{1.0, 1.0, 1.0};
    double time = 0.0;
};

void write_snapshot(const std::string& path, const State& s);
State read_snapshot(const std::string& path);

// header only; does not touch the payload
SnapshotHeader inspect_snapshot(const std::string& path);

} // namespace regs
