#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qflow {

/// Deterministic, splittable seed source.
///
/// Every random draw in the library flows from one root seed through named
/// child streams (for example `root.child("restart", 3)`), so a single
/// restart or trial can be rerun in isolation and reproduce bit-for-bit.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : value_(seed) {}

  SeedStream child(std::string_view name, std::uint64_t index = 0) const;

  std::uint64_t value() const { return value_; }
  std::mt19937_64 engine() const { return std::mt19937_64(value_); }

 private:
  std::uint64_t value_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qflow
