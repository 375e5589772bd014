// SPDX-License-Identifier: Apache-2.0
#pragma once

// Counter-based random numbers (Philox4x32-10). Every draw is a pure function
// of (seed, stream, counter), so any subset of draws can be produced in any
// order on any thread with identical results.

#include <array>
#include <cstdint>
#include <string_view>

namespace mlcert {

using PhiloxBlock = std::array<std::uint32_t, 4>;

PhiloxBlock philox4x32_10(PhiloxBlock counter, std::array<std::uint32_t, 2> key) noexcept;

/// 64-bit FNV-1a; maps an instance id to a stream number.
std::uint64_t stream_id(std::string_view name) noexcept;

/// Uniform double in (0, 1] from the top 53 bits.
double to_unit_open_closed(std::uint32_t hi, std::uint32_t lo) noexcept;

/// Random access to standard Gaussians keyed by (seed, stream).
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  // Two independent N(0, 1) variates for (index, block), Box-Muller.
  std::array<double, 2> pair(std::uint64_t index, std::uint32_t block) const noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
};

/// Sequential generator for auxiliary randomness (test-bed construction).
class SequentialRng {
 public:
  SequentialRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  double uniform() noexcept;  // in (0, 1]
  double uniform(double lo, double hi) noexcept;
  int uniform_int(int lo, int hi) noexcept;  // inclusive
  double gaussian() noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  PhiloxBlock buffer_{};
  int used_ = 4;

  std::uint32_t next32() noexcept;
};

}  // namespace mlcert
