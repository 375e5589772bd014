// SPDX-License-Identifier: Apache-2.0
#include "mlcert/rng.hpp"

#include <cmath>
#include <numbers>

namespace mlcert {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

std::array<std::uint32_t, 2> split(std::uint64_t v) noexcept {
  return {static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(v >> 32)};
}

}  // namespace

PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t stream_id(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

double to_unit_open_closed(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits + 1) * 0x1.0p-53;
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(split(seed)), stream_(stream) {}

std::array<double, 2> GaussianStream::pair(std::uint64_t index, std::uint32_t block) const noexcept {
  const auto idx = split(index);
  const auto st = split(stream_);
  // The high index word is folded with the block number; sample counts stay
  // far below 2^32 so the two never collide in practice.
  const PhiloxBlock out = philox4x32_10({idx[0], idx[1] ^ (block << 16), st[0], st[1]}, key_);
  const double u1 = to_unit_open_closed(out[0], out[1]);
  const double u2 = to_unit_open_closed(out[2], out[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

SequentialRng::SequentialRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(split(seed)), stream_(stream) {}

std::uint32_t SequentialRng::next32() noexcept {
  if (used_ == 4) {
    const auto c = split(counter_++);
    const auto st = split(stream_);
    // Distinct from GaussianStream counters via the 0xFFFF marker word.
    buffer_ = philox4x32_10({c[0], c[1] ^ 0xFFFF0000u, st[0], st[1]}, key_);
    used_ = 0;
  }
  return buffer_[used_++];
}

double SequentialRng::uniform() noexcept {
  const std::uint32_t hi = next32();
  const std::uint32_t lo = next32();
  return to_unit_open_closed(hi, lo);
}

double SequentialRng::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

int SequentialRng::uniform_int(int lo, int hi) noexcept {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  const std::uint64_t bits = (static_cast<std::uint64_t>(next32()) << 32) | next32();
  return lo + static_cast<int>(bits % span);
}

double SequentialRng::gaussian() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace mlcert
