// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#include "btf/random.hpp"

#include <stdexcept>

namespace btf {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMul0, ctr[0], lo0, hi0);
    mulhilo(kMul1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint32_t sweep, StreamPurpose purpose,
                       std::uint32_t sub, std::uint32_t entity)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      base_{0, entity, (static_cast<std::uint32_t>(purpose) << 24) | (sub & 0x00FFFFFFu), sweep} {}

CounterRng::result_type CounterRng::operator()() {
  if (pos_ == 4) {
    Philox4x32::Counter ctr = base_;
    // Word 0 holds the low half of the block number; the purpose word has
    // spare room only for sub-streams, so streams are capped at 2^32 blocks.
    ctr[0] = static_cast<std::uint32_t>(block_);
    buffer_ = Philox4x32::block(ctr, key_);
    ++block_;
    pos_ = 0;
  }
  return buffer_[pos_++];
}

void CounterRng::seek(std::uint64_t n) {
  block_ = n / 4;
  pos_ = 4;
  const unsigned offset = static_cast<unsigned>(n % 4);
  for (unsigned s = 0; s < offset; ++s) (*this)();
}

std::uint32_t uniform_index(CounterRng& rng, std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint32_t threshold = (0u - n) % n;  // 2^32 mod n
  for (;;) {
    const std::uint32_t r = rng();
    if (r >= threshold) return r % n;
  }
}

}  // namespace btf
