// Copyright 2026 The btf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace btf {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);
};

/// Purpose tags that separate independent random streams drawn under the
/// same seed.
enum class StreamPurpose : std::uint32_t {
  Init = 1,
  Hyperparams = 2,
  Latents = 3,
  Split = 4,
  Simulate = 5,
  Test = 0xFF,
};

/// UniformRandomBitGenerator over one Philox stream. The stream is named by
/// (seed, sweep, purpose, entity); word n of the stream is a pure function of
/// that tuple and n, so draws for different entities never depend on the
/// order in which entities are processed.
class CounterRng {
 public:
  using result_type = std::uint32_t;

  CounterRng(std::uint64_t seed, std::uint32_t sweep, StreamPurpose purpose,
             std::uint32_t sub, std::uint32_t entity);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Skip ahead to word `n` of the stream.
  void seek(std::uint64_t n);

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter base_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  unsigned pos_ = 4;
};

/// Unbiased integer in [0, n) by rejection on 32-bit words. n must be > 0.
std::uint32_t uniform_index(CounterRng& rng, std::uint32_t n);

}  // namespace btf
