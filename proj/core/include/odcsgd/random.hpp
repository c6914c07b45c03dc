// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace odcsgd {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Pure function of
/// (counter, key).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Separates the streams used for different purposes within one run.
enum class StreamDomain : std::uint32_t {
  gradient_noise = 1,
  target_noise = 2,
  initial_state = 3,
  monte_carlo = 4,
};

/// Counter-based random stream keyed by (seed, agent, time, domain).
///
/// The seed is the Philox key; agent, time and domain occupy three counter
/// words and the fourth word counts blocks. Two streams with different keys
/// never share a block, so draws do not depend on evaluation order or on
/// which thread consumes which stream. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint32_t agent, std::uint32_t time,
               StreamDomain domain) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  /// Exponential with unit rate.
  double exponential() noexcept;

  std::uint64_t blocks_consumed() const noexcept { return block_; }

 private:
  void refill() noexcept;

  PhiloxKey key_;
  std::uint32_t agent_;
  std::uint32_t time_;
  std::uint32_t domain_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// A value-type family of streams sharing one seed and domain.
struct StreamFamily {
  std::uint64_t seed = 0;
  StreamDomain domain = StreamDomain::gradient_noise;

  RandomStream at(std::uint32_t agent, std::uint32_t time) const noexcept {
    return RandomStream(seed, agent, time, domain);
  }
};

}  // namespace odcsgd
