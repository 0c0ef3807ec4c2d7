#pragma once

// Counter-based random numbers (Philox4x32-10). Every draw is a pure function
// of (seed, stream_id, counter), so shards of a run can generate any slice of
// the serial stream independently.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "quasisim/rational.hpp"

namespace quasisim {

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint32_t stream_id = 0;
  friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key);

class CounterRng {
 public:
  explicit CounterRng(RngSpec spec)
      : key_{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)},
        stream_(spec.stream_id) {}

  // Two independent uniform 64-bit words for (index, lane).
  std::array<std::uint64_t, 2> words(std::uint64_t index, std::uint32_t lane) const {
    const PhiloxBlock out = philox4x32_10(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), lane, stream_},
        key_);
    return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
            (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
  }

 private:
  PhiloxKey key_;
  std::uint32_t stream_;
};

// Inverse-CDF sampler over exact probabilities. A uniform 64-bit word u picks
// the first index k with u < floor(2^64 * (p_0 + ... + p_k)), so each index is
// drawn with probability within 2^-64 of its exact value.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const Rational> probabilities);
  std::size_t operator()(std::uint64_t u) const;
  std::size_t size() const { return bounds_.size(); }

 private:
  std::vector<unsigned __int128> bounds_;
};

// Bernoulli(p) as "u < floor(2^64 p)".
class BernoulliThreshold {
 public:
  explicit BernoulliThreshold(const Rational& p);
  bool operator()(std::uint64_t u) const { return static_cast<unsigned __int128>(u) < bound_; }

 private:
  unsigned __int128 bound_;
};

}  // namespace quasisim
