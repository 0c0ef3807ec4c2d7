#include "quasisim/rng.hpp"

#include <stdexcept>

namespace quasisim {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

unsigned __int128 scaled_floor(const Rational& p) {
  // floor(p * 2^64) for 0 <= p <= 1.
  mpz_class scaled = p.numerator();
  scaled <<= 64;
  scaled /= p.denominator();
  const mpz_class hi = scaled >> 64;
  const mpz_class lo = scaled - (hi << 64);
  unsigned __int128 out = static_cast<unsigned __int128>(hi.get_ui()) << 64;
  // get_ui() is unsigned long (64-bit on LP64).
  out |= lo.get_ui();
  return out;
}

}  // namespace

PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

DiscreteSampler::DiscreteSampler(std::span<const Rational> probabilities) {
  if (probabilities.empty()) throw std::invalid_argument("DiscreteSampler: no outcomes");
  Rational cumulative;
  bounds_.reserve(probabilities.size());
  for (const auto& p : probabilities) {
    if (p.is_negative()) throw std::invalid_argument("DiscreteSampler: negative probability");
    cumulative += p;
    bounds_.push_back(scaled_floor(cumulative));
  }
  if (cumulative != Rational(1)) {
    throw std::invalid_argument("DiscreteSampler: probabilities sum to " + cumulative.str());
  }
}

std::size_t DiscreteSampler::operator()(std::uint64_t u) const {
  const auto v = static_cast<unsigned __int128>(u);
  for (std::size_t k = 0; k < bounds_.size(); ++k) {
    if (v < bounds_[k]) return k;
  }
  return bounds_.size() - 1;  // unreachable: the last bound is 2^64
}

BernoulliThreshold::BernoulliThreshold(const Rational& p) {
  if (p.is_negative() || p > Rational(1)) {
    throw std::invalid_argument("BernoulliThreshold: probability " + p.str() + " outside [0, 1]");
  }
  bound_ = scaled_floor(p);
}

}  // namespace quasisim
