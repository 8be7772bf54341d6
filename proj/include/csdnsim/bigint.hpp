#pragma once

// csdnsim/bigint.hpp — minimal arbitrary-precision unsigned integers.
//
// Just enough for exact binomial coefficients: the request-probability model
// needs C(2kS, j) / 2^(2kS) evaluated without rounding before the final
// conversion to double.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace csdnsim {

class BigUint {
 public:
  BigUint() = default;
  explicit BigUint(uint64_t v) {
    while (v != 0) {
      limbs_.push_back(static_cast<uint32_t>(v & 0xffffffffULL));
      v >>= 32;
    }
  }

  bool is_zero() const { return limbs_.empty(); }

  void add(const BigUint& other) {
    const std::size_t n = std::max(limbs_.size(), other.limbs_.size());
    limbs_.resize(n, 0);
    uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      uint64_t sum = carry + limbs_[i];
      if (i < other.limbs_.size()) sum += other.limbs_[i];
      limbs_[i] = static_cast<uint32_t>(sum & 0xffffffffULL);
      carry = sum >> 32;
    }
    if (carry != 0) limbs_.push_back(static_cast<uint32_t>(carry));
  }

  void mul_small(uint32_t m) {
    if (m == 0) {
      limbs_.clear();
      return;
    }
    uint64_t carry = 0;
    for (auto& limb : limbs_) {
      const uint64_t prod = static_cast<uint64_t>(limb) * m + carry;
      limb = static_cast<uint32_t>(prod & 0xffffffffULL);
      carry = prod >> 32;
    }
    while (carry != 0) {
      limbs_.push_back(static_cast<uint32_t>(carry & 0xffffffffULL));
      carry >>= 32;
    }
  }

  // Floor division by a small divisor; remainder returned.
  uint32_t div_small(uint32_t d) {
    if (d == 0) throw std::invalid_argument("BigUint: division by zero");
    uint64_t rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      const uint64_t cur = (rem << 32) | limbs_[i];
      limbs_[i] = static_cast<uint32_t>(cur / d);
      rem = cur % d;
    }
    trim();
    return static_cast<uint32_t>(rem);
  }

  void shl_bits(unsigned bits) {
    if (is_zero() || bits == 0) return;
    const unsigned words = bits / 32, rem = bits % 32;
    if (rem != 0) {
      uint32_t carry = 0;
      for (auto& limb : limbs_) {
        const uint32_t next = limb >> (32 - rem);
        limb = (limb << rem) | carry;
        carry = next;
      }
      if (carry != 0) limbs_.push_back(carry);
    }
    limbs_.insert(limbs_.begin(), words, 0);
  }

  friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }

  unsigned bit_length() const {
    if (is_zero()) return 0;
    unsigned bits = 32 * static_cast<unsigned>(limbs_.size() - 1);
    uint32_t top = limbs_.back();
    while (top != 0) {
      ++bits;
      top >>= 1;
    }
    return bits;
  }

  // value * 2^shift as double, computed via the top 64 bits so arbitrarily
  // large operands never overflow on the way to a representable result.
  double ldexp_to_double(int shift) const {
    if (is_zero()) return 0.0;
    const unsigned bits = bit_length();
    if (bits <= 64) {
      uint64_t v = 0;
      for (std::size_t i = limbs_.size(); i-- > 0;) v = (v << 32) | limbs_[i];
      return std::ldexp(static_cast<double>(v), shift);
    }
    const unsigned drop = bits - 64;
    uint64_t mant = 0;
    for (unsigned i = 0; i < 64; ++i) {
      const unsigned bit = drop + i;
      const uint32_t limb = limbs_[bit / 32];
      mant |= static_cast<uint64_t>((limb >> (bit % 32)) & 1u) << i;
    }
    return std::ldexp(static_cast<double>(mant), shift + static_cast<int>(drop));
  }

  double to_double() const { return ldexp_to_double(0); }

  std::string to_string() const {
    if (is_zero()) return "0";
    BigUint tmp = *this;
    std::string out;
    while (!tmp.is_zero()) out.push_back(static_cast<char>('0' + tmp.div_small(10)));
    return {out.rbegin(), out.rend()};
  }

 private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<uint32_t> limbs_;  // little-endian base 2^32
};

// C(n, k) via the multiplicative formula; every intermediate value is itself
// a binomial coefficient, so each division is exact.
inline BigUint binomial_exact(unsigned n, unsigned k) {
  if (k > n) return BigUint{};
  if (k > n - k) k = n - k;
  BigUint result(1);
  for (unsigned i = 1; i <= k; ++i) {
    result.mul_small(n - k + i);
    result.div_small(i);
  }
  return result;
}

inline BigUint pow2_big(unsigned e) {
  BigUint result(1);
  result.shl_bits(e);
  return result;
}

}  // namespace csdnsim
