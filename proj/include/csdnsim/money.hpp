#pragma once

// csdnsim/money.hpp — fixed-point currency.
//
// Amounts that cross a ledger boundary (bids, payments, reserves, recorded
// revenue) are quantized to integer cents; intermediate pricing math stays in
// double. Keeping the ledger integral makes event logs byte-reproducible and
// money sums exact.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace csdnsim {

struct Money {
  int64_t cents{0};

  constexpr Money() = default;
  constexpr explicit Money(int64_t c) : cents(c) {}

  static Money from_value(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("Money: non-finite value");
    return Money{static_cast<int64_t>(std::llround(v * 100.0))};
  }

  double value() const { return static_cast<double>(cents) / 100.0; }

  friend constexpr bool operator==(Money a, Money b) { return a.cents == b.cents; }
  friend constexpr auto operator<=>(Money a, Money b) { return a.cents <=> b.cents; }
  friend constexpr Money operator+(Money a, Money b) { return Money{a.cents + b.cents}; }
  friend constexpr Money operator-(Money a, Money b) { return Money{a.cents - b.cents}; }
  Money& operator+=(Money o) {
    cents += o.cents;
    return *this;
  }
};

inline std::string format_money(Money m) {
  const bool neg = m.cents < 0;
  const int64_t abs = neg ? -m.cents : m.cents;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", neg ? "-" : "",
                static_cast<long long>(abs / 100), static_cast<long long>(abs % 100));
  return buf;
}

inline Money parse_money(const std::string& s) {
  double v = 0.0;
  if (std::sscanf(s.c_str(), "%lf", &v) != 1)
    throw std::invalid_argument("parse_money: bad input '" + s + "'");
  return Money::from_value(v);
}

}  // namespace csdnsim
