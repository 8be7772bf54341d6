#pragma once

// csdnsim/latency.hpp — pairwise region latency table.

#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace csdnsim {

struct LocationId {
  int32_t value{0};
  friend constexpr bool operator==(LocationId a, LocationId b) { return a.value == b.value; }
  friend constexpr auto operator<=>(LocationId a, LocationId b) { return a.value <=> b.value; }
};

class LatencyModel {
 public:
  LatencyModel() = default;

  // Validates shape: square, zero diagonal, symmetric, positive off-diagonal.
  static LatencyModel from_matrix(const std::vector<std::vector<double>>& m) {
    LatencyModel model;
    const std::size_t n = m.size();
    if (n == 0) throw std::invalid_argument("latency matrix: empty");
    model.regions_ = static_cast<int>(n);
    model.cells_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i].size() != n) throw std::invalid_argument("latency matrix: not square");
      for (std::size_t j = 0; j < n; ++j) {
        const double v = m[i][j];
        if (i == j && v != 0.0) throw std::invalid_argument("latency matrix: nonzero diagonal");
        if (i != j && !(v > 0.0)) throw std::invalid_argument("latency matrix: off-diagonal must be > 0");
        if (j < i && v != model.cells_[j * n + i]) throw std::invalid_argument("latency matrix: not symmetric");
        model.cells_[i * n + j] = v;
      }
    }
    return model;
  }

  int region_count() const { return regions_; }

  double latency_ms(LocationId a, LocationId b) const {
    if (a.value < 0 || a.value >= regions_ || b.value < 0 || b.value >= regions_)
      throw std::out_of_range("latency_ms: unknown region pair");
    return cells_[static_cast<std::size_t>(a.value) * regions_ + b.value];
  }

 private:
  int regions_{0};
  std::vector<double> cells_;
};

}  // namespace csdnsim
