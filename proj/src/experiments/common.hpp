#pragma once

#include "gmt/harness.hpp"

#include <string>
#include <vector>

namespace gmt::exp {

/// Nodes 0..n-1 on each of k axes.
inline std::vector<GridIndex> cube_nodes(int k, int n) {
  return grid_box(GridIndex::Zero(k), GridIndex::Constant(k, n - 1));
}

inline VectorXd vec(std::initializer_list<double> values) {
  VectorXd v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline Table series_table(const std::vector<ContentEstimate>& series) {
  Table t{{"r", "value", "ball_count"}, {}};
  for (const auto& e : series) t.rows.push_back({e.resolution, e.value, static_cast<double>(e.ball_count)});
  return t;
}

/// Fraction of grid points whose jet is resolved with rank < k.
inline double low_rank_fraction(const Stratification& s) {
  std::size_t low = 0;
  for (int label : s.labels) {
    if (label >= 0 && label < s.k) ++low;
  }
  return s.size() == 0 ? 0.0 : static_cast<double>(low) / static_cast<double>(s.size());
}

inline double rank_fraction(const Stratification& s, int rank) {
  std::size_t count = 0;
  for (int label : s.labels) {
    if (label == rank) ++count;
  }
  return s.size() == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(s.size());
}

}  // namespace gmt::exp
