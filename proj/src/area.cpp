#include "gmt/jets.hpp"

#include <array>
#include <cmath>

namespace gmt {

namespace {

// Sample-point offset inside each target cell. Irrational fractions keep sample points off
// the shared edges of image simplices.
constexpr std::array<double, 2> kJitter = {0.0414213562373095, 0.0732050807568877};

struct GridCells {
  std::vector<double> weight;                      // trapezoid weight per node
  std::vector<std::vector<std::size_t>> cells;     // corner nodes, bit i of corner = +1 on axis i
};

GridCells full_cells(const SampledMap& g) {
  const int k = g.k();
  const int corners = 1 << k;
  GridCells out;
  out.weight.assign(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<std::size_t> corner_nodes(static_cast<std::size_t>(corners));
    bool complete = true;
    for (int c = 0; c < corners && complete; ++c) {
      GridIndex idx = g.index(i);
      for (int a = 0; a < k; ++a) idx[a] += (c >> a) & 1;
      if (auto j = g.find(idx)) {
        corner_nodes[static_cast<std::size_t>(c)] = *j;
      } else {
        complete = false;
      }
    }
    if (!complete) continue;
    for (std::size_t node : corner_nodes) out.weight[node] += 1.0 / corners;
    out.cells.push_back(std::move(corner_nodes));
  }
  return out;
}

// Simplices of a cell: k = 1 one segment, k = 2 two triangles.
std::vector<std::vector<std::size_t>> simplices(const std::vector<std::size_t>& cell, int k) {
  if (k == 1) return {{cell[0], cell[1]}};
  require(k == 2, "area formula: simplicial split implemented for k <= 2");
  return {{cell[0], cell[1], cell[3]}, {cell[0], cell[3], cell[2]}};
}

double simplex_volume(const SampledMap& g, const std::vector<std::size_t>& simplex) {
  const auto k = static_cast<Index>(simplex.size() - 1);
  MatrixXd edges(g.value_dim(), k);
  for (Index i = 0; i < k; ++i) {
    edges.col(i) = g.value(simplex[static_cast<std::size_t>(i + 1)]) - g.value(simplex[0]);
  }
  const double gram = (edges.transpose() * edges).determinant();
  double factorial = 1;
  for (Index i = 2; i <= k; ++i) factorial *= static_cast<double>(i);
  return std::sqrt(std::max(gram, 0.0)) / factorial;
}

void rasterize_segment(double a, double b, double res, Multiplicity& out) {
  if (a > b) std::swap(a, b);
  const auto first = static_cast<int>(std::floor(a / res - 0.5 - kJitter[0]) - 1);
  const auto last = static_cast<int>(std::ceil(b / res - 0.5 - kJitter[0]) + 1);
  for (int c = first; c <= last; ++c) {
    const double y = res * (c + 0.5 + kJitter[0]);
    if (y >= a && y < b) out.counts[GridIndex::Constant(1, c)] += 1;
  }
}

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

void rasterize_triangle(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                        const Eigen::Vector2d& p2, double res, Multiplicity& out) {
  const double area2 = cross(p1 - p0, p2 - p0);
  if (area2 == 0) return;
  const double sign = area2 > 0 ? 1.0 : -1.0;
  const Eigen::Vector2d lo = p0.cwiseMin(p1).cwiseMin(p2);
  const Eigen::Vector2d hi = p0.cwiseMax(p1).cwiseMax(p2);
  GridIndex from(2), to(2);
  for (int a = 0; a < 2; ++a) {
    from[a] = static_cast<int>(std::floor(lo[a] / res - 0.5 - kJitter[a]));
    to[a] = static_cast<int>(std::ceil(hi[a] / res - 0.5 - kJitter[a]));
  }
  for (int cy = from[1]; cy <= to[1]; ++cy) {
    for (int cx = from[0]; cx <= to[0]; ++cx) {
      const Eigen::Vector2d y(res * (cx + 0.5 + kJitter[0]), res * (cy + 0.5 + kJitter[1]));
      const double e0 = sign * cross(p1 - p0, y - p0);
      const double e1 = sign * cross(p2 - p1, y - p1);
      const double e2 = sign * cross(p0 - p2, y - p2);
      if (e0 >= 0 && e1 >= 0 && e2 >= 0) {
        GridIndex c(2);
        c << cx, cy;
        out.counts[c] += 1;
      }
    }
  }
}

}  // namespace

double Multiplicity::integral(int k) const {
  double total = 0;
  for (const auto& [cell, count] : counts) total += count;
  return total * std::pow(resolution, k);
}

Multiplicity multiplicity_estimate(const SampledMap& g, double resolution) {
  require(resolution > 0, "multiplicity_estimate: resolution must be positive");
  require(g.value_dim() == g.k() && g.k() <= 2,
          "multiplicity_estimate: rasterization needs k = m <= 2");
  Multiplicity out;
  out.resolution = resolution;
  const GridCells cells = full_cells(g);
  for (const auto& cell : cells.cells) {
    for (const auto& s : simplices(cell, g.k())) {
      if (g.k() == 1) {
        rasterize_segment(g.value(s[0])[0], g.value(s[1])[0], resolution, out);
      } else {
        rasterize_triangle(g.value(s[0]).head<2>(), g.value(s[1]).head<2>(),
                           g.value(s[2]).head<2>(), resolution, out);
      }
    }
  }
  return out;
}

AreaCheck area_formula_check(const SampledMap& g, const AreaOptions& options) {
  const int k = g.k();
  require(g.value_dim() >= k, "area_formula_check: need m >= k");
  const GridCells cells = full_cells(g);
  require(!cells.cells.empty(), "area_formula_check: domain grid has no full cells");

  AreaCheck out;
  out.analytic_jacobian = options.jacobian.has_value();
  const double volume = std::pow(g.h(), k);
  auto jacobian_of = [](const MatrixXd& d) {
    return std::sqrt(std::max((d.transpose() * d).determinant(), 0.0));
  };

  std::vector<double> jac(g.size(), 0.0);
  std::vector<int> strata_labels;
  std::size_t needed = 0;
  if (options.jacobian) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (cells.weight[i] > 0) jac[i] = jacobian_of((*options.jacobian)(g.point(i)));
    }
  } else {
    const Stratification strata = stratify_critical(g, options.jets);
    strata_labels = strata.labels;
    JetOptions jet_options = options.jets;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (cells.weight[i] == 0) continue;
      ++needed;
      if (strata.labels[i] < 0) {
        ++out.unresolved;
        continue;
      }
      jac[i] = jacobian_of(approx_jet(g, i, jet_options).derivative);
    }
    const double fraction = static_cast<double>(out.unresolved) / static_cast<double>(needed);
    if (fraction > options.max_unresolved_fraction) {
      throw Error(ErrorKind::unreliable_check,
                  std::to_string(out.unresolved) + " of " + std::to_string(needed) +
                      " jets unresolved");
    }
  }
  // Unresolved nodes carry no Jacobian; the resolved ones stand in for their share of E.
  double total_weight = 0, resolved_weight = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    total_weight += cells.weight[i];
    if (options.jacobian || strata_labels.empty() || strata_labels[i] >= 0) {
      resolved_weight += cells.weight[i];
      out.lhs += cells.weight[i] * jac[i] * volume;
    }
  }
  if (resolved_weight > 0) out.lhs *= total_weight / resolved_weight;

  if (g.value_dim() == k && k <= 2) {
    const double res = options.target_resolution > 0 ? options.target_resolution : g.h();
    out.rhs = multiplicity_estimate(g, res).integral(k);
  } else {
    for (const auto& cell : cells.cells) {
      for (const auto& s : simplices(cell, k)) out.rhs += simplex_volume(g, s);
    }
  }
  out.gap = std::abs(out.lhs - out.rhs) / std::max(out.lhs, 1e-12);
  return out;
}

}  // namespace gmt
