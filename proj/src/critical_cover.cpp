#include "gmt/jets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace gmt {

namespace {

struct CubeGrid {
  GridIndex lo;
  int nodes = 0;  // per axis
};

CubeGrid cube_grid(const SampledMap& f) {
  require(f.size() > 0, "critical_cover: empty map");
  const int k = f.k();
  GridIndex lo = f.index(0), hi = f.index(0);
  for (const auto& idx : f.indices()) {
    lo = lo.cwiseMin(idx);
    hi = hi.cwiseMax(idx);
  }
  const GridIndex extent = hi - lo;
  for (int a = 1; a < k; ++a) {
    if (extent[a] != extent[0]) throw Error(ErrorKind::unsupported_domain, "domain grid is not a cube");
  }
  std::size_t expected = 1;
  for (int a = 0; a < k; ++a) expected *= static_cast<std::size_t>(extent[a] + 1);
  if (expected != f.size() || extent[0] < 1) {
    throw Error(ErrorKind::unsupported_domain, "domain grid is not a full cube of nodes");
  }
  return {lo, extent[0] + 1};
}

}  // namespace

CriticalCover critical_cover(const SampledMap& f, const Stratification& strata, int j, int m,
                             const CriticalCoverOptions& options) {
  const int k = f.k();
  require(j >= 0 && j < k, "critical_cover: need 0 <= j < k");
  require(m >= 1, "critical_cover: m must be positive");
  require(strata.size() == f.size(), "critical_cover: stratification does not match the map");
  const CubeGrid grid = cube_grid(f);
  const int span = grid.nodes - 1;

  std::vector<char> in_kj(f.size(), 0);
  for (std::size_t i : strata.strata[static_cast<std::size_t>(j)]) in_kj[i] = 1;
  const auto outside = static_cast<double>(std::count(in_kj.begin(), in_kj.end(), 0));
  const double allowed = std::pow(static_cast<double>(m), -k) * static_cast<double>(f.size());
  if (!(outside < allowed)) {
    throw Error(ErrorKind::cube_too_coarse, "fraction outside K_j is " +
                                                std::to_string(outside / static_cast<double>(f.size())) +
                                                ", need below m^-k");
  }

  // Box of a node from its first j relative coordinates; fibers keyed by those coordinates.
  auto box_of = [&](const GridIndex& rel) {
    long code = 0;
    for (int a = j - 1; a >= 0; --a) code = code * m + std::min(rel[a] * m / span, m - 1);
    return code;
  };
  struct Fiber {
    std::size_t outside = 0;
    std::vector<std::size_t> members;
  };
  std::vector<std::map<std::vector<int>, Fiber>> fibers(static_cast<std::size_t>(std::pow(m, j)));
  std::vector<long> box(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const GridIndex rel = f.index(i) - grid.lo;
    box[i] = box_of(rel);
    Fiber& fiber = fibers[static_cast<std::size_t>(box[i])][std::vector<int>(rel.data(), rel.data() + j)];
    fiber.members.push_back(i);
    if (!in_kj[i]) ++fiber.outside;
  }

  CriticalCover out;
  out.m = m;
  out.j = j;
  out.lipschitz = f.lipschitz();
  out.edge = span * f.h();
  out.cover.s = k;
  const double middle = 0.5 * span;
  for (const auto& box_fibers : fibers) {
    // std::map iterates lexicographically, so the first minimizer wins ties.
    const Fiber* best = nullptr;
    for (const auto& [key, fiber] : box_fibers) {
      if (!best || fiber.outside < best->outside) best = &fiber;
    }
    require(best != nullptr, "critical_cover: empty box");
    std::size_t rep = f.size();
    double rep_offset = 0;
    for (std::size_t i : best->members) {
      if (!in_kj[i]) continue;
      const GridIndex rel = f.index(i) - grid.lo;
      double offset = 0;
      for (int a = j; a < k; ++a) offset += std::abs(rel[a] - middle);
      if (rep == f.size() || offset < rep_offset) {
        rep = i;
        rep_offset = offset;
      }
    }
    if (rep == f.size()) throw Error(ErrorKind::cube_too_coarse, "a selected fiber misses K_j");
    out.fibers.push_back(rep);
    out.cover.balls.push_back({f.value(rep), 0.0});
  }

  const double unit = out.lipschitz * out.edge / m;
  std::vector<double> dist(f.size(), 0.0);
  double worst = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!in_kj[i]) continue;
    dist[i] = f.target()(f.value(i), out.cover.balls[static_cast<std::size_t>(box[i])].center);
    worst = std::max(worst, dist[i]);
    ++out.covered_points;
  }
  if (options.constant) {
    out.constant = *options.constant;
  } else {
    out.constant = unit > 0 ? worst / unit : 0.0;
  }
  const double radius = std::max(out.constant * unit, 1e-12 * out.edge / m);
  for (auto& ball : out.cover.balls) ball.radius = radius;

  std::ofstream csv;
  if (!options.failure_csv.empty()) {
    csv.open(options.failure_csv);
    if (!csv) throw Error(ErrorKind::io, "cannot write " + options.failure_csv);
    csv << "point,box,distance,radius\n";
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!in_kj[i] || dist[i] <= radius * (1 + 1e-12)) continue;
    ++out.failures;
    if (csv.is_open()) csv << i << ',' << box[i] << ',' << dist[i] << ',' << radius << '\n';
  }
  return out;
}

}  // namespace gmt
