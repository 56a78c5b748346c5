#include "gmt/types.hpp"

#include <cmath>

namespace gmt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::contract_violation: return "contract violation";
    case ErrorKind::invalid_landmark: return "invalid landmark";
    case ErrorKind::inconsistent_data: return "inconsistent data";
    case ErrorKind::insufficient_density: return "insufficient density";
    case ErrorKind::unreliable_check: return "unreliable check";
    case ErrorKind::needs_permutation: return "needs permutation";
    case ErrorKind::newton_divergence: return "newton divergence";
    case ErrorKind::cube_too_coarse: return "cube too coarse";
    case ErrorKind::unsupported_domain: return "unsupported domain";
    case ErrorKind::not_horizontal: return "not horizontal";
    case ErrorKind::degenerate_fields: return "degenerate fields";
    case ErrorKind::no_path_found: return "no path found";
    case ErrorKind::usage: return "usage error";
    case ErrorKind::io: return "io error";
  }
  return "error";
}

std::vector<GridIndex> grid_box(const GridIndex& lo, const GridIndex& hi) {
  require(lo.size() == hi.size() && lo.size() >= 1, "grid_box: dimension mismatch");
  std::vector<GridIndex> out;
  if ((hi.array() < lo.array()).any()) return out;
  std::size_t total = 1;
  for (Index i = 0; i < lo.size(); ++i) total *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
  out.reserve(total);
  GridIndex cur = lo;
  while (true) {
    out.push_back(cur);
    Index axis = 0;
    while (axis < cur.size()) {
      if (++cur[axis] <= hi[axis]) break;
      cur[axis] = lo[axis];
      ++axis;
    }
    if (axis == cur.size()) break;
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

LineFit linear_fit(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "linear_fit: size mismatch");
  require(x.size() >= 2, "linear_fit: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0, "linear_fit: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

LineFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "loglog_fit: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0 && y[i] > 0, "loglog_fit: non-positive value");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return linear_fit(lx, ly);
}

}  // namespace gmt
