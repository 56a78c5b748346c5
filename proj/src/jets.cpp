#include "gmt/jets.hpp"

#include <cmath>
#include <limits>

namespace gmt {

namespace {

// Lattice offsets of the punctured ball of radius rho/h, plus the fit design for them.
class JetFitter {
 public:
  JetFitter(int k, double h, const JetOptions& options) : k_(k), h_(h), options_(options) {
    require(options.order == 1 || options.order == 2, "approx_jet: order must be 1 or 2");
    rho_ = options.rho > 0 ? options.rho : 3 * h;
    const double reach = rho_ / h * (1 + 1e-12);
    const int r = static_cast<int>(std::floor(reach));
    for (const auto& offset : grid_box(GridIndex::Constant(k, -r), GridIndex::Constant(k, r))) {
      const double len = offset.cast<double>().norm();
      if (len > 0 && len <= reach) offsets_.push_back(offset);
    }
    unknowns_ = k + (options.order == 2 ? k * (k + 1) / 2 : 0);
  }

  double rho() const { return rho_; }

  ApproxJet fit(const SampledMap& f, std::size_t point) const {
    const GridIndex& center = f.index(point);
    std::vector<std::size_t> present;
    std::vector<const GridIndex*> used;
    for (const auto& offset : offsets_) {
      if (auto j = f.find(center + offset)) {
        present.push_back(*j);
        used.push_back(&offset);
      }
    }
    const double fill = offsets_.empty()
                            ? 0.0
                            : static_cast<double>(present.size()) / static_cast<double>(offsets_.size());
    if (fill < options_.min_fill || static_cast<int>(present.size()) < unknowns_) {
      throw Error(ErrorKind::insufficient_density,
                  "fit neighborhood " + std::to_string(static_cast<int>(100 * fill)) + "% full");
    }

    const auto rows = static_cast<Index>(present.size());
    const Index n = f.value_dim();
    MatrixXd design(rows, unknowns_);
    MatrixXd rhs(rows, n);
    const VectorXd& fx = f.value(point);
    for (Index r = 0; r < rows; ++r) {
      const VectorXd d = used[static_cast<std::size_t>(r)]->cast<double>();
      Index c = 0;
      for (int a = 0; a < k_; ++a) design(r, c++) = d[a];
      if (options_.order == 2) {
        for (int a = 0; a < k_; ++a) {
          for (int b = a; b < k_; ++b) design(r, c++) = (a == b ? 0.5 : 1.0) * d[a] * d[b];
        }
      }
      rhs.row(r) = (f.value(present[static_cast<std::size_t>(r)]) - fx).transpose();
    }

    Eigen::ColPivHouseholderQR<MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < unknowns_) {
      throw Error(ErrorKind::insufficient_density, "fit matrix is rank deficient");
    }
    const MatrixXd coeffs = qr.solve(rhs);

    ApproxJet jet;
    jet.base = f.point(point);
    jet.derivative = coeffs.topRows(k_).transpose() / h_;
    jet.neighbors = present.size();
    jet.residual = (rhs - design * coeffs).cwiseAbs().maxCoeff() / rho_;
    if (jet.derivative.size() > 0) {
      jet.singular_values = Eigen::JacobiSVD<MatrixXd>(jet.derivative).singularValues();
      // Differences of values of size `scale` carry rounding error near eps * scale, which the
      // fit turns into derivative noise near eps * scale / h; a relative threshold alone would
      // count that noise as rank wherever the true derivative vanishes.
      double scale = fx.cwiseAbs().maxCoeff();
      for (std::size_t j : present) scale = std::max(scale, f.value(j).cwiseAbs().maxCoeff());
      const double floor = 1e3 * std::numeric_limits<double>::epsilon() * scale / h_;
      const auto& sigma = jet.singular_values;
      jet.rank = 0;
      for (Index i = 0; i < sigma.size(); ++i) {
        if (sigma[i] > options_.rank_tol * sigma[0] && sigma[i] > floor) ++jet.rank;
      }
    }
    return jet;
  }

 private:
  int k_;
  double h_;
  JetOptions options_;
  double rho_;
  int unknowns_;
  std::vector<GridIndex> offsets_;
};

}  // namespace

ApproxJet approx_jet(const SampledMap& f, std::size_t point, const JetOptions& options) {
  require(point < f.size(), "approx_jet: point out of range");
  return JetFitter(f.k(), f.h(), options).fit(f, point);
}

Stratification stratify_critical(const SampledMap& f, const JetOptions& options) {
  const JetFitter fitter(f.k(), f.h(), options);
  require(fitter.rho() >= 2 * f.h() * (1 - 1e-12), "stratify_critical: rho must be >= 2h");
  Stratification out;
  out.k = f.k();
  out.strata.resize(static_cast<std::size_t>(f.k()));
  out.labels.assign(f.size(), -1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    try {
      const ApproxJet jet = fitter.fit(f, i);
      if (jet.residual > options.residual_threshold) {
        out.unresolved.push_back(i);
        continue;
      }
      out.labels[i] = jet.rank;
      if (jet.rank >= f.k()) {
        out.regular.push_back(i);
      } else {
        out.strata[static_cast<std::size_t>(jet.rank)].push_back(i);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::insufficient_density) throw;
      out.unresolved.push_back(i);
    }
  }
  return out;
}

}  // namespace gmt
