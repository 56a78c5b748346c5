#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmt {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::MatrixXi;
using Eigen::VectorXd;
using Eigen::VectorXi;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Integer lattice coordinates of a grid point; the point itself is h * index.
using GridIndex = Eigen::VectorXi;

/// R^a -> R^b evaluator.
using VectorMap = std::function<VectorXd(const VectorXd&)>;
/// Jacobian evaluator of a VectorMap, b x a.
using JacobianMap = std::function<MatrixXd(const VectorXd&)>;
using ScalarField = std::function<double(const VectorXd&)>;

enum class ErrorKind {
  contract_violation,
  invalid_landmark,
  inconsistent_data,
  insufficient_density,
  unreliable_check,
  needs_permutation,
  newton_divergence,
  cube_too_coarse,
  unsupported_domain,
  not_horizontal,
  degenerate_fields,
  no_path_found,
  usage,
  io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::contract_violation, message);
}

struct GridIndexHash {
  std::size_t operator()(const GridIndex& index) const noexcept {
    std::size_t seed = static_cast<std::size_t>(index.size());
    for (Index i = 0; i < index.size(); ++i) {
      seed ^= std::hash<int>{}(index[i]) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    }
    return seed;
  }
};

struct GridIndexEqual {
  bool operator()(const GridIndex& a, const GridIndex& b) const noexcept {
    return a.size() == b.size() && a == b;
  }
};

/// All lattice points of the box lo..hi (inclusive), first coordinate fastest.
std::vector<GridIndex> grid_box(const GridIndex& lo, const GridIndex& hi);

/// splitmix64 step; used to derive per-sample seeds from a root seed.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

/// Least-squares fit of log(y) against log(x). Needs at least two positive pairs.
LineFit loglog_fit(std::span<const double> x, std::span<const double> y);

LineFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Sup-norm distance on R^N; both operands must have the same length N >= 1.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar linf_distance(const Eigen::MatrixBase<DerivedA>& u,
                                        const Eigen::MatrixBase<DerivedB>& v) {
  require(u.size() == v.size(), "linf_distance: length mismatch");
  require(u.size() >= 1, "linf_distance: empty vectors");
  return (u - v).cwiseAbs().maxCoeff();
}

}  // namespace gmt
