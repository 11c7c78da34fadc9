#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace eact {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
inline constexpr double hermiticity = 1e-10;
inline constexpr double trace_one = 1e-10;
inline constexpr double psd_eigenvalue = 1e-10;
inline constexpr double unit_norm = 1e-10;
inline constexpr double kraus_completeness = 1e-9;
inline constexpr double choi_psd = 1e-9;
inline constexpr double support_membership = 1e-9;
inline constexpr double support_rank = 1e-10;
inline constexpr double eigenvalue_cluster = 1e-8;
}  // namespace tol

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvariantError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SizeLimitError : std::length_error {
  using std::length_error::length_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Index product_of(const std::vector<Index>& dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

/// Hermitian operator with an explicit dimension; the constructor enforces
/// self-adjointness up to a relative entrywise tolerance.
struct HermitianOperator {
  Matrix entries;

  HermitianOperator() = default;
  explicit HermitianOperator(Matrix m) : entries(std::move(m)) {
    if (entries.rows() != entries.cols())
      throw ShapeError("HermitianOperator: matrix must be square");
    const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
    const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol::hermiticity * scale)
      throw InvariantError("HermitianOperator: matrix is not Hermitian");
    entries = ((entries + entries.adjoint()) / 2.0).eval();
  }

  Index dim() const { return entries.rows(); }
};

/// Density operator: Hermitian, PSD, trace one, with declared subsystem
/// dimensions (leftmost listed system is the leftmost tensor factor).
struct DensityOperator {
  Matrix mat;
  std::vector<Index> dims;

  DensityOperator() = default;
  DensityOperator(Matrix m, std::vector<Index> subsystem_dims)
      : mat(std::move(m)), dims(std::move(subsystem_dims)) {
    validate();
  }

  Index dim() const { return mat.rows(); }

  void validate() const {
    if (mat.rows() != mat.cols()) throw ShapeError("DensityOperator: not square");
    if (product_of(dims) != mat.rows())
      throw ShapeError("DensityOperator: subsystem dims do not multiply to matrix dim");
    const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
    if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > tol::hermiticity * scale)
      throw InvariantError("DensityOperator: not Hermitian");
    if (std::abs(mat.trace().real() - 1.0) > tol::trace_one ||
        std::abs(mat.trace().imag()) > tol::trace_one)
      throw InvariantError("DensityOperator: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol::psd_eigenvalue)
      throw InvariantError("DensityOperator: negative eigenvalue beyond tolerance");
  }
};

/// Pure state as a unit vector with declared subsystem dimensions.
struct PureState {
  Vector amplitudes;
  std::vector<Index> dims;

  PureState() = default;
  PureState(Vector v, std::vector<Index> subsystem_dims)
      : amplitudes(std::move(v)), dims(std::move(subsystem_dims)) {
    if (product_of(dims) != amplitudes.size())
      throw ShapeError("PureState: subsystem dims do not multiply to vector dim");
    if (std::abs(amplitudes.norm() - 1.0) > tol::unit_norm)
      throw InvariantError("PureState: vector is not normalized");
  }

  Index dim() const { return amplitudes.size(); }

  Matrix projector() const { return amplitudes * amplitudes.adjoint(); }

  DensityOperator density() const { return DensityOperator(projector(), dims); }
};

/// Renyi order alpha in (0,1) u (1,inf), or the alpha -> 1 limit.
/// lambda = (alpha - 1)/alpha is the reparameterization used by the
/// exponent formulas.
struct RenyiOrder {
  double alpha = 2.0;
  bool limit_at_one = false;

  static RenyiOrder of(double a) {
    if (!(a > 0.0) || a == 1.0)
      throw DomainError("RenyiOrder: alpha must be positive and != 1");
    return RenyiOrder{a, false};
  }
  static RenyiOrder limit() { return RenyiOrder{1.0, true}; }
  static RenyiOrder from_lambda(double lambda) {
    if (!(lambda < 1.0)) throw DomainError("RenyiOrder: lambda must be < 1");
    if (lambda == 0.0) return limit();
    return of(1.0 / (1.0 - lambda));
  }

  double lambda() const { return limit_at_one ? 0.0 : (alpha - 1.0) / alpha; }
};

/// Extended-real divergence value in bits. +infinity is a semantic variant
/// (the support condition fired), never a sentinel float.
struct DivergenceValue {
  enum class Support { finite, infinite_by_support };

  double bits = 0.0;
  Support condition = Support::finite;

  static DivergenceValue finite(double v) { return {v, Support::finite}; }
  static DivergenceValue infinite() {
    return {std::numeric_limits<double>::infinity(), Support::infinite_by_support};
  }

  bool is_infinite() const { return condition == Support::infinite_by_support; }
};

}  // namespace eact
