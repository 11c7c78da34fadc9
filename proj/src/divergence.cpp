#include "eact/divergence.hpp"

#include <cmath>

namespace eact {

namespace {

bool effectively_full_rank(const Matrix& psd) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(psd, Eigen::EigenvaluesOnly);
  const double vmax = es.eigenvalues().maxCoeff();
  return es.eigenvalues().minCoeff() > tol::support_rank * vmax;
}

double entropy_sum(const RealVector& vals) {
  double h = 0.0;
  for (Index i = 0; i < vals.size(); ++i) {
    const double v = vals[i];
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

// log2 sum_i 2^{h_i}, overflow-safe (needed for large Renyi orders).
double log2_sum_exp2(const RealVector& h) {
  const double hmax = h.maxCoeff();
  double s = 0.0;
  for (Index i = 0; i < h.size(); ++i) s += std::exp2(h[i] - hmax);
  return hmax + std::log2(s);
}

// log2 sum_i v_i^a over the positive eigenvalues; -inf if none.
double log2_power_trace(const RealVector& vals, double a) {
  double vmax = 0.0;
  for (Index i = 0; i < vals.size(); ++i) vmax = std::max(vmax, vals[i]);
  if (vmax <= 0.0) return -std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (Index i = 0; i < vals.size(); ++i)
    if (vals[i] > 0.0) s += std::pow(vals[i] / vmax, a);
  return a * std::log2(vmax) + std::log2(s);
}

}  // namespace

double von_neumann_entropy(const Matrix& rho) {
  auto [vals, vecs] = hermitian_eigensystem(rho);
  return entropy_sum(vals);
}

DivergenceValue relative_entropy(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows()) throw ShapeError("relative_entropy: dim mismatch");
  if (!support_contained(rho, sigma)) return DivergenceValue::infinite();
  const double h = von_neumann_entropy(rho);
  const Matrix log_sigma = matrix_log2(sigma, /*support_only=*/true);
  const double cross = (rho * log_sigma).trace().real();
  return DivergenceValue::finite(-h - cross);
}

DivergenceValue sandwiched_divergence(const Matrix& rho, const Matrix& sigma,
                                      RenyiOrder order) {
  if (rho.rows() != sigma.rows())
    throw ShapeError("sandwiched_divergence: dim mismatch");
  if (order.limit_at_one) return relative_entropy(rho, sigma);
  const double a = order.alpha;
  if (a > 1.0 && !support_contained(rho, sigma)) return DivergenceValue::infinite();
  if (a < 1.0 && supports_orthogonal(rho, sigma)) return DivergenceValue::infinite();

  const Matrix half = matrix_pow(sigma, (1.0 - a) / (2.0 * a), /*support_only=*/true);
  const Matrix x = half * rho * half;
  auto [vals, vecs] = hermitian_eigensystem(x);
  const double log_tr = log2_power_trace(vals, a);
  if (!std::isfinite(log_tr)) return DivergenceValue::infinite();
  return DivergenceValue::finite(log_tr / (a - 1.0));
}

DivergenceValue log_euclidean_divergence(const Matrix& rho, const Matrix& sigma,
                                         RenyiOrder order,
                                         LogEuclideanDiagnostics* diag) {
  if (rho.rows() != sigma.rows())
    throw ShapeError("log_euclidean_divergence: dim mismatch");
  if (order.limit_at_one) return relative_entropy(rho, sigma);
  const double a = order.alpha;

  if (effectively_full_rank(rho) && effectively_full_rank(sigma)) {
    const Matrix h = a * matrix_log2(rho) + (1.0 - a) * matrix_log2(sigma);
    auto [hvals, hvecs] = hermitian_eigensystem(h);
    return DivergenceValue::finite(log2_sum_exp2(hvals) / (a - 1.0));
  }

  if (a > 1.0 && !support_contained(rho, sigma)) return DivergenceValue::infinite();
  if (a < 1.0 && supports_orthogonal(rho, sigma)) return DivergenceValue::infinite();

  // Singular pair: as eps -> 0 the eigenvectors of
  //   a log2(rho + eps) + (1 - a) log2(sigma + eps)
  // decouple into the span of the null spaces, whose eigenvalues run to
  // -infinity and contribute nothing to the trace, and the complement
  // supp(rho) ∩ supp(sigma), where the operator converges to the compression
  // of the support-restricted logs. Evaluate that block directly.
  const Matrix psum = support_projector(rho) + support_projector(sigma);
  auto [pvals, pvecs] = hermitian_eigensystem(psum);
  Index keep = 0;
  for (Index i = 0; i < pvals.size(); ++i)
    if (pvals[i] > 2.0 - 1e-7) ++keep;
  if (keep == 0) return DivergenceValue::infinite();
  Matrix w(rho.rows(), keep);
  Index at = 0;
  for (Index i = 0; i < pvals.size(); ++i)
    if (pvals[i] > 2.0 - 1e-7) w.col(at++) = pvecs.col(i);
  const Matrix h = a * (w.adjoint() * matrix_log2(rho, true) * w) +
                   (1.0 - a) * (w.adjoint() * matrix_log2(sigma, true) * w);
  auto [hvals, hvecs] = hermitian_eigensystem(h);
  const double log_tr = log2_sum_exp2(hvals);
  if (diag) {
    diag->regularized = true;
    diag->converged = true;
    diag->extrapolants = {log_tr};
  }
  return DivergenceValue::finite(log_tr / (a - 1.0));
}

double mutual_information(const DensityOperator& rho_ab) {
  if (rho_ab.dims.size() != 2)
    throw ShapeError("mutual_information: state must declare two subsystems");
  const DensityOperator rho_a = partial_trace(rho_ab, {0});
  const DensityOperator rho_b = partial_trace(rho_ab, {1});
  const Matrix prod = tensor_product(rho_a.mat, rho_b.mat);
  const DivergenceValue d = relative_entropy(rho_ab.mat, prod);
  return d.bits;
}

double holevo_information(const std::vector<std::pair<double, Matrix>>& ensemble) {
  if (ensemble.empty()) throw ShapeError("holevo_information: empty ensemble");
  double psum = 0.0;
  for (const auto& [p, rho] : ensemble) {
    if (p < 0.0) throw InvariantError("holevo_information: negative probability");
    psum += p;
  }
  if (std::abs(psum - 1.0) > tol::trace_one)
    throw InvariantError("holevo_information: probabilities do not sum to 1");
  Matrix avg = Matrix::Zero(ensemble[0].second.rows(), ensemble[0].second.cols());
  for (const auto& [p, rho] : ensemble) avg += p * rho;
  double chi = 0.0;
  for (const auto& [p, rho] : ensemble)
    if (p > 0.0) chi += p * relative_entropy(rho, avg).bits;
  return chi;
}

double fidelity(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows()) throw ShapeError("fidelity: dim mismatch");
  const Matrix root = matrix_sqrt(rho);
  const Matrix inner = root * sigma * root;
  auto [vals, vecs] = hermitian_eigensystem(inner);
  double f = 0.0;
  for (Index i = 0; i < vals.size(); ++i)
    if (vals[i] > 0.0) f += std::sqrt(vals[i]);
  return std::min(f, 1.0 + 1e-12);
}

}  // namespace eact
