#pragma once

#include "eact/operator_core.hpp"

namespace eact {

/// Quantum relative entropy D(rho||sigma) in bits; +infinity when
/// supp(rho) is not contained in supp(sigma).
DivergenceValue relative_entropy(const Matrix& rho, const Matrix& sigma);

/// Sandwiched Renyi divergence
///   D*_a(rho||sigma) = 1/(a-1) log2 tr (sigma^{(1-a)/2a} rho sigma^{(1-a)/2a})^a,
/// with the support conventions: +infinity when a > 1 and supp(rho) is not in
/// supp(sigma), or a < 1 and the supports are orthogonal. The limit order
/// returns the relative entropy.
DivergenceValue sandwiched_divergence(const Matrix& rho, const Matrix& sigma,
                                      RenyiOrder order);

struct LogEuclideanDiagnostics {
  bool regularized = false;    // support-restricted (singular-pair) path taken
  bool converged = true;
  std::vector<double> extrapolants;  // log-trace of the restricted block
};

/// Log-Euclidean Renyi divergence
///   Db_a(rho||sigma) = 1/(a-1) log2 tr 2^{a log2 rho + (1-a) log2 sigma}
/// for full-rank pairs; for singular pairs the epsilon-regularized limit is
/// evaluated exactly as the compression of the support-restricted logs onto
/// supp(rho) ∩ supp(sigma). +infinity when a > 1 and supp(rho) is not in
/// supp(sigma), or a < 1 and the supports are orthogonal.
DivergenceValue log_euclidean_divergence(const Matrix& rho, const Matrix& sigma,
                                         RenyiOrder order,
                                         LogEuclideanDiagnostics* diag = nullptr);

double von_neumann_entropy(const Matrix& rho);

/// I(A:B) = D(rho_AB || rho_A x rho_B) for a bipartite state.
double mutual_information(const DensityOperator& rho_ab);

/// Holevo information of an ensemble {(p_x, rho_x)}.
double holevo_information(const std::vector<std::pair<double, Matrix>>& ensemble);

/// Uhlmann fidelity ||sqrt(rho) sqrt(sigma)||_1.
double fidelity(const Matrix& rho, const Matrix& sigma);

}  // namespace eact
