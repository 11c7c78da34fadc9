#pragma once

#include <functional>
#include <set>

#include "eact/types.hpp"

namespace eact {

/// Completely positive trace-preserving map stored as a Kraus family of
/// out_dim x in_dim matrices.
struct QuantumChannel {
  Index in_dim = 0;
  Index out_dim = 0;
  std::vector<Matrix> kraus;

  QuantumChannel() = default;
  QuantumChannel(Index din, Index dout, std::vector<Matrix> ks)
      : in_dim(din), out_dim(dout), kraus(std::move(ks)) {
    validate();
  }

  Matrix apply(const Matrix& rho) const;
  Matrix choi() const;
  void validate() const;
};

/// Integer power for dimension bookkeeping; throws SizeLimitError on overflow
/// past 2^30.
Index ipow(Index base, Index exp);

struct Eigensystem {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns
};

Eigensystem hermitian_eigensystem(const HermitianOperator& h);
Eigensystem hermitian_eigensystem(const Matrix& h);

/// V f(diag) V^dagger. With support_only set, eigenvalues at relative
/// magnitude <= 1e-10 map to 0 and f is not evaluated there. Eigenvalues in
/// [-1e-10, 0) are clipped to 0 first. Throws DomainError if f produces a
/// non-finite value on the spectrum.
Matrix spectral_apply(const Matrix& psd, const std::function<double(double)>& f,
                      bool support_only = false);

Matrix matrix_pow(const Matrix& psd, double exponent, bool support_only = false);
Matrix matrix_sqrt(const Matrix& psd);
Matrix matrix_log2(const Matrix& psd, bool support_only = false);
Matrix matrix_exp2(const Matrix& hermitian);

Matrix tensor_product(const Matrix& x, const Matrix& y);
Vector tensor_product(const Vector& x, const Vector& y);
DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

/// Traces out every subsystem not listed in `keep`; kept systems stay in
/// their original relative order.
DensityOperator partial_trace(const DensityOperator& rho, const std::set<int>& keep);
Matrix partial_trace(const Matrix& m, const std::vector<Index>& dims,
                     const std::set<int>& keep);

/// Reorders tensor factors: factor `perm[i]` of the input becomes factor i
/// of the output.
Vector permute_subsystems(const Vector& v, const std::vector<Index>& dims,
                          const std::vector<int>& perm);
Matrix permute_subsystems(const Matrix& m, const std::vector<Index>& dims,
                          const std::vector<int>& perm);

/// Applies the channel to `count` adjacent subsystems starting at `first`;
/// their product dimension must equal the channel input dimension. The block
/// is replaced by a single subsystem of the output dimension.
DensityOperator apply_channel(const QuantumChannel& n, const DensityOperator& rho,
                              int first, int count = 1);

/// psi(rho) = (1 x sqrt(rho)) |A| Psi (1 x sqrt(rho)), normalized: the pure
/// bipartite state on A x A' whose reduced state on A' is rho.
PureState canonical_input_state(const DensityOperator& rho);

PureState maximally_entangled(Index d);

/// Pinching map associated with sigma: sum_i P_i X P_i over the spectral
/// projections of sigma. Eigenvalues are grouped at relative tolerance 1e-8.
Matrix pinching(const Matrix& sigma, const Matrix& x);
int distinct_eigenvalue_count(const Matrix& sigma);

/// Spectral projections of sigma after eigenvalue clustering.
std::vector<Matrix> spectral_projections(const Matrix& sigma);

QuantumChannel identity_channel(Index d);
QuantumChannel channel_tensor(const QuantumChannel& a, const QuantumChannel& b);
QuantumChannel channel_tensor_power(const QuantumChannel& n, int m);
QuantumChannel channel_compose(const QuantumChannel& second, const QuantumChannel& first);

/// Support projector: eigenvalues > 1e-10 * lambda_max.
Matrix support_projector(const Matrix& psd);
/// supp(rho) subseteq supp(sigma), tested as |(I - Pi_sigma) rho (I - Pi_sigma)| <= 1e-9.
bool support_contained(const Matrix& rho, const Matrix& sigma);
/// supp(rho) orthogonal to supp(sigma), tested as tr(rho Pi_sigma) <= 1e-9.
bool supports_orthogonal(const Matrix& rho, const Matrix& sigma);

}  // namespace eact
