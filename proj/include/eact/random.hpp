#pragma once

#include <random>

#include "eact/operator_core.hpp"

namespace eact {

using Rng = std::mt19937_64;

inline Matrix random_ginibre(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline Matrix random_hermitian(Rng& rng, Index d) {
  const Matrix g = random_ginibre(rng, d, d);
  return ((g + g.adjoint()) / 2.0).eval();
}

inline Matrix random_density_matrix(Rng& rng, Index d) {
  const Matrix g = random_ginibre(rng, d, d);
  Matrix m = g * g.adjoint();
  return (m / m.trace().real()).eval();
}

inline Vector random_pure_vector(Rng& rng, Index d) {
  Vector v = random_ginibre(rng, d, 1).col(0);
  return (v / v.norm()).eval();
}

inline RealVector random_probability_vector(Rng& rng, Index d) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  RealVector p(d);
  for (Index i = 0; i < d; ++i) p[i] = u(rng);
  return (p / p.sum()).eval();
}

/// Random CPTP map with k Kraus operators, from a Haar-ish random isometry
/// (QR of a Ginibre block).
inline QuantumChannel random_channel(Rng& rng, Index din, Index dout, Index k) {
  const Matrix g = random_ginibre(rng, dout * k, din);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dout * k, din);
  std::vector<Matrix> kraus;
  for (Index i = 0; i < k; ++i) kraus.push_back(q.middleRows(i * dout, dout));
  return QuantumChannel(din, dout, std::move(kraus));
}

}  // namespace eact
