#include "doctest.h"

#include <cmath>

#include "eact/operator_core.hpp"
#include "eact/random.hpp"

using namespace eact;

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

DensityOperator qubit_diag(double p) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = p;
  m(1, 1) = 1 - p;
  return DensityOperator(m, {2});
}

QuantumChannel depolarizing(double p) {
  // N(rho) = (1-p) rho + p I/2
  const Matrix i2 = Matrix::Identity(2, 2);
  Matrix x = pauli_x();
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  const Matrix y = Complex(0, 1) * x * z;
  std::vector<Matrix> ks = {std::sqrt(1 - 3 * p / 4) * i2, std::sqrt(p / 4) * x,
                            std::sqrt(p / 4) * (-y), std::sqrt(p / 4) * z};
  return QuantumChannel(2, 2, std::move(ks));
}

}  // namespace

TEST_CASE("eigensystem on diagonal and Pauli X") {
  Matrix d(2, 2);
  d << 2, 0, 0, 1;
  auto es = hermitian_eigensystem(d);
  CHECK(es.values[0] == doctest::Approx(1.0));
  CHECK(es.values[1] == doctest::Approx(2.0));

  auto ex = hermitian_eigensystem(pauli_x());
  CHECK(ex.values[0] == doctest::Approx(-1.0));
  CHECK(ex.values[1] == doctest::Approx(1.0));
  // eigenvectors (|0> -+ |1>)/sqrt(2) up to phase
  CHECK(std::abs(ex.vectors(0, 0)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(ex.vectors(1, 1)) == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("eigensystem reconstruction residual, random dims up to 64") {
  Rng rng(7);
  for (Index d : {4, 16, 64}) {
    const Matrix h = random_hermitian(rng, d);
    auto es = hermitian_eigensystem(h);
    const Matrix rec =
        es.vectors * es.values.asDiagonal().toDenseMatrix().cast<Complex>() *
        es.vectors.adjoint();
    CHECK((rec - h).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((es.vectors.adjoint() * es.vectors - Matrix::Identity(d, d))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }
}

TEST_CASE("eigensystem rejects non-Hermitian input") {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(hermitian_eigensystem(m), InvariantError);
}

TEST_CASE("spectral_apply examples") {
  Matrix d(2, 2);
  d << 4, 0, 0, 9;
  const Matrix r = spectral_apply(d, [](double x) { return std::sqrt(x); });
  CHECK(r(0, 0).real() == doctest::Approx(2.0));
  CHECK(r(1, 1).real() == doctest::Approx(3.0));

  Matrix half = 0.5 * Matrix::Identity(2, 2);
  const Matrix lg = matrix_log2(half, true);
  CHECK(lg(0, 0).real() == doctest::Approx(-1.0));

  // f = x^{(1-a)/(2a)}, a = 2 on I/4 -> 4^{1/4} I
  const Matrix quarter = 0.25 * Matrix::Identity(4, 4);
  const Matrix p = matrix_pow(quarter, (1.0 - 2.0) / (2.0 * 2.0));
  CHECK(p(0, 0).real() == doctest::Approx(std::pow(4.0, 0.25)));

  CHECK_THROWS_AS(matrix_log2(Matrix::Zero(2, 2)), DomainError);
}

TEST_CASE("tensor product and partial trace identities") {
  const PureState phi = maximally_entangled(2);
  const DensityOperator rho_a = partial_trace(phi.density(), {0});
  CHECK((rho_a.mat - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  Rng rng(3);
  const DensityOperator r(random_density_matrix(rng, 2), {2});
  const DensityOperator s(random_density_matrix(rng, 2), {2});
  const DensityOperator rs = tensor_product(r, s);
  CHECK((partial_trace(rs, {0}).mat - r.mat).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((partial_trace(rs, {1}).mat - s.mat).cwiseAbs().maxCoeff() < 1e-12);

  const DensityOperator half(0.5 * Matrix::Identity(2, 2), {2});
  const DensityOperator quarter = tensor_product(half, half);
  CHECK((quarter.mat - 0.25 * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(partial_trace(rs, {}), ShapeError);
}

TEST_CASE("apply_channel: identity, depolarizing, Werner from half of Phi") {
  Rng rng(11);
  const DensityOperator rho(random_density_matrix(rng, 2), {2});
  const DensityOperator out = apply_channel(identity_channel(2), rho, 0);
  CHECK((out.mat - rho.mat).cwiseAbs().maxCoeff() < 1e-12);

  // fully depolarizing: p = 1
  Matrix zero = Matrix::Zero(2, 2);
  zero(0, 0) = 1;
  const DensityOperator z(zero, {2});
  const DensityOperator mixed = apply_channel(depolarizing(1.0), z, 0);
  CHECK((mixed.mat - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);

  // depolarizing p = 0.1 on half of Phi vs direct Kraus-sum oracle
  const QuantumChannel n = depolarizing(0.1);
  const DensityOperator phi = maximally_entangled(2).density();
  const DensityOperator werner = apply_channel(n, phi, 1);
  Matrix oracle = Matrix::Zero(4, 4);
  for (const Matrix& k : n.kraus) {
    const Matrix lift = tensor_product(Matrix::Identity(2, 2), k);
    oracle += lift * phi.mat * lift.adjoint();
  }
  CHECK((werner.mat - oracle).cwiseAbs().maxCoeff() < 1e-12);
  // 0.925 on Phi, 0.025 elsewhere
  const Matrix proj = phi.mat;
  CHECK((werner.mat * proj).trace().real() == doctest::Approx(0.925));

  CHECK(werner.mat.trace().real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(apply_channel(QuantumChannel(3, 3, {Matrix::Identity(3, 3)}), rho, 0),
                  ShapeError);
}

TEST_CASE("channel invariants rejected when violated") {
  std::vector<Matrix> bad = {0.5 * Matrix::Identity(2, 2)};
  CHECK_THROWS_AS(QuantumChannel(2, 2, bad), InvariantError);
}

TEST_CASE("canonical_input_state") {
  const DensityOperator mixed(0.5 * Matrix::Identity(2, 2), {2});
  const PureState psi = canonical_input_state(mixed);
  CHECK((psi.amplitudes - maximally_entangled(2).amplitudes).cwiseAbs().maxCoeff() <
        1e-12);

  Matrix pure0 = Matrix::Zero(2, 2);
  pure0(0, 0) = 1;
  const PureState s0 = canonical_input_state(DensityOperator(pure0, {2}));
  CHECK(std::abs(s0.amplitudes[0]) == doctest::Approx(1.0));

  const PureState s = canonical_input_state(qubit_diag(0.75));
  // Schmidt coefficients sqrt(3/4), sqrt(1/4)
  CHECK(std::abs(s.amplitudes[0]) == doctest::Approx(std::sqrt(0.75)));
  CHECK(std::abs(s.amplitudes[3]) == doctest::Approx(std::sqrt(0.25)));
  // reduced state on A' equals rho
  const DensityOperator red = partial_trace(s.density(), {1});
  CHECK((red.mat - qubit_diag(0.75).mat).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pinching and distinct eigenvalue count") {
  const Matrix x = pauli_x();
  CHECK((pinching(Matrix::Identity(2, 2), x) - x).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(distinct_eigenvalue_count(Matrix::Identity(2, 2)) == 1);

  Matrix s(2, 2);
  s << 1, 0, 0, 2;
  CHECK(pinching(s, x).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(distinct_eigenvalue_count(s) == 2);

  Matrix s3 = Matrix::Zero(3, 3);
  s3.diagonal() << 0.5, 0.5, 0.25;
  CHECK(distinct_eigenvalue_count(s3) == 2);
}

TEST_CASE("pinching inequality X <= v(sigma) P_sigma(X) on random PSD") {
  Rng rng(23);
  for (int it = 0; it < 40; ++it) {
    const Index d = 2 + static_cast<Index>(it % 7);
    const Matrix sigma = random_density_matrix(rng, d);
    Matrix g = random_ginibre(rng, d, d);
    const Matrix x = g * g.adjoint();
    const double v = distinct_eigenvalue_count(sigma);
    const Matrix gap = v * pinching(sigma, x) - x;
    auto es = hermitian_eigensystem(gap);
    CHECK(es.values.minCoeff() >= -1e-9);
    // trace preserved and commutes with sigma
    const Matrix p = pinching(sigma, x);
    CHECK(std::abs((p - x).trace().real()) < 1e-9);
    CHECK((p * sigma - sigma * p).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("apply_channel preserves trace and PSD on random channels") {
  Rng rng(5);
  for (int it = 0; it < 20; ++it) {
    const QuantumChannel n = random_channel(rng, 3, 2, 3);
    const DensityOperator rho(random_density_matrix(rng, 3), {3});
    const DensityOperator out = apply_channel(n, rho, 0);
    CHECK(std::abs(out.mat.trace().real() - 1.0) < 1e-10);
    auto es = hermitian_eigensystem(out.mat);
    CHECK(es.values.minCoeff() >= -1e-10);
  }
}

TEST_CASE("permute_subsystems reorders tensor factors") {
  Rng rng(9);
  const Vector a = random_pure_vector(rng, 2);
  const Vector b = random_pure_vector(rng, 3);
  const Vector ab = tensor_product(a, b);
  const Vector ba = permute_subsystems(ab, {2, 3}, {1, 0});
  CHECK((ba - tensor_product(b, a)).cwiseAbs().maxCoeff() < 1e-12);
}
