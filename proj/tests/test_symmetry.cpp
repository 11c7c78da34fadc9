#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eact/divergence.hpp"
#include "eact/operator_core.hpp"
#include "eact/random.hpp"
#include "eact/symmetry.hpp"
#include "oracles.hpp"

using namespace eact;

namespace {

double binomial(Index n, Index k) {
  double r = 1.0;
  for (Index i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
  return r;
}

}  // namespace

TEST_CASE("type enumeration: counts and class sizes") {
  // number of types of length-n strings over alphabet d is C(n+d-1, d-1)
  for (Index n : {1, 2, 3, 5}) {
    for (Index d : {2, 3}) {
      const auto types = enumerate_types(n, d);
      CHECK(double(types.size()) == doctest::Approx(binomial(n + d - 1, d - 1)));
      double total = 0.0;
      for (const auto& t : types) {
        CHECK(std::accumulate(t.begin(), t.end(), Index(0)) == n);
        total += type_class_size(t);
      }
      // class sizes partition the d^n strings
      CHECK(total == doctest::Approx(std::pow(double(d), double(n))));
    }
  }
  CHECK(type_class_size({2, 1}) == doctest::Approx(3.0));   // aab, aba, baa
  CHECK(type_class_size({1, 1, 1}) == doctest::Approx(6.0));
}

TEST_CASE("type decomposition reassembles |psi>^n and weights follow the multinomial law") {
  Rng rng(7);
  const Index d = 2;
  Vector v(d * d);
  v.setZero();
  const double p = 0.7;
  v[0] = std::sqrt(p);       // sqrt(p)|00> + sqrt(1-p)|11>
  v[3] = std::sqrt(1.0 - p);
  const PureState psi(v, {d, d});

  for (Index n : {1, 2, 3}) {
    const auto comps = type_decomposition(psi, n);
    double wsum = 0.0;
    Vector rebuilt = Vector::Zero(ipow(d, 2 * n));
    for (const auto& c : comps) {
      wsum += c.weight;
      if (c.weight == 0.0) continue;
      CHECK(c.state.amplitudes.norm() == doctest::Approx(1.0));
      // q(t) = multinomial(t) * prod_i lambda_i^{t_i} for Schmidt coefficients lambda
      const double expected = type_class_size(c.type) *
                              std::pow(p, double(c.type[0])) *
                              std::pow(1.0 - p, double(c.type[1]));
      CHECK(c.weight == doctest::Approx(expected).epsilon(1e-10));
      rebuilt += std::sqrt(c.weight) * c.state.amplitudes;
    }
    CHECK(wsum == doctest::Approx(1.0));

    // regroup |psi>^(x)n from (A A')^n order to A^n A'^n and compare
    Vector pw = psi.amplitudes;
    for (Index k = 1; k < n; ++k) pw = tensor_product(pw, psi.amplitudes);
    std::vector<Index> dims(size_t(2 * n), d);
    std::vector<int> perm;
    for (int i = 0; i < n; ++i) perm.push_back(2 * i);      // A factors first
    for (int i = 0; i < n; ++i) perm.push_back(2 * i + 1);  // then A'
    const Vector regrouped = permute_subsystems(pw, dims, perm);
    CHECK((rebuilt - regrouped).norm() == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("permutation unitaries: identity, action on basis strings, group law") {
  const Index d = 2;
  CHECK((permutation_unitary({0, 1, 2}, d) - Matrix::Identity(8, 8)).norm() ==
        doctest::Approx(0.0));

  // moving symbols: output position j holds x_{perm^{-1}(j)}
  const std::vector<Index> perm = {1, 2, 0};
  const Matrix u = permutation_unitary(perm, d);
  Vector basis = Vector::Zero(8);
  basis[0b110] = 1.0;  // |1 1 0>
  const Vector moved = u * basis;
  Index hot = -1;
  for (Index i = 0; i < 8; ++i)
    if (std::abs(moved[i]) > 0.5) hot = i;
  CHECK(hot == 0b011);  // x = (1,1,0) -> y_j = x_{perm^-1(j)} with perm {1,2,0}

  // composition matches permutation composition on random vectors
  Rng rng(11);
  const std::vector<Index> s = {2, 0, 1};
  const Matrix us = permutation_unitary(s, d);
  std::vector<Index> comp(3);
  for (Index j = 0; j < 3; ++j) comp[j] = perm[s[j]];
  const Matrix ucomp = permutation_unitary(comp, d);
  const Vector x = random_pure_vector(rng, 8);
  const Vector lhs = u * (us * x);
  const Vector rhs = ucomp * x;
  CHECK((lhs - rhs).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("universal symmetric state: dominance, invariance, and multiplicity constant") {
  for (Index n : {2, 3, 4}) {
    const Index d = 2;
    const auto u = universal_symmetric_state(n, d);
    CHECK(u.state.mat.trace().real() == doctest::Approx(1.0));
    CHECK(u.v <= double((n + 1) * (n + 1)) + 1e-9);
    CHECK(u.v >= 1.0);

    // permutation invariance
    std::vector<Index> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), Index(0));
    std::rotate(perm.begin(), perm.begin() + 1, perm.end());
    const Matrix p = permutation_unitary(perm, d);
    CHECK((p * u.state.mat * p.adjoint() - u.state.mat).norm() ==
          doctest::Approx(0.0).epsilon(1e-10));

    // rho^(x)n <= v sigma^u for random product states
    Rng rng(23 + unsigned(n));
    for (int it = 0; it < 40; ++it) {
      const Matrix rho = random_density_matrix(rng, d);
      Matrix power = rho;
      for (Index k = 1; k < n; ++k) power = tensor_product(power, rho);
      const Matrix gap = u.v * u.state.mat - power;
      auto es = hermitian_eigensystem(gap);
      CHECK(es.values.minCoeff() >= -1e-9);
    }
  }
}

TEST_CASE("universal symmetric state: constructive constants for qubits are stable") {
  // frozen values of the constructive constant; all within the (n+1)^2 bound
  CHECK(universal_symmetric_state(2, 2).v == doctest::Approx(6.0));
  CHECK(universal_symmetric_state(3, 2).v == doctest::Approx(8.0));
  CHECK(universal_symmetric_state(4, 2).v == doctest::Approx(15.0));
}

TEST_CASE("pinched channel: covariant under permutations and trace preserving") {
  Rng rng(31);
  const QuantumChannel base = random_channel(rng, 2, 2, 2);
  const Index n = 2;
  const QuantumChannel pinched = pinched_channel(base, n);
  CHECK(pinched.in_dim == 4);
  CHECK(pinched.out_dim == 4);

  const Matrix rho = random_density_matrix(rng, 4);
  const Matrix out = pinched.apply(rho);
  CHECK(out.trace().real() == doctest::Approx(1.0));

  // the output commutes with the spectral projections of the universal state,
  // i.e. pinching the output again changes nothing
  const auto u = universal_symmetric_state(n, base.out_dim);
  const Matrix again = pinching(u.state.mat, out);
  CHECK((again - out).norm() == doctest::Approx(0.0).epsilon(1e-9));

  // swap covariance: pinched(S rho S) = S pinched(rho) S for the 2-copy swap
  const Matrix s = permutation_unitary({1, 0}, 2);
  const Matrix lhs = pinched.apply(s * rho * s.adjoint());
  const Matrix rhs = s * pinched.apply(rho) * s.adjoint();
  CHECK((lhs - rhs).norm() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("pinched channel bounds the sandwiched divergence as in the pinching lemma") {
  // D*(N(rho) || sigma^u-compatible state) changes by at most log2(components)
  Rng rng(41);
  const Index n = 2;
  const auto u = universal_symmetric_state(n, 2);
  for (int it = 0; it < 10; ++it) {
    const Matrix x = random_density_matrix(rng, 4);
    const Matrix px = pinching(u.state.mat, x);
    for (double a : {1.5, 3.0}) {
      const double direct =
          sandwiched_divergence(x, u.state.mat, RenyiOrder::of(a)).bits;
      const double pinched =
          sandwiched_divergence(px, u.state.mat, RenyiOrder::of(a)).bits;
      const double f = (a <= 2.0 ? 1.0 : 2.0) * std::log2(double(u.component_count));
      CHECK(direct <= pinched + f + 1e-9);
      CHECK(pinched <= direct + 1e-9);  // pinching is a channel fixing sigma^u
    }
  }
}
