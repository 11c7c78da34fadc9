#include "eact/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eact/divergence.hpp"
#include "eact/operator_core.hpp"
#include "eact/optimize.hpp"
#include "eact/random.hpp"
#include "eact/symmetry.hpp"

namespace eact {

namespace {

void record(SuiteCheck& c, double margin, double slack) {
  ++c.instances;
  if (c.instances == 1 || margin < c.worst_margin) c.worst_margin = margin;
  if (margin < -slack) ++c.failures;
}

double finite_bits(const DivergenceValue& v) {
  return v.is_infinite() ? std::numeric_limits<double>::infinity() : v.bits;
}

double classical_renyi_bits(const RealVector& p, const RealVector& q, double a) {
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) s += std::pow(p[i], a) * std::pow(q[i], 1.0 - a);
  return std::log2(s) / (a - 1.0);
}

// tr x log2 y with zero eigenvalues of x contributing nothing; y full rank.
double trace_log2(const Matrix& x, const Matrix& y) {
  const Matrix ly = spectral_apply(y, [](double v) { return std::log2(v); }, true);
  return (x * ly).trace().real();
}

double entropy_term(const Matrix& x) {
  auto es = hermitian_eigensystem(x);
  double s = 0.0;
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values[i] > 1e-300) s += es.values[i] * std::log2(es.values[i]);
  return s;  // tr x log2 x
}

Matrix degenerate_spectrum_operator(Rng& rng, const std::vector<Index>& mults) {
  Index d = 0;
  for (Index m : mults) d += m;
  const Matrix g = random_ginibre(rng, d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix u = qr.householderQ() * Matrix::Identity(d, d);
  std::uniform_real_distribution<double> lam(0.2, 2.0);
  RealVector vals(d);
  Index at = 0;
  for (Index m : mults) {
    const double v = lam(rng);
    for (Index i = 0; i < m; ++i) vals[at++] = v;
  }
  return u * vals.cast<Complex>().asDiagonal() * u.adjoint();
}

SuiteReport suite_commuting(unsigned seed) {
  SuiteReport rep{"commuting", seed, {}};
  SuiteCheck collapse{"sandwiched = log-Euclidean = classical on diagonal pairs", 0, 0, 0.0};
  Rng rng(seed);
  const double alphas[] = {0.6, 2.0, 3.0};
  for (int k = 0; k < 50; ++k) {
    const Index d = 3 + Index(k % 2);
    const RealVector p = random_probability_vector(rng, d);
    const RealVector q = random_probability_vector(rng, d);
    const Matrix rho = p.cast<Complex>().asDiagonal();
    const Matrix sig = q.cast<Complex>().asDiagonal();
    for (double a : alphas) {
      const double oracle = classical_renyi_bits(p, q, a);
      const double ds = finite_bits(sandwiched_divergence(rho, sig, RenyiOrder::of(a)));
      const double db = finite_bits(log_euclidean_divergence(rho, sig, RenyiOrder::of(a)));
      const double err = std::max(std::abs(ds - oracle), std::abs(db - oracle));
      record(collapse, -err, 1e-8);
    }
  }
  rep.checks.push_back(collapse);
  return rep;
}

double variational_functional(const Matrix& tau, const Matrix& rho,
                              const Matrix& sig, double a) {
  const double c = a / (a - 1.0);
  return (1.0 - c) * entropy_term(tau) - trace_log2(tau, sig) +
         c * trace_log2(tau, rho);
}

// Stationary state of the variational functional:
// tau* ~ 2^(alpha log2 rho - (alpha - 1) log2 sigma), normalized.
Matrix variational_optimizer(const Matrix& rho, const Matrix& sig, double a) {
  const auto lg = [](double v) { return std::log2(v); };
  const Matrix w =
      a * spectral_apply(rho, lg, true) - (a - 1.0) * spectral_apply(sig, lg, true);
  auto es = hermitian_eigensystem(w);
  RealVector p(es.values.size());
  const double top = es.values.maxCoeff();
  for (Index i = 0; i < p.size(); ++i) p[i] = std::exp2(es.values[i] - top);
  p /= p.sum();
  return es.vectors * p.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

SuiteReport suite_prop1(unsigned seed) {
  SuiteReport rep{"prop1", seed, {}};
  SuiteCheck mono_alpha{"(i) monotone in the Renyi parameter", 0, 0, 0.0};
  SuiteCheck mono_sigma{"(ii) antitone in sigma", 0, 0, 0.0};
  SuiteCheck variational{"(iii) variational form matches the log-Euclidean value", 0, 0, 0.0};
  SuiteCheck additivity{"(iv) sandwiched mutual information additive on products", 0, 0, 0.0};
  SuiteCheck convexity{"(v) convex in sigma", 0, 0, 0.0};
  SuiteCheck pinch_approx{"(vi) pinching approximation bracket", 0, 0, 0.0};

  Rng rng(seed);
  std::uniform_real_distribution<double> tdist(0.05, 0.95);
  for (int k = 0; k < 100; ++k) {
    const Index d = 2 + Index(k % 3);  // dims 2..4
    const Matrix rho = random_density_matrix(rng, d);
    const Matrix sig = random_density_matrix(rng, d);

    // (i) over an increasing alpha grid, both divergences
    const double grid[] = {0.4, 0.8, 1.3, 2.0, 4.0};
    double prev_s = -1e300, prev_b = -1e300;
    for (double a : grid) {
      const double ds = finite_bits(sandwiched_divergence(rho, sig, RenyiOrder::of(a)));
      const double db = finite_bits(log_euclidean_divergence(rho, sig, RenyiOrder::of(a)));
      record(mono_alpha, std::min(ds - prev_s, db - prev_b), 1e-9);
      prev_s = ds;
      prev_b = db;
    }

    // (ii) sigma' = sigma + PSD bump
    {
      const Matrix g = random_ginibre(rng, d, d);
      const Matrix bump = 0.2 * (g * g.adjoint()) / double(d);
      const Matrix sig2 = sig + bump;
      for (double a : {0.7, 2.0, 3.0}) {
        const double before_s = finite_bits(sandwiched_divergence(rho, sig, RenyiOrder::of(a)));
        const double after_s = finite_bits(sandwiched_divergence(rho, sig2, RenyiOrder::of(a)));
        const double before_b = finite_bits(log_euclidean_divergence(rho, sig, RenyiOrder::of(a)));
        const double after_b = finite_bits(log_euclidean_divergence(rho, sig2, RenyiOrder::of(a)));
        record(mono_sigma, std::min(before_s - after_s, before_b - after_b), 1e-9);
      }
    }

    // (v) convexity in sigma on random triples
    {
      const Matrix sig2 = random_density_matrix(rng, d);
      const double t = tdist(rng);
      const Matrix mix = t * sig + (1.0 - t) * sig2;
      for (double a : {0.7, 2.0}) {
        const RenyiOrder ord = RenyiOrder::of(a);
        const double lhs_s = finite_bits(sandwiched_divergence(rho, mix, ord));
        const double rhs_s = t * finite_bits(sandwiched_divergence(rho, sig, ord)) +
                             (1.0 - t) * finite_bits(sandwiched_divergence(rho, sig2, ord));
        const double lhs_b = finite_bits(log_euclidean_divergence(rho, mix, ord));
        const double rhs_b = t * finite_bits(log_euclidean_divergence(rho, sig, ord)) +
                             (1.0 - t) * finite_bits(log_euclidean_divergence(rho, sig2, ord));
        record(convexity, std::min(rhs_s - lhs_s, rhs_b - lhs_b), 1e-9);
      }
    }

    // (vi) pinching bracket with a genuinely degenerate sigma
    {
      std::vector<Index> mults;
      if (d == 2)
        mults = {2};
      else if (d == 3)
        mults = {2, 1};
      else
        mults = {2, 2};
      Matrix sdeg = degenerate_spectrum_operator(rng, mults);
      sdeg /= sdeg.trace().real();
      const Matrix pinched = pinching(sdeg, rho);
      const double v = double(distinct_eigenvalue_count(sdeg));
      for (double a : {0.7, 2.0, 3.0}) {
        const RenyiOrder ord = RenyiOrder::of(a);
        const double mid = finite_bits(sandwiched_divergence(rho, sdeg, ord));
        const double lo = finite_bits(sandwiched_divergence(pinched, sdeg, ord));
        record(pinch_approx, std::min(mid - lo, lo + 2.0 * std::log2(v) - mid), 1e-9);
      }
    }

    // (iv) additivity on 2x2-system pairs (a subset; each needs three solves)
    if (k < 20) {
      Rng r2(seed + 977u * unsigned(k));
      const Matrix a1 = random_density_matrix(r2, 4);
      const Matrix a2 = random_density_matrix(r2, 4);
      const DensityOperator r_ab(a1, {2, 2});
      const DensityOperator s_ab(a2, {2, 2});
      const DensityOperator prod = tensor_product(r_ab, s_ab);  // A B A' B'
      const Matrix joint = permute_subsystems(prod.mat, prod.dims, {0, 2, 1, 3});
      const DensityOperator big(joint, {4, 4});
      for (double a : {1.5, 2.5}) {
        const RenyiOrder ord = RenyiOrder::of(a);
        const double lhs = sandwiched_mutual_info(big, ord).value;
        const double rhs = sandwiched_mutual_info(r_ab, ord).value +
                           sandwiched_mutual_info(s_ab, ord).value;
        record(additivity, -std::abs(lhs - rhs), 1e-6);
      }
    }
  }

  // (iii) 20 full-rank instances, dim 3: the stationary state must attain the
  // log-Euclidean value exactly, and random states must respect the bound
  // direction (max for alpha > 1, min for alpha < 1)
  for (int k = 0; k < 20; ++k) {
    Rng r3(seed + 31337u + unsigned(k));
    const Matrix rho = random_density_matrix(r3, 3);
    const Matrix sig = random_density_matrix(r3, 3);
    for (double a : {0.7, 1.8}) {
      const double direct = finite_bits(log_euclidean_divergence(rho, sig, RenyiOrder::of(a)));
      const double at_star =
          variational_functional(variational_optimizer(rho, sig, a), rho, sig, a);
      record(variational, -std::abs(direct - at_star), 1e-7);
      const double sgn = a > 1.0 ? 1.0 : -1.0;
      for (int j = 0; j < 3; ++j) {
        const Matrix tau = random_density_matrix(r3, 3);
        record(variational, sgn * (direct - variational_functional(tau, rho, sig, a)),
               1e-8);
      }
    }
  }

  rep.checks = {mono_alpha, mono_sigma, variational, additivity, convexity, pinch_approx};
  return rep;
}

SuiteReport suite_pinching(unsigned seed) {
  SuiteReport rep{"pinching", seed, {}};
  SuiteCheck eq14{"v * pinched(X) dominates X", 0, 0, 0.0};
  SuiteCheck lemma{"generalized pinching divergence bound", 0, 0, 0.0};
  Rng rng(seed);
  for (int k = 0; k < 100; ++k) {
    std::vector<Index> mults;
    switch (k % 4) {
      case 0: mults = {2, 2}; break;
      case 1: mults = {3, 2, 1}; break;
      case 2: mults = {4, 2, 2}; break;
      default: mults = {3, 3, 2}; break;
    }
    Index d = 0;
    for (Index m : mults) d += m;
    const Matrix sdeg = degenerate_spectrum_operator(rng, mults);
    const Matrix g = random_ginibre(rng, d, d);
    const Matrix x = g * g.adjoint() / double(d);

    const double v = double(distinct_eigenvalue_count(sdeg));
    const Matrix dominated = v * pinching(sdeg, x) - x;
    record(eq14, hermitian_eigensystem(dominated).values.minCoeff(), 1e-9);

    // projections splitting each eigenspace of sigma into 1-dim pieces
    auto es = hermitian_eigensystem(sdeg);
    std::vector<Matrix> projs;
    for (Index i = 0; i < d; ++i) {
      const Vector col = es.vectors.col(i);
      projs.push_back(col * col.adjoint());
    }
    const double m_count = double(projs.size());
    const Matrix rho = random_density_matrix(rng, d);
    Matrix pinched = Matrix::Zero(d, d);
    for (const Matrix& p : projs) pinched += p * rho * p;
    for (double a : {0.5, 1.5, 2.0, 3.0, 5.0}) {
      const double f = (a <= 2.0) ? std::log2(m_count) : 2.0 * std::log2(m_count);
      const RenyiOrder ord = RenyiOrder::of(a);
      const double lhs = finite_bits(sandwiched_divergence(rho, sdeg, ord));
      const double rhs = finite_bits(sandwiched_divergence(pinched, sdeg, ord)) + f;
      record(lemma, rhs - lhs, 1e-9);
    }
  }
  rep.checks = {eq14, lemma};
  return rep;
}

SuiteReport suite_lemma1(unsigned seed) {
  SuiteReport rep{"lemma1", seed, {}};
  SuiteCheck dominance{"universal state dominates random symmetric states", 0, 0, 0.0};
  SuiteCheck vbound{"multiplicity bound v <= (n+1)^2", 0, 0, 0.0};
  Rng rng(seed);
  for (Index n : {2, 3, 4}) {
    const auto uni = universal_symmetric_state(n, 2);
    record(vbound, double((n + 1) * (n + 1)) - double(uni.v), 0.0);
    const Index dim = ipow(2, n);
    std::vector<std::vector<Index>> perms;
    std::vector<Index> p(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) p[size_t(i)] = i;
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    const int trials = n == 4 ? 66 : 67;  // 200 total across n = 2, 3, 4
    for (int k = 0; k < trials; ++k) {
      const Matrix raw = random_density_matrix(rng, dim);
      Matrix sym = Matrix::Zero(dim, dim);
      for (const auto& perm : perms) {
        const Matrix w = permutation_unitary(perm, 2);
        sym += w * raw * w.adjoint();
      }
      sym /= double(perms.size());
      const Matrix gap = double(uni.v) * uni.state.mat - sym;
      record(dominance, hermitian_eigensystem(gap).values.minCoeff(), 1e-9);
    }
  }
  rep.checks = {dominance, vbound};
  return rep;
}

SuiteReport suite_types(unsigned seed) {
  SuiteReport rep{"types", seed, {}};
  SuiteCheck counts{"type class sizes sum to d^n", 0, 0, 0.0};
  SuiteCheck weights{"type decomposition weights sum to 1, components normalized", 0, 0, 0.0};
  Rng rng(seed);
  for (Index n : {2, 3, 4}) {
    for (Index d : {2, 3}) {
      const auto types = enumerate_types(n, d);
      double total = 0.0;
      for (const auto& t : types) total += type_class_size(t);
      record(counts, -std::abs(total - double(ipow(d, n))), 1e-6);
    }
  }
  for (int k = 0; k < 10; ++k) {
    const Index d = 2 + Index(k % 2);
    const Vector amp = random_pure_vector(rng, d * d);
    const PureState psi{amp, {d, d}};
    const Index n = 3;
    const auto comps = type_decomposition(psi, n);
    double wsum = 0.0;
    double worst_norm = 0.0;
    for (const auto& c : comps) {
      wsum += c.weight;
      worst_norm = std::max(worst_norm, std::abs(c.state.amplitudes.norm() - 1.0));
    }
    record(weights, -std::max(std::abs(wsum - 1.0), worst_norm), 1e-9);
  }
  rep.checks = {counts, weights};
  return rep;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"commuting", "prop1", "pinching", "lemma1", "types"};
}

SuiteReport run_suite(const std::string& name, unsigned seed) {
  if (name == "commuting") return suite_commuting(seed);
  if (name == "prop1") return suite_prop1(seed);
  if (name == "pinching") return suite_pinching(seed);
  if (name == "lemma1") return suite_lemma1(seed);
  if (name == "types") return suite_types(seed);
  throw DomainError("unknown verify suite: " + name);
}

}  // namespace eact
