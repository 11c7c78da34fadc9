#include "eact/symmetry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace eact {

namespace {

void enumerate_types_rec(Index n, Index slots, TypeVector& cur,
                         std::vector<TypeVector>& out) {
  if (slots == 1) {
    cur.push_back(n);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (Index k = n; k >= 0; --k) {
    cur.push_back(k);
    enumerate_types_rec(n - k, slots - 1, cur, out);
    cur.pop_back();
  }
}

// Cycle type of a permutation, as a sorted vector of cycle lengths.
std::vector<Index> cycle_type(const std::vector<Index>& perm) {
  const Index n = static_cast<Index>(perm.size());
  std::vector<bool> seen(n, false);
  std::vector<Index> lens;
  for (Index i = 0; i < n; ++i) {
    if (seen[i]) continue;
    Index len = 0;
    Index j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = perm[j];
      ++len;
    }
    lens.push_back(len);
  }
  std::sort(lens.begin(), lens.end());
  return lens;
}

}  // namespace

std::vector<TypeVector> enumerate_types(Index n, Index d) {
  if (n < 0 || d < 1) throw ShapeError("enumerate_types: need n >= 0, d >= 1");
  std::vector<TypeVector> out;
  TypeVector cur;
  enumerate_types_rec(n, d, cur, out);
  return out;
}

double type_class_size(const TypeVector& t) {
  const Index n = std::accumulate(t.begin(), t.end(), Index{0});
  double lg = std::lgamma(static_cast<double>(n) + 1);
  for (Index k : t) {
    if (k < 0) throw ShapeError("type_class_size: negative count");
    lg -= std::lgamma(static_cast<double>(k) + 1);
  }
  return std::round(std::exp(lg));
}

std::vector<TypeComponent> type_decomposition(const PureState& psi, Index n) {
  if (psi.dims.size() != 2 || psi.dims[0] != psi.dims[1])
    throw ShapeError("type_decomposition: need a bipartite state with equal parts");
  const Index d = psi.dims[0];
  const Index dn = ipow(d, n);
  if (dn * dn > 4096 * 4096)
    throw SizeLimitError("type_decomposition: d^{2n} too large");

  // Schmidt decomposition: amplitudes reshaped to d x d, psi = sum sqrt(p_x) e_x f_x.
  Matrix m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = psi.amplitudes[i * d + j];
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  const Matrix e = svd.matrixU();
  const Matrix f = svd.matrixV().conjugate();

  std::vector<TypeComponent> comps;
  for (const TypeVector& t : enumerate_types(n, d)) {
    double logq = std::log(type_class_size(t));
    bool zero = false;
    for (Index x = 0; x < d; ++x) {
      if (t[x] == 0) continue;
      if (sv[x] <= 0) {
        zero = true;
        break;
      }
      logq += 2.0 * t[x] * std::log(sv[x]);
    }
    const double q = zero ? 0.0 : std::exp(logq);
    TypeComponent c;
    c.type = t;
    c.weight = q;
    if (q > 0) {
      // equal-weight superposition of |e_s> (x) |f_s> over strings s of type t
      const double norm = 1.0 / std::sqrt(type_class_size(t));
      Vector v = Vector::Zero(dn * dn);
      std::vector<Index> s(n, 0);
      for (Index idx = 0; idx < dn; ++idx) {
        Index rem = idx;
        TypeVector counts(d, 0);
        for (Index i = n - 1; i >= 0; --i) {
          s[i] = rem % d;
          rem /= d;
          ++counts[s[i]];
        }
        if (counts != t) continue;
        Vector es = Vector::Ones(1);
        Vector fs = Vector::Ones(1);
        for (Index i = 0; i < n; ++i) {
          es = tensor_product(es, Vector(e.col(s[i])));
          fs = tensor_product(fs, Vector(f.col(s[i])));
        }
        v += norm * tensor_product(es, fs);
      }
      c.state = PureState(v, {dn, dn});
    }
    comps.push_back(std::move(c));
  }
  return comps;
}

Matrix permutation_unitary(const std::vector<Index>& perm, Index d) {
  const Index n = static_cast<Index>(perm.size());
  std::vector<bool> hit(n, false);
  for (Index p : perm) {
    if (p < 0 || p >= n || hit[p]) throw ShapeError("permutation_unitary: invalid permutation");
    hit[p] = true;
  }
  const Index dim = ipow(d, n);
  Matrix u = Matrix::Zero(dim, dim);
  std::vector<Index> x(n);
  for (Index col = 0; col < dim; ++col) {
    Index rem = col;
    for (Index i = n - 1; i >= 0; --i) {
      x[i] = rem % d;
      rem /= d;
    }
    Index row = 0;
    std::vector<Index> y(n);
    for (Index i = 0; i < n; ++i) y[perm[i]] = x[i];
    for (Index i = 0; i < n; ++i) row = row * d + y[i];
    u(row, col) = 1;
  }
  return u;
}

UniversalSymmetricState universal_symmetric_state(Index n, Index d) {
  if (n < 1 || n > 8) throw SizeLimitError("universal_symmetric_state: need 1 <= n <= 8");
  const Index dim = ipow(d, n);
  if (dim > 4096) throw SizeLimitError("universal_symmetric_state: d^n too large");

  // Conjugacy-class sums of S_n acting on (C^d)^(x)n.
  std::map<std::vector<Index>, Matrix> class_sums;
  std::map<std::vector<Index>, double> class_sizes;
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  do {
    const auto ct = cycle_type(perm);
    auto it = class_sums.find(ct);
    if (it == class_sums.end()) {
      class_sums.emplace(ct, permutation_unitary(perm, d));
      class_sizes[ct] = 1;
    } else {
      it->second += permutation_unitary(perm, d);
      class_sizes[ct] += 1;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Random linear combination of class sums separates the isotypic components:
  // each acts as a scalar on every component, generically distinct scalars.
  std::mt19937_64 rng(0x5eedu + 1315423911ULL * static_cast<unsigned long long>(n * 64 + d));
  std::uniform_real_distribution<double> unif(1.0, 2.0);
  Matrix z = Matrix::Zero(dim, dim);
  for (auto& [ct, c] : class_sums) z += unif(rng) * c;

  const auto projections = spectral_projections(z);
  const Index count = static_cast<Index>(projections.size());

  double n_fact = std::tgamma(static_cast<double>(n) + 1);
  Matrix sigma = Matrix::Zero(dim, dim);
  double vmax = 0;
  for (const Matrix& p : projections) {
    const double trp = p.trace().real();
    sigma += p / (count * trp);
    // multiplicity of the S_n irrep on this component, via character orthogonality
    double s = 0;
    for (auto& [ct, c] : class_sums)
      s += std::norm((p * c).trace()) / class_sizes[ct];
    const double mult = std::sqrt(s / n_fact);
    vmax = std::max(vmax, mult);
  }
  UniversalSymmetricState out;
  out.state = DensityOperator(sigma, std::vector<Index>(n, d));
  out.v = count * std::round(vmax);
  out.component_count = count;
  return out;
}

QuantumChannel pinched_channel(const QuantumChannel& channel, Index n) {
  const QuantumChannel power = channel_tensor_power(channel, n);
  const auto u = universal_symmetric_state(n, channel.out_dim);
  const auto projections = spectral_projections(u.state.mat);
  std::vector<Matrix> kraus;
  kraus.reserve(projections.size() * power.kraus.size());
  for (const Matrix& p : projections)
    for (const Matrix& k : power.kraus) kraus.push_back(p * k);
  return QuantumChannel(power.in_dim, power.out_dim, std::move(kraus));
}

}  // namespace eact
