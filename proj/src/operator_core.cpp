#include "eact/operator_core.hpp"

#include <cmath>

namespace eact {

namespace {

// Row-major composite indexing: leftmost factor is most significant.
std::vector<Index> strides_of(const std::vector<Index>& dims) {
  std::vector<Index> s(dims.size());
  Index acc = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

}  // namespace

Index ipow(Index base, Index exp) {
  Index out = 1;
  for (Index i = 0; i < exp; ++i) {
    out *= base;
    if (out > (Index{1} << 30)) throw SizeLimitError("ipow: dimension overflow");
  }
  return out;
}

Eigensystem hermitian_eigensystem(const HermitianOperator& h) {
  return hermitian_eigensystem(h.entries);
}

Eigensystem hermitian_eigensystem(const Matrix& h) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol::hermiticity * scale)
    throw InvariantError("hermitian_eigensystem: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw SolverError("hermitian_eigensystem: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix spectral_apply(const Matrix& psd, const std::function<double(double)>& f,
                      bool support_only) {
  auto [vals, vecs] = hermitian_eigensystem(psd);
  const double vmax = vals.cwiseAbs().maxCoeff();
  RealVector out(vals.size());
  for (Index i = 0; i < vals.size(); ++i) {
    double v = vals[i];
    if (v < 0.0 && v >= -tol::psd_eigenvalue) v = 0.0;
    if (support_only && std::abs(v) <= tol::support_rank * vmax) {
      out[i] = 0.0;
      continue;
    }
    out[i] = f(v);
    if (!std::isfinite(out[i]))
      throw DomainError("spectral_apply: function undefined at eigenvalue " +
                        std::to_string(v));
  }
  return vecs * out.asDiagonal() * vecs.adjoint();
}

Matrix matrix_pow(const Matrix& psd, double exponent, bool support_only) {
  return spectral_apply(psd, [exponent](double x) { return std::pow(x, exponent); },
                        support_only);
}

Matrix matrix_sqrt(const Matrix& psd) { return matrix_pow(psd, 0.5); }

Matrix matrix_log2(const Matrix& psd, bool support_only) {
  return spectral_apply(psd, [](double x) { return std::log2(x); }, support_only);
}

Matrix matrix_exp2(const Matrix& hermitian) {
  return spectral_apply(hermitian, [](double x) { return std::exp2(x); });
}

Matrix tensor_product(const Matrix& x, const Matrix& y) {
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

Vector tensor_product(const Vector& x, const Vector& y) {
  Vector out(x.size() * y.size());
  for (Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x[i] * y;
  return out;
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  std::vector<Index> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return DensityOperator(tensor_product(a.mat, b.mat), std::move(dims));
}

Matrix partial_trace(const Matrix& m, const std::vector<Index>& dims,
                     const std::set<int>& keep) {
  if (keep.empty()) throw ShapeError("partial_trace: keep set must be nonempty");
  for (int k : keep)
    if (k < 0 || k >= static_cast<int>(dims.size()))
      throw ShapeError("partial_trace: keep index out of range");
  if (product_of(dims) != m.rows() || m.rows() != m.cols())
    throw ShapeError("partial_trace: dims mismatch");

  std::vector<int> kept(keep.begin(), keep.end());
  std::vector<int> traced;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (!keep.count(i)) traced.push_back(i);

  const auto strides = strides_of(dims);
  Index dk = 1, dt = 1;
  for (int i : kept) dk *= dims[i];
  for (int i : traced) dt *= dims[i];

  // Composite index of a (kept multi-index, traced multi-index) pair.
  auto full_index = [&](Index ik, Index it) {
    Index idx = 0;
    for (int p = static_cast<int>(kept.size()) - 1; p >= 0; --p) {
      idx += (ik % dims[kept[p]]) * strides[kept[p]];
      ik /= dims[kept[p]];
    }
    for (int p = static_cast<int>(traced.size()) - 1; p >= 0; --p) {
      idx += (it % dims[traced[p]]) * strides[traced[p]];
      it /= dims[traced[p]];
    }
    return idx;
  };

  Matrix out = Matrix::Zero(dk, dk);
  for (Index i = 0; i < dk; ++i)
    for (Index j = 0; j < dk; ++j)
      for (Index t = 0; t < dt; ++t) out(i, j) += m(full_index(i, t), full_index(j, t));
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::set<int>& keep) {
  std::vector<Index> kept_dims;
  for (int i = 0; i < static_cast<int>(rho.dims.size()); ++i)
    if (keep.count(i)) kept_dims.push_back(rho.dims[i]);
  return DensityOperator(partial_trace(rho.mat, rho.dims, keep), std::move(kept_dims));
}

Vector permute_subsystems(const Vector& v, const std::vector<Index>& dims,
                          const std::vector<int>& perm) {
  if (perm.size() != dims.size())
    throw ShapeError("permute_subsystems: permutation size mismatch");
  std::vector<Index> new_dims(dims.size());
  for (size_t i = 0; i < perm.size(); ++i) new_dims[i] = dims[perm[i]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);
  Vector out(v.size());
  for (Index idx = 0; idx < v.size(); ++idx) {
    Index rem = idx, nidx = 0;
    for (size_t p = 0; p < dims.size(); ++p) {
      const Index digit = rem / old_strides[p];
      rem %= old_strides[p];
      // Factor p of the input appears at the output slot q with perm[q] == p.
      for (size_t q = 0; q < perm.size(); ++q)
        if (perm[q] == static_cast<int>(p)) nidx += digit * new_strides[q];
    }
    out[nidx] = v[idx];
  }
  return out;
}

Matrix permute_subsystems(const Matrix& m, const std::vector<Index>& dims,
                          const std::vector<int>& perm) {
  // Permute rows and columns through the vector routine on basis indices.
  std::vector<Index> new_dims(dims.size());
  for (size_t i = 0; i < perm.size(); ++i) new_dims[i] = dims[perm[i]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);
  std::vector<Index> map(m.rows());
  for (Index idx = 0; idx < m.rows(); ++idx) {
    Index rem = idx, nidx = 0;
    for (size_t p = 0; p < dims.size(); ++p) {
      const Index digit = rem / old_strides[p];
      rem %= old_strides[p];
      for (size_t q = 0; q < perm.size(); ++q)
        if (perm[q] == static_cast<int>(p)) nidx += digit * new_strides[q];
    }
    map[idx] = nidx;
  }
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(map[i], map[j]) = m(i, j);
  return out;
}

Matrix QuantumChannel::apply(const Matrix& rho) const {
  if (rho.rows() != in_dim || rho.cols() != in_dim)
    throw ShapeError("QuantumChannel::apply: dimension mismatch");
  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (const Matrix& k : kraus) out += k * rho * k.adjoint();
  return out;
}

Matrix QuantumChannel::choi() const {
  // C[(i,a),(j,b)] = sum_k K[a,i] conj(K[b,j]) on A x B ordering.
  Matrix c = Matrix::Zero(in_dim * out_dim, in_dim * out_dim);
  for (const Matrix& k : kraus)
    for (Index i = 0; i < in_dim; ++i)
      for (Index j = 0; j < in_dim; ++j)
        for (Index a = 0; a < out_dim; ++a)
          for (Index b = 0; b < out_dim; ++b)
            c(i * out_dim + a, j * out_dim + b) += k(a, i) * std::conj(k(b, j));
  return c;
}

void QuantumChannel::validate() const {
  if (in_dim <= 0 || out_dim <= 0 || kraus.empty())
    throw ShapeError("QuantumChannel: empty specification");
  Matrix sum = Matrix::Zero(in_dim, in_dim);
  for (const Matrix& k : kraus) {
    if (k.rows() != out_dim || k.cols() != in_dim)
      throw ShapeError("QuantumChannel: Kraus operator shape mismatch");
    sum += k.adjoint() * k;
  }
  if ((sum - Matrix::Identity(in_dim, in_dim)).cwiseAbs().maxCoeff() >
      tol::kraus_completeness)
    throw InvariantError("QuantumChannel: Kraus family is not trace preserving");
  Eigen::SelfAdjointEigenSolver<Matrix> es(choi(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::choi_psd)
    throw InvariantError("QuantumChannel: Choi matrix is not PSD");
}

DensityOperator apply_channel(const QuantumChannel& n, const DensityOperator& rho,
                              int first, int count) {
  if (first < 0 || count < 1 || first + count > static_cast<int>(rho.dims.size()))
    throw ShapeError("apply_channel: subsystem range out of bounds");
  Index block = 1;
  for (int i = first; i < first + count; ++i) block *= rho.dims[i];
  if (block != n.in_dim)
    throw ShapeError("apply_channel: acting subsystem dim != channel input dim");
  Index before = 1, after = 1;
  for (int i = 0; i < first; ++i) before *= rho.dims[i];
  for (int i = first + count; i < static_cast<int>(rho.dims.size()); ++i)
    after *= rho.dims[i];

  const Matrix ib = Matrix::Identity(before, before);
  const Matrix ia = Matrix::Identity(after, after);
  Matrix out = Matrix::Zero(before * n.out_dim * after, before * n.out_dim * after);
  for (const Matrix& k : n.kraus) {
    const Matrix lifted = tensor_product(tensor_product(ib, k), ia);
    out += lifted * rho.mat * lifted.adjoint();
  }
  std::vector<Index> dims(rho.dims.begin(), rho.dims.begin() + first);
  dims.push_back(n.out_dim);
  dims.insert(dims.end(), rho.dims.begin() + first + count, rho.dims.end());
  return DensityOperator(std::move(out), std::move(dims));
}

PureState maximally_entangled(Index d) {
  Vector v = Vector::Zero(d * d);
  for (Index x = 0; x < d; ++x) v[x * d + x] = 1.0 / std::sqrt(double(d));
  return PureState(std::move(v), {d, d});
}

PureState canonical_input_state(const DensityOperator& rho) {
  const Index d = rho.dim();
  const Matrix root = matrix_sqrt(rho.mat);
  // v = sum_x |x>_A (x) sqrt(rho)|x>_A'
  Vector v = Vector::Zero(d * d);
  for (Index x = 0; x < d; ++x) v.segment(x * d, d) = root.col(x);
  v /= v.norm();
  return PureState(std::move(v), {d, d});
}

namespace {

std::vector<std::vector<Index>> cluster_eigenvalues(const RealVector& vals) {
  std::vector<std::vector<Index>> groups;
  for (Index i = 0; i < vals.size(); ++i) {
    if (!groups.empty()) {
      const double prev = vals[groups.back().back()];
      if (std::abs(vals[i] - prev) <=
          tol::eigenvalue_cluster * std::max(1.0, std::abs(vals[i]))) {
        groups.back().push_back(i);
        continue;
      }
    }
    groups.push_back({i});
  }
  return groups;
}

}  // namespace

std::vector<Matrix> spectral_projections(const Matrix& sigma) {
  auto [vals, vecs] = hermitian_eigensystem(sigma);
  std::vector<Matrix> projections;
  for (const auto& g : cluster_eigenvalues(vals)) {
    Matrix p = Matrix::Zero(sigma.rows(), sigma.cols());
    for (Index i : g) p += vecs.col(i) * vecs.col(i).adjoint();
    projections.push_back(std::move(p));
  }
  return projections;
}

Matrix pinching(const Matrix& sigma, const Matrix& x) {
  if (sigma.rows() != x.rows() || sigma.cols() != x.cols())
    throw ShapeError("pinching: dimension mismatch");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const Matrix& p : spectral_projections(sigma)) out += p * x * p;
  return out;
}

int distinct_eigenvalue_count(const Matrix& sigma) {
  auto [vals, vecs] = hermitian_eigensystem(sigma);
  return static_cast<int>(cluster_eigenvalues(vals).size());
}

QuantumChannel identity_channel(Index d) {
  return QuantumChannel(d, d, {Matrix::Identity(d, d)});
}

QuantumChannel channel_tensor(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<Matrix> ks;
  ks.reserve(a.kraus.size() * b.kraus.size());
  for (const Matrix& ka : a.kraus)
    for (const Matrix& kb : b.kraus) ks.push_back(tensor_product(ka, kb));
  return QuantumChannel(a.in_dim * b.in_dim, a.out_dim * b.out_dim, std::move(ks));
}

QuantumChannel channel_tensor_power(const QuantumChannel& n, int m) {
  if (m < 1) throw ShapeError("channel_tensor_power: m must be >= 1");
  QuantumChannel out = n;
  for (int i = 1; i < m; ++i) out = channel_tensor(out, n);
  return out;
}

QuantumChannel channel_compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (first.out_dim != second.in_dim)
    throw ShapeError("channel_compose: dimension mismatch");
  std::vector<Matrix> ks;
  ks.reserve(first.kraus.size() * second.kraus.size());
  for (const Matrix& k2 : second.kraus)
    for (const Matrix& k1 : first.kraus) ks.push_back(k2 * k1);
  return QuantumChannel(first.in_dim, second.out_dim, std::move(ks));
}

Matrix support_projector(const Matrix& psd) {
  auto [vals, vecs] = hermitian_eigensystem(psd);
  const double cutoff = tol::support_rank * std::max(0.0, vals.maxCoeff());
  Matrix p = Matrix::Zero(psd.rows(), psd.cols());
  for (Index i = 0; i < vals.size(); ++i)
    if (vals[i] > cutoff) p += vecs.col(i) * vecs.col(i).adjoint();
  return p;
}

bool support_contained(const Matrix& rho, const Matrix& sigma) {
  const Matrix comp = Matrix::Identity(sigma.rows(), sigma.cols()) - support_projector(sigma);
  return (comp * rho * comp).cwiseAbs().maxCoeff() <= tol::support_membership;
}

bool supports_orthogonal(const Matrix& rho, const Matrix& sigma) {
  return std::abs((rho * support_projector(sigma)).trace().real()) <=
         tol::support_membership;
}

}  // namespace eact
