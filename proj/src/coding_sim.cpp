#include "eact/coding_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "eact/divergence.hpp"

namespace eact {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// X <- X * (sites[0] x sites[1] x ... ), contracting one column mode at a
// time; keeps the cost at n * d * D^2 instead of a dense D^3 product.
void right_multiply_product(Matrix& x, const std::vector<const Matrix*>& sites) {
  const Index rows = x.rows();
  Index right_run = x.cols();
  for (const Matrix* sp : sites) {
    const Matrix& s = *sp;
    const Index d = s.rows();
    right_run /= d;
    const Index l_count = x.cols() / (d * right_run);
    Matrix gathered(rows, d);
    for (Index l = 0; l < l_count; ++l) {
      for (Index r = 0; r < right_run; ++r) {
        for (Index b = 0; b < d; ++b)
          gathered.col(b) = x.col((l * d + b) * right_run + r);
        const Matrix mixed = gathered * s;
        for (Index a = 0; a < d; ++a)
          x.col((l * d + a) * right_run + r) = mixed.col(a);
      }
    }
  }
}

Matrix pseudo_inverse_sqrt(const Matrix& psd) {
  auto es = hermitian_eigensystem(psd);
  const double cutoff = tol::support_rank * std::max(0.0, es.values.maxCoeff());
  RealVector inv(es.values.size());
  for (Index i = 0; i < inv.size(); ++i)
    inv[i] = es.values[i] > cutoff ? 1.0 / std::sqrt(es.values[i]) : 0.0;
  return es.vectors * inv.asDiagonal() * es.vectors.adjoint();
}

// Shared per-copy state: mixture of maximally entangled states on the
// contiguous sender blocks, mirrored on the receiver share.
DensityOperator shared_state(const std::vector<BlockSpec>& blocks, Index d) {
  Matrix omega = Matrix::Zero(d * d, d * d);
  Index offset = 0;
  for (const BlockSpec& b : blocks) {
    Vector v = Vector::Zero(d * d);
    for (Index x = offset; x < offset + b.dim; ++x)
      v[x * d + x] = 1.0 / std::sqrt(double(b.dim));
    omega += b.weight * (v * v.adjoint());
    offset += b.dim;
  }
  return DensityOperator(omega, {d, d});
}

Matrix block_encoder(const std::vector<BlockSpec>& blocks,
                     const std::vector<std::array<Index, 2>>& yz, Index d) {
  Matrix u = Matrix::Zero(d, d);
  Index offset = 0;
  for (size_t t = 0; t < blocks.size(); ++t) {
    const Matrix v = heisenberg_weyl({blocks[t].dim, yz[t][0], yz[t][1]});
    u.block(offset, offset, blocks[t].dim, blocks[t].dim) = v;
    offset += blocks[t].dim;
  }
  return u;
}

// Per-copy signal on B x B~ for one encoder factor.
Matrix copy_signal(const QuantumChannel& n, const DensityOperator& shared,
                   const Matrix& enc, bool receiver_side) {
  const Index d = shared.dims[0];
  Matrix lifted;
  if (receiver_side)
    lifted = tensor_product(Matrix::Identity(d, d), enc);
  else
    lifted = tensor_product(enc, Matrix::Identity(d, d));
  const Matrix encoded = lifted * shared.mat * lifted.adjoint();
  return apply_channel(n, DensityOperator(encoded, shared.dims), 0).mat;
}

std::vector<std::vector<Matrix>> signal_factors(const QuantumChannel& n,
                                                const EACode& code,
                                                bool receiver_side) {
  const auto& encs = receiver_side ? code.encoders_untransposed : code.encoders;
  std::vector<std::vector<Matrix>> sig(code.message_count);
  for (Index m = 0; m < code.message_count; ++m) {
    sig[m].reserve(code.blocklength);
    for (Index i = 0; i < code.blocklength; ++i)
      sig[m].push_back(copy_signal(n, code.shared, encs[m][i], receiver_side));
  }
  return sig;
}

Matrix full_signal(const std::vector<Matrix>& factors) {
  Matrix s = factors[0];
  for (size_t i = 1; i < factors.size(); ++i) s = tensor_product(s, factors[i]);
  return s;
}

}  // namespace

Matrix heisenberg_weyl(const HeisenbergWeylIndex& idx) {
  if (idx.d < 1 || idx.y < 0 || idx.y >= idx.d || idx.z < 0 || idx.z >= idx.d)
    throw ShapeError("heisenberg_weyl: index out of range");
  Matrix v = Matrix::Zero(idx.d, idx.d);
  for (Index x = 0; x < idx.d; ++x)
    v((x + idx.y) % idx.d, x) = std::polar(1.0, kTwoPi * double(x * idx.z) / double(idx.d));
  return v;
}

EACode build_ea_code(const QuantumChannel& n, Index blocklength, double rate,
                     unsigned seed, const std::vector<BlockSpec>& blocks_in) {
  if (blocklength < 1) throw ShapeError("build_ea_code: blocklength must be >= 1");
  std::vector<BlockSpec> blocks = blocks_in;
  if (blocks.empty()) blocks = {BlockSpec{1.0, n.in_dim}};
  Index dsum = 0;
  double wsum = 0.0;
  for (const BlockSpec& b : blocks) {
    if (b.dim < 1 || b.weight < 0.0) throw ShapeError("build_ea_code: bad block");
    dsum += b.dim;
    wsum += b.weight;
  }
  if (dsum != n.in_dim)
    throw ShapeError("build_ea_code: block dims must partition the channel input");
  if (std::abs(wsum - 1.0) > 1e-10)
    throw InvariantError("build_ea_code: block weights must sum to 1");

  const Index copy_dim = n.out_dim * n.in_dim;
  Index total = 1;
  for (Index i = 0; i < blocklength; ++i) {
    total *= copy_dim;
    if (total > 4096) throw SizeLimitError("build_ea_code: total dimension > 4096");
  }

  EACode code;
  code.blocklength = blocklength;
  code.d_in = n.in_dim;
  code.d_out = n.out_dim;
  code.blocks = blocks;
  code.shared = shared_state(blocks, n.in_dim);
  code.seed = seed;
  code.message_count =
      std::max<Index>(1, static_cast<Index>(std::floor(std::exp2(blocklength * rate))));
  if (code.message_count > total) code.rate_warning = true;

  // family size of distinct encoder tuples, capped to avoid overflow
  double family = 1.0;
  for (Index i = 0; i < blocklength; ++i)
    for (const BlockSpec& b : blocks) family *= double(b.dim) * double(b.dim);
  family = std::min(family, 1e18);

  std::mt19937_64 rng(seed);
  std::set<std::vector<Index>> used;
  for (Index m = 0; m < code.message_count; ++m) {
    std::vector<std::vector<std::array<Index, 2>>> tuple(blocklength);
    std::vector<Index> key;
    const bool dedup = double(used.size()) < family;
    for (int attempt = 0;; ++attempt) {
      key.clear();
      for (Index i = 0; i < blocklength; ++i) {
        tuple[i].clear();
        for (const BlockSpec& b : blocks) {
          std::uniform_int_distribution<Index> pick(0, b.dim * b.dim - 1);
          const Index yz = pick(rng);
          tuple[i].push_back({yz / b.dim, yz % b.dim});
          key.push_back(yz);
        }
      }
      if (!dedup || used.insert(key).second) break;
      if (attempt > 1000000)
        throw SolverError("build_ea_code: codeword sampling stalled");
    }
    std::vector<Matrix> enc(blocklength), enc_t(blocklength);
    std::vector<std::array<Index, 2>> flat;
    for (Index i = 0; i < blocklength; ++i) {
      const Matrix u = block_encoder(blocks, tuple[i], n.in_dim);
      enc[i] = u;
      enc_t[i] = u.transpose();
      for (const auto& yz : tuple[i]) flat.push_back(yz);
    }
    code.encoders_untransposed.push_back(std::move(enc));
    code.encoders.push_back(std::move(enc_t));
    code.hw_indices.push_back(std::move(flat));
  }
  return code;
}

EACode pad_code(const EACode& code, Index m_total) {
  if (m_total < code.message_count)
    throw ShapeError("pad_code: target must not shrink the code");
  EACode padded = code;
  padded.padded_count = m_total;
  return padded;
}

double success_probability(const QuantumChannel& n, const EACode& code,
                           bool receiver_side) {
  if (n.in_dim != code.d_in || n.out_dim != code.d_out)
    throw ShapeError("success_probability: channel does not match the code");
  const auto sig = signal_factors(n, code, receiver_side);
  const Index dim = ipow(code.d_out * code.d_in, code.blocklength);
  Matrix gram = Matrix::Zero(dim, dim);
  for (Index m = 0; m < code.message_count; ++m) gram += full_signal(sig[m]);
  const Matrix y = pseudo_inverse_sqrt(gram);

  double total = 0.0;
  for (Index m = 0; m < code.message_count; ++m) {
    Matrix x = y;
    std::vector<const Matrix*> sites;
    for (const Matrix& f : sig[m]) sites.push_back(&f);
    right_multiply_product(x, sites);
    // tr[(Y S_m)^2] = sum_ij X_ij X_ji
    total += x.cwiseProduct(x.transpose()).sum().real();
  }
  return total / double(code.total_messages());
}

Matrix decoder_element(const QuantumChannel& n, const EACode& code, Index m) {
  if (m < 0 || m >= code.message_count)
    throw ShapeError("decoder_element: message index out of range");
  const auto sig = signal_factors(n, code, false);
  const Index dim = ipow(code.d_out * code.d_in, code.blocklength);
  Matrix gram = Matrix::Zero(dim, dim);
  for (Index k = 0; k < code.message_count; ++k) gram += full_signal(sig[k]);
  const Matrix y = pseudo_inverse_sqrt(gram);
  return y * full_signal(sig[m]) * y;
}

double entanglement_fidelity(const QuantumChannel& n, const QuantumCode& code) {
  const PureState psi = maximally_entangled(code.k);
  DensityOperator state = tensor_product(psi.density(), code.shared);
  state = apply_channel(code.encoder, state, 1, 2);
  state = apply_channel(n, state, 1);
  state = apply_channel(code.decoder, state, 1, 2);
  if (state.dims.size() != 2 || state.dims[1] != code.k)
    throw ShapeError("entanglement_fidelity: decoder output dim mismatch");
  return fidelity(state.mat, psi.projector());
}

ExponentFit empirical_exponent(const std::vector<SimulationRecord>& records) {
  ExponentFit fit;
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    if (r.p_success <= 0.0) {
      fit.dropped.push_back(r.blocklength);
      continue;
    }
    xs.push_back(double(r.blocklength));
    ys.push_back(-std::log2(r.p_success));
  }
  fit.points_used = static_cast<int>(xs.size());
  if (fit.points_used < 3)
    throw DomainError("empirical_exponent: need at least 3 blocklengths with P_s > 0");
  const double xbar = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double ybar = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (sxx <= 0.0) throw DomainError("empirical_exponent: degenerate blocklengths");
  fit.slope = sxy / sxx;
  const double intercept = ybar - fit.slope * xbar;
  double ss = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.slope * xs[i] + intercept);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / xs.size());
  return fit;
}

SimulationResult simulate(const QuantumChannel& n, double rate,
                          const std::vector<Index>& blocklengths, unsigned seed,
                          const std::vector<BlockSpec>& blocks) {
  SimulationResult out;
  out.rate = rate;
  out.seed = seed;
  for (Index len : blocklengths) {
    const unsigned seed_n = seed ^ (0x9e3779b9u * static_cast<unsigned>(len + 1));
    const EACode code = build_ea_code(n, len, rate, seed_n, blocks);
    SimulationRecord rec;
    rec.blocklength = len;
    rec.messages = code.message_count;
    rec.p_success = success_probability(n, code);
    rec.seed = seed_n;
    out.records.push_back(rec);
  }
  int usable = 0;
  for (const auto& r : out.records)
    if (r.p_success > 0.0) ++usable;
  if (usable >= 3) out.fit = empirical_exponent(out.records);
  return out;
}

}  // namespace eact
