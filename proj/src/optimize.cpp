#include <cstdio>
#include "eact/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "eact/random.hpp"

namespace eact {

namespace {

constexpr double kFdStep = 1e-5;
constexpr double kBig = 1e100;
const double kInf = std::numeric_limits<double>::infinity();

using EvalFn = std::function<double(const Matrix&)>;
using GradFn = std::function<Matrix(const Matrix&)>;

// Eigen-apply with all negative eigenvalues clipped to zero and f skipped on
// zeros; tolerant of the small PSD violations finite differencing introduces.
Matrix clipped_apply(const Matrix& psd, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((psd + psd.adjoint()) / 2.0);
  RealVector out(es.eigenvalues().size());
  for (Index i = 0; i < out.size(); ++i) {
    const double v = es.eigenvalues()[i];
    out[i] = v > 0.0 ? f(v) : 0.0;
  }
  return es.eigenvectors() * out.asDiagonal() * es.eigenvectors().adjoint();
}

double log2_power_trace(const RealVector& vals, double a) {
  double vmax = 0.0;
  for (Index i = 0; i < vals.size(); ++i) vmax = std::max(vmax, vals[i]);
  if (vmax <= 0.0) return -kInf;
  double s = 0.0;
  for (Index i = 0; i < vals.size(); ++i)
    if (vals[i] > 0.0) s += std::pow(vals[i] / vmax, a);
  return a * std::log2(vmax) + std::log2(s);
}

double entropy_bits(const Matrix& psd) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(psd, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()[i];
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

// Project onto the density-matrix set: symmetrize, clip, renormalize.
Matrix sanitize_state(const Matrix& raw) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((raw + raw.adjoint()) / 2.0);
  RealVector v = es.eigenvalues().cwiseMax(0.0);
  const double tr = v.sum();
  if (tr <= 0.0) throw DomainError("sanitize_state: zero matrix");
  v /= tr;
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

// Columns spanning the support of a PSD matrix.
Matrix support_isometry(const Matrix& psd) {
  auto es = hermitian_eigensystem(psd);
  const double cutoff = tol::support_rank * std::max(0.0, es.values.maxCoeff());
  Index r = 0;
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values[i] > cutoff) ++r;
  Matrix v(psd.rows(), r);
  Index c = 0;
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values[i] > cutoff) v.col(c++) = es.vectors.col(i);
  return v;
}

// Central-difference step balancing roundoff noise against curvature bias.
// Objectives proportional to (alpha - 1) carry absolute noise of a few 1e-15
// (spectral decompositions plus log-sum-exp) while their third derivatives
// shrink with |alpha - 1|, so the optimal step grows as |alpha - 1|^{-1/3}
// near the Renyi limit.
double fd_step_for(double alpha) {
  const double s = std::max(std::abs(alpha - 1.0), 1e-14);
  return std::clamp(std::cbrt(1e-14 / s), kFdStep, 3e-3);
}

Matrix fd_gradient(const EvalFn& f, const Matrix& x, double h = kFdStep) {
  const Index d = x.rows();
  Matrix g = Matrix::Zero(d, d);
  Matrix e = Matrix::Zero(d, d);
  const double inv = 1.0 / (2.0 * h);
  auto probe = [&]() { return (f(x + h * e) - f(x - h * e)) * inv; };
  for (Index p = 0; p < d; ++p) {
    e.setZero();
    e(p, p) = 1.0;
    g += probe() * e;
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (Index p = 0; p < d; ++p) {
    for (Index q = p + 1; q < d; ++q) {
      e.setZero();
      e(p, q) = s;
      e(q, p) = s;
      g += probe() * e;
      e(p, q) = Complex(0, s);
      e(q, p) = Complex(0, -s);
      g += probe() * e;
    }
  }
  return g;
}

// Daleckii-Krein action of a spectral function's derivative: for Hermitian h
// with eigensystem V diag(l) V^dag, returns V (F o (V^dag w V)) V^dag where
// F_ij is the divided difference of f across (l_i, l_j). The map is
// self-adjoint, so it serves both as the directional derivative of f(h) and
// as the adjoint needed when chaining it inside a gradient.
Matrix frechet_apply(const Matrix& h, const Matrix& w,
                     const std::function<double(double)>& f,
                     const std::function<double(double)>& df) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  const RealVector& l = es.eigenvalues();
  Matrix wt = es.eigenvectors().adjoint() * w * es.eigenvectors();
  for (Index i = 0; i < l.size(); ++i)
    for (Index j = 0; j < l.size(); ++j) {
      const double gap = l[i] - l[j];
      const double coef =
          std::abs(gap) > 1e-10 * (1.0 + std::abs(l[i]) + std::abs(l[j]))
              ? (f(l[i]) - f(l[j])) / gap
              : df((l[i] + l[j]) / 2.0);
      wt(i, j) *= coef;
    }
  return es.eigenvectors() * wt * es.eigenvectors().adjoint();
}

// log2 with eigenvalues floored away from zero: mirror iterates stay full
// rank, but their smallest eigenvalues can reach the underflow range.
Matrix floored_log2(const Matrix& psd) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((psd + psd.adjoint()) / 2.0);
  RealVector out(es.eigenvalues().size());
  for (Index i = 0; i < out.size(); ++i)
    out[i] = std::log2(std::max(es.eigenvalues()[i], 1e-100));
  return es.eigenvectors() * out.asDiagonal() * es.eigenvectors().adjoint();
}

// 2^m / tr 2^m computed through the shifted eigenvalues, so it stays finite
// when the spectrum of m is far below zero.
Matrix gibbs2(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  const RealVector shifted =
      (es.eigenvalues().array() - es.eigenvalues().maxCoeff()) * std::log(2.0);
  RealVector p = shifted.array().exp();
  p /= p.sum();
  return es.eigenvectors() * p.asDiagonal() * es.eigenvectors().adjoint();
}

double projected_grad_norm(const Matrix& x, const Matrix& g) {
  const Matrix root = clipped_apply(x, [](double v) { return std::sqrt(v); });
  const Matrix centered =
      g - (x * g).trace().real() * Matrix::Identity(x.rows(), x.cols());
  return (root * centered * root).norm();
}

// Exponentiated-gradient step x -> exp(log x - eta g) / tr, in eigenbases.
Matrix mirror_step(const Matrix& x, const Matrix& g, double eta) {
  const Matrix logx =
      clipped_apply(x, [](double v) { return std::log(std::max(v, 1e-300)); });
  Eigen::SelfAdjointEigenSolver<Matrix> es(logx - eta * g);
  const RealVector w = (es.eigenvalues().array() - es.eigenvalues().maxCoeff()).exp();
  const RealVector p = w / w.sum();
  return es.eigenvectors() * p.asDiagonal() * es.eigenvectors().adjoint();
}

MirrorResult mirror_descent(const EvalFn& f, const GradFn& grad, const Matrix& x0,
                            double tol, int max_iter) {
  const Index d = x0.rows();
  Matrix x = sanitize_state((1.0 - 1e-12) * x0 +
                            (1e-12 / d) * Matrix::Identity(d, d));
  MirrorResult res;
  double fx = f(x);
  double eta = 1.0;
  double f_best = fx;
  double last_eta = 1.0;
  int stall = 0;
  Matrix prev_x, prev_g;
  for (int it = 0; it < max_iter; ++it) {
    const Matrix g = grad(x);
    const double r = projected_grad_norm(x, g);
    res.x = x;
    res.value = fx;
    res.grad_norm = r;
    res.iterations = it;
    if (r <= tol) {
      res.converged = true;
      return res;
    }
    if (prev_x.size() > 0) {  // Barzilai-Borwein trial step
      const Matrix dx = x - prev_x;
      const Matrix dg = g - prev_g;
      const double num = std::abs((dx.adjoint() * dx).trace().real());
      const double den = std::abs((dx.adjoint() * dg).trace().real());
      if (den > 1e-300) eta = std::clamp(num / den, 1e-8, 1e8);
      // On stiff landscapes an unconstrained BB step forces a long
      // backtracking cascade every iteration; let the step recover from the
      // last accepted size quickly but not instantly.
      eta = std::min(eta, 64.0 * last_eta);
    }
    prev_x = x;
    prev_g = g;
    const Matrix centered =
        g - (x * g).trace().real() * Matrix::Identity(d, d);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Matrix cand = mirror_step(x, centered, eta);
      const double fc = f(cand);
      // Near a minimum the true decrease per step falls below the evaluation
      // roundoff; accepting within that slack lets the gradient certificate
      // (whose signal survives much longer) keep driving progress.  Penalty
      // values are excluded: stepping between unevaluable points is not
      // progress.
      if (fc < fx || (fc < kBig / 2 && fc < fx + 4e-15 * (1.0 + std::abs(fx)))) {
        x = cand;
        fx = fc;
        accepted = true;
        last_eta = eta;
        break;
      }
      eta *= 0.5;
      // From an unevaluable start, probing ever-smaller unevaluable steps
      // just repeats expensive failed evaluations.
      if (fx >= kBig / 2 && fc >= kBig / 2 && bt >= 8) break;
    }
    if (!accepted) break;  // at the finite-difference noise floor
    // Give slow noise-floor crawls room, but cut hopeless runs short: far
    // from the certificate a long stretch without real decrease means the
    // landscape is too stiff for this step rule.
    if (fx < f_best - 4e-15 * (1.0 + std::abs(f_best))) {
      f_best = fx;
      stall = 0;
    } else if (++stall >= 400 || (stall >= 50 && r > 100.0 * tol)) {
      break;
    }
  }
  // final certificate at the last iterate
  const Matrix g = grad(x);
  res.x = x;
  res.value = fx;
  res.grad_norm = projected_grad_norm(x, g);
  res.converged = res.grad_norm <= tol;
  return res;
}

// ---- sandwiched mutual information ------------------------------------

struct SandwichedObjective {
  Matrix rho;        // on A x B', B reduced to supp(rho_B)
  Matrix rho_a_pow;  // rho_A^{(1-a)/(2a)}
  double alpha;

  double operator()(const Matrix& sigma) const {
    const double p = (1.0 - alpha) / (2.0 * alpha);
    // For alpha > 1 the exponent is negative and a rank-deficient sigma means
    // an infinite divergence; flooring the eigenvalue magnitude makes the
    // barrier explicit instead of silently dropping the null space.
    Matrix sp;
    if (p < 0.0) {
      Eigen::SelfAdjointEigenSolver<Matrix> ses((sigma + sigma.adjoint()) / 2.0);
      RealVector sv(ses.eigenvalues().size());
      for (Index i = 0; i < sv.size(); ++i)
        sv[i] = std::pow(std::max(std::abs(ses.eigenvalues()[i]), 1e-18), p);
      sp = ses.eigenvectors() * sv.asDiagonal() * ses.eigenvectors().adjoint();
    } else {
      sp = clipped_apply(sigma, [p](double v) { return std::pow(v, p); });
    }
    const Matrix half = tensor_product(rho_a_pow, sp);
    const Matrix x = half * rho * half;
    Eigen::SelfAdjointEigenSolver<Matrix> es((x + x.adjoint()) / 2.0,
                                             Eigen::EigenvaluesOnly);
    const double log_tr = log2_power_trace(es.eigenvalues(), alpha);
    if (!std::isfinite(log_tr)) return kBig;
    return log_tr / (alpha - 1.0);
  }

  // sign(alpha - 1) * log-trace: same minimizer as the divergence but with
  // the 1/(alpha - 1) noise amplification removed; used by the solver.
  double scaled(const Matrix& sigma) const {
    const double d = (*this)(sigma);
    if (d >= kBig) return kBig;
    return d * std::abs(alpha - 1.0);
  }
};

}  // namespace

void StateEnsemble::validate() const {
  if (items.empty()) throw ShapeError("StateEnsemble: empty");
  double s = 0.0;
  for (const auto& it : items) {
    if (it.weight < 0.0) throw InvariantError("StateEnsemble: negative weight");
    if (it.state.dims.size() != 2)
      throw ShapeError("StateEnsemble: states must be bipartite");
    s += it.weight;
  }
  if (std::abs(s - 1.0) > 1e-10)
    throw InvariantError("StateEnsemble: weights do not sum to 1");
}

MirrorResult minimize_over_states(const std::function<double(const Matrix&)>& f,
                                  const Matrix& x0, double tol, int max_iter) {
  return mirror_descent(f, [&f](const Matrix& x) { return fd_gradient(f, x); }, x0,
                        tol, max_iter);
}

MutualInfoResult sandwiched_mutual_info(const DensityOperator& rho_ab, RenyiOrder order,
                                        const Matrix* warm, const SolveOptions& opts) {
  if (rho_ab.dims.size() != 2)
    throw ShapeError("sandwiched_mutual_info: state must declare two subsystems");
  MutualInfoResult out;
  const Matrix rho_b = partial_trace(rho_ab, {1}).mat;
  if (order.limit_at_one) {
    out.value = mutual_information(rho_ab);
    out.sigma = rho_b;
    out.converged = true;
    return out;
  }
  if (!(order.alpha >= 0.5))
    throw DomainError("sandwiched_mutual_info: alpha must be >= 1/2");
  const Matrix rho_a = partial_trace(rho_ab, {0}).mat;
  const Matrix v = support_isometry(rho_b);
  const Index da = rho_ab.dims[0];
  const Matrix lift = tensor_product(Matrix::Identity(da, da), v);
  SandwichedObjective obj{
      lift.adjoint() * rho_ab.mat * lift,
      matrix_pow(rho_a, (1.0 - order.alpha) / (2.0 * order.alpha), true),
      order.alpha};

  if (v.cols() == 1) {
    out.value = obj(Matrix::Identity(1, 1));
    out.sigma = v * v.adjoint();
    out.converged = true;
    return out;
  }

  Matrix x0 = v.adjoint() * rho_b * v;
  if (warm && warm->rows() == rho_b.rows()) {
    const Matrix w = v.adjoint() * (*warm) * v;
    if (w.trace().real() > 0.5) x0 = w;  // warm start still lives on the support
  }
  // Solve in the noise-free scaling: certificate and value map back exactly.
  const double scale = std::abs(order.alpha - 1.0);
  const double h = fd_step_for(order.alpha);
  auto fs = [&obj](const Matrix& s) { return obj.scaled(s); };
  auto sol = mirror_descent(fs, [&](const Matrix& s) { return fd_gradient(fs, s, h); },
                            sanitize_state(x0), opts.inner_tol * scale, opts.max_inner);
  out.value = sol.value >= kBig / 2 ? kBig : sol.value / scale;
  out.sigma = v * sol.x * v.adjoint();
  out.grad_norm = sol.grad_norm / scale;
  out.iterations = sol.iterations;
  out.converged = sol.converged;
  return out;
}

// ---- channel information ----------------------------------------------

namespace {

// psi(rho) via the clipped square root; tolerant of FD perturbations.
PureState input_purification(const Matrix& rho_raw) {
  const Index d = rho_raw.rows();
  const Matrix root =
      clipped_apply(rho_raw, [](double x) { return std::sqrt(x); });
  Vector v = Vector::Zero(d * d);
  for (Index x = 0; x < d; ++x) v.segment(x * d, d) = root.col(x);
  v /= v.norm();
  return PureState(std::move(v), {d, d});
}

struct ChannelInfoSession {
  const QuantumChannel* n;
  RenyiOrder order;
  SolveOptions opts;
  Matrix sigma_warm;
  bool has_sigma = false;
  long inner_total = 0;
  bool last_inner_converged = true;

  DensityOperator output(const Matrix& rho_raw) const {
    return apply_channel(*n, input_purification(rho_raw).density(), 1);
  }

  double value(const Matrix& rho_raw) {
    const DensityOperator out = output(rho_raw);
    auto res = sandwiched_mutual_info(out, order, has_sigma ? &sigma_warm : nullptr,
                                      opts);
    inner_total += res.iterations;
    if (!res.converged && has_sigma) {
      // a poisoned warm start must not survive, or every later evaluation
      // inherits the failure; retry once from the cold start
      auto retry = sandwiched_mutual_info(out, order, nullptr, opts);
      inner_total += retry.iterations;
      if (retry.converged || retry.value < res.value) res = std::move(retry);
    }
    if (res.converged) {
      sigma_warm = res.sigma;
      has_sigma = true;
    }
    last_inner_converged = res.converged;
    return res.value;
  }

  // Envelope gradient: differentiate with the inner argmin frozen.
  Matrix gradient(const Matrix& rho) {
    value(rho);  // refresh sigma_warm at the center point
    const Index db = n->out_dim;
    const Matrix frozen = (1.0 - 1e-12) * sigma_warm +
                          (1e-12 / db) * Matrix::Identity(db, db);
    // Differentiate in the (alpha - 1)-scaled form and rescale afterwards;
    // division by a scalar does not re-amplify the roundoff noise.
    const double scale = order.limit_at_one ? 1.0 : order.alpha - 1.0;
    auto f = [&](const Matrix& r) {
      const DensityOperator out = output(r);
      const Matrix rho_a = partial_trace(out, {0}).mat;
      const Matrix st = tensor_product(rho_a, frozen);
      const DivergenceValue dv =
          order.limit_at_one ? relative_entropy(out.mat, st)
                             : sandwiched_divergence(out.mat, st, order);
      return dv.is_infinite() ? kBig : dv.bits * scale;
    };
    const double h = order.limit_at_one ? kFdStep : fd_step_for(order.alpha);
    return fd_gradient(f, rho, h) / scale;
  }
};

}  // namespace

ChannelInfoResult channel_renyi_info(const QuantumChannel& n, RenyiOrder order,
                                     const SolveOptions& opts,
                                     const ChannelInfoWarmStart* warm) {
  const Index d = n.in_dim;
  ChannelInfoSession session{&n, order, opts};
  if (warm && warm->sigma.size() > 0) {
    session.sigma_warm = warm->sigma;
    session.has_sigma = true;
  }

  std::vector<Matrix> starts;
  if (warm && warm->rho.size() > 0) {
    starts.push_back(warm->rho);
  } else {
    starts.push_back(Matrix::Identity(d, d) / double(d));
    Matrix tilt = Matrix::Identity(d, d);
    for (Index i = 0; i < d; ++i) tilt(i, i) = 1.0 + 0.1 * double(i);
    starts.push_back(tilt / tilt.trace().real());
    Rng rng(opts.seed);
    starts.push_back(random_density_matrix(rng, d));
  }
  if (static_cast<int>(starts.size()) > opts.restarts)
    starts.resize(std::max(1, opts.restarts));

  ChannelInfoResult best, best_certified;
  double lo = kInf, hi = -kInf;
  bool any = false, any_certified = false;
  // Maximize in the (alpha - 1)-scaled units so the line search sees the
  // un-amplified objective noise; tolerance and values map back exactly.
  const double scale = order.limit_at_one ? 1.0 : std::abs(order.alpha - 1.0);
  for (const Matrix& x0 : starts) {
    auto sol = mirror_descent(
        [&](const Matrix& r) {
          const double v = session.value(r);
          // An unconverged minimization only upper-bounds the information;
          // feeding that bound to the maximizer would inflate the result, so
          // treat the point as unevaluable instead.
          if (!session.last_inner_converged || v >= kBig / 2) return kBig;
          return -v * scale;
        },
        [&](const Matrix& r) { return (-scale) * session.gradient(r); }, x0,
        opts.outer_tol * scale, opts.max_outer);
    const double val = sol.value >= kBig / 2 ? -kBig : -sol.value / scale;
    if (sol.converged) {
      lo = std::min(lo, val);
      hi = std::max(hi, val);
    }
    ChannelInfoResult cand;
    cand.value = val;
    cand.rho = sol.x;
    cand.grad_norm = sol.grad_norm / scale;
    cand.outer_iterations = sol.iterations;
    cand.converged = sol.converged;
    if (!any || cand.value > best.value) {
      any = true;
      best = cand;
    }
    if (cand.converged && (!any_certified || cand.value > best_certified.value)) {
      any_certified = true;
      best_certified = cand;
    }
  }
  // Prefer a certified maximizer: an uncertified restart on the same plateau
  // can edge it out by evaluation noise alone.
  if (any_certified &&
      best.value - best_certified.value <=
          1e-6 * std::max(1.0, std::abs(best_certified.value)))
    best = best_certified;
  // fresh inner solve at the selected maximizer; trial points probed during
  // line searches may legitimately fail to converge without mattering
  best.value = session.value(best.rho);
  best.sigma = session.sigma_warm;
  best.inner_iterations = session.inner_total;
  best.converged = best.converged && session.last_inner_converged;
  best.restart_spread = (hi >= lo) ? hi - lo : 0.0;
  return best;
}

ChannelInfoResult ea_capacity(const QuantumChannel& n, const SolveOptions& opts) {
  return channel_renyi_info(n, RenyiOrder::limit(), opts);
}

// ---- exponents ----------------------------------------------------------

namespace {

template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, double xtol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    }
  }
  return fc > fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

// sup over the lambda window of lambda (R - scale * I*_{1/(1-lambda)}).
ExponentResult exponent_search(const QuantumChannel& n, const ExponentQuery& q,
                               double scale) {
  if (!(q.rate > 0.0)) throw DomainError("exponent query: rate must be > 0");
  if (!(q.window_delta > 0.0 && q.window_delta < 0.5))
    throw DomainError("exponent query: window delta must lie in (0, 1/2)");
  ExponentResult out;
  ChannelInfoWarmStart ws;
  bool has_ws = false;

  auto info_at = [&](double lam) {
    SolveOptions so = q.solve;
    if (has_ws) so.restarts = 1;
    auto res = channel_renyi_info(n, RenyiOrder::from_lambda(lam), so,
                                  has_ws ? &ws : nullptr);
    ws.rho = res.rho;
    ws.sigma = res.sigma;
    has_ws = true;
    out.inner_iterations += res.inner_iterations;
    return res;
  };
  auto phi = [&](double lam) {
    const double v = lam * (q.rate - scale * info_at(lam).value);
    out.trace.emplace_back(lam, v);
    return v;
  };

  const double lo = q.window_delta;
  const double hi = 1.0 - q.window_delta;
  auto [lam_star, best] = golden_max(phi, lo, hi, q.lambda_tol);

  // fresh multi-start evaluation at the maximizer, as the certificate
  SolveOptions so = q.solve;
  auto final_res = channel_renyi_info(n, RenyiOrder::from_lambda(lam_star), so);
  best = std::max(best, lam_star * (q.rate - scale * final_res.value));
  out.rho_star = final_res.rho;

  // window-edge value gives the truncation bound via monotonicity in alpha
  const double t_edge = phi(hi) / hi;
  out.truncation_bound = q.window_delta * std::abs(t_edge);

  if (best <= 0.0) {
    out.sc = 0.0;
    out.lambda_star = 0.0;
    out.alpha_star = 1.0;
  } else {
    out.sc = best;
    out.lambda_star = lam_star;
    out.alpha_star = 1.0 / (1.0 - lam_star);
  }
  out.status = final_res.converged ? "ok" : "inner-not-converged";
  return out;
}

}  // namespace

ExponentResult strong_converse_exponent(const QuantumChannel& n, const ExponentQuery& q) {
  return exponent_search(n, q, 1.0);
}

ExponentResult feedback_exponent(const QuantumChannel& n, const ExponentQuery& q) {
  return exponent_search(n, q, 1.0);
}

ExponentResult quantum_exponent(const QuantumChannel& n, const ExponentQuery& q) {
  return exponent_search(n, q, 0.5);
}

double pf_ps_transform(double value, PfPsDirection direction) {
  if (!(value >= 0.0 && value <= 1.0))
    throw DomainError("pf_ps_transform: probability out of [0, 1]");
  return direction == PfPsDirection::success_to_fidelity ? std::sqrt(value)
                                                         : value * value;
}

// ---- log-Euclidean channel information ----------------------------------

namespace {

struct FlatInnerProblem {
  Matrix rho;     // restricted output state on A' x B'
  Matrix psi_a;   // restricted, full-rank A-marginal
  Matrix vb;      // isometry back to the full B space
  Matrix sigma0;  // restricted start
};

FlatInnerProblem restrict_flat_problem(const DensityOperator& out) {
  const Matrix psi_a = partial_trace(out, {0}).mat;
  const Matrix rho_b = partial_trace(out, {1}).mat;
  const Matrix va = support_isometry(psi_a);
  const Matrix vb = support_isometry(rho_b);
  const Matrix lift = tensor_product(va, vb);
  FlatInnerProblem p;
  p.rho = lift.adjoint() * out.mat * lift;
  p.psi_a = va.adjoint() * psi_a * va;
  p.vb = vb;
  p.sigma0 = sanitize_state(vb.adjoint() * rho_b * vb);
  return p;
}

double flat_inner_min(const DensityOperator& out, RenyiOrder order,
                      const SolveOptions& opts, Matrix* warm) {
  const FlatInnerProblem p = restrict_flat_problem(out);
  const double scale = std::abs(order.alpha - 1.0);
  auto f = [&](const Matrix& sigma) {
    try {
      const DivergenceValue dv = log_euclidean_divergence(
          p.rho, tensor_product(p.psi_a, sanitize_state(sigma)), order);
      return dv.is_infinite() ? kBig : dv.bits;
    } catch (const DomainError&) {
      return kBig;
    } catch (const SolverError&) {
      return kBig;
    }
  };
  if (p.vb.cols() == 1) {
    if (warm) *warm = p.vb * p.vb.adjoint();
    return f(Matrix::Identity(1, 1));
  }
  Matrix x0 = p.sigma0;
  bool warm_used = false;
  if (warm && warm->rows() == p.vb.rows()) {
    const Matrix w = p.vb.adjoint() * (*warm) * p.vb;
    if (w.trace().real() > 0.5) {
      x0 = sanitize_state(w);
      warm_used = true;
    }
  }
  // same (alpha - 1) rescaling as the sandwiched inner solve
  auto fs = [&](const Matrix& sigma) {
    const double d = f(sigma);
    return d >= kBig ? kBig : d * scale;
  };
  // Analytic gradient of the scaled objective sgn(a-1) log2 tr 2^{M(sigma)}
  // with M = a log2(rho) + (1-a)(log2(psi_A) x I + I x log2(sigma)), all
  // compressed onto supp(rho): the chain rule gives
  //   sgn(a-1)(1-a) Dlog2[sigma]( tr_A'( 2^M / tr 2^M ) ).
  const double a = order.alpha;
  const double sgn = a > 1.0 ? 1.0 : -1.0;
  const Matrix wr = support_isometry(p.rho);
  const Index ra = p.psi_a.rows();
  const Index rb = p.vb.cols();
  const Matrix base =
      a * (wr.adjoint() * matrix_log2(p.rho, true) * wr) +
      (1.0 - a) * (wr.adjoint() *
                   tensor_product(matrix_log2(p.psi_a, true),
                                  Matrix::Identity(rb, rb)) *
                   wr);
  auto grad_fs = [&](const Matrix& sigma) {
    const Matrix ss = sanitize_state(sigma);
    const Matrix m =
        base + (1.0 - a) * (wr.adjoint() *
                            tensor_product(Matrix::Identity(ra, ra),
                                           floored_log2(ss)) *
                            wr);
    const Matrix wb =
        partial_trace(wr * gibbs2(m) * wr.adjoint(), {ra, rb}, {1});
    return (sgn * (1.0 - a)) *
           frechet_apply(
               ss, wb, [](double v) { return std::log2(std::max(v, 1e-100)); },
               [](double v) {
                 return 1.0 / (std::max(v, 1e-100) * std::log(2.0));
               });
  };
  auto solve_from = [&](const Matrix& start) {
    return mirror_descent(fs, grad_fs, start, opts.inner_tol * scale,
                          opts.max_inner);
  };
  auto sol = solve_from(x0);
  if (!sol.converged && warm_used) sol = solve_from(p.sigma0);  // warm start may mislead
  if (!sol.converged)
    fprintf(stderr, "DBG flat stall a=%g iters=%d grad=%g val=%g scale=%g\n",
            order.alpha, sol.iterations, sol.grad_norm, sol.value, scale);
  if (!sol.converged)
    throw SolverError("log_euclidean_channel_info: inner minimization stalled at "
                      "gradient norm " +
                      std::to_string(sol.grad_norm / scale));
  if (warm) *warm = p.vb * sol.x * p.vb.adjoint();
  return sol.value >= kBig / 2 ? kBig : sol.value / scale;
}

}  // namespace

double log_euclidean_channel_info(const QuantumChannel& n, const StateEnsemble& ens,
                                  RenyiOrder order, const SolveOptions& opts) {
  ens.validate();
  if (order.limit_at_one || !(order.alpha > 1.0))
    throw DomainError("log_euclidean_channel_info: order must exceed 1");
  double total = 0.0;
  for (const auto& item : ens.items) {
    if (item.weight == 0.0) continue;
    const DensityOperator out = apply_channel(n, item.state.density(), 1);
    total += item.weight * flat_inner_min(out, order, opts, nullptr);
  }
  return total;
}

double log_euclidean_channel_info(const QuantumChannel& n, const PureState& psi,
                                  RenyiOrder order, const SolveOptions& opts) {
  return log_euclidean_channel_info(n, StateEnsemble({{1.0, psi}}), order, opts);
}

double exponent_candidate_F(const QuantumChannel& n, double rate,
                            const StateEnsemble& ens, const ExponentQuery& q) {
  ens.validate();
  if (!(rate >= 0.0)) throw DomainError("exponent_candidate_F: rate must be >= 0");
  std::vector<Matrix> warm(ens.items.size());
  auto phi = [&](double lam) {
    const RenyiOrder order = RenyiOrder::of(1.0 / (1.0 - lam));
    double total = 0.0;
    for (size_t t = 0; t < ens.items.size(); ++t) {
      const auto& item = ens.items[t];
      if (item.weight == 0.0) continue;
      const DensityOperator out = apply_channel(n, item.state.density(), 1);
      total += item.weight * flat_inner_min(out, order, q.solve, &warm[t]);
    }
    return lam * (rate - total);
  };
  auto [lam_star, best] = golden_max(phi, q.window_delta, 1.0 - q.window_delta,
                                     q.lambda_tol);
  (void)lam_star;
  return std::max(0.0, best);
}

// ---- variational form and the F1/F2 split -------------------------------

namespace {

// One ensemble component of the variational problem, reduced to the support
// of the channel output.
struct TauBlock {
  double q = 0.0;
  Matrix iso;       // (dA dB) x r embedding of the tau space
  Matrix a_op;      // iso^dag (log2 psi_A x I) iso
  Matrix b_op;      // iso^dag log2 N(psi) iso
  std::vector<Index> dims;  // {dA, dB}
  Matrix tau;       // current iterate on the reduced space
  Matrix tau0;      // mu = 0 minimizer: restricted N(psi)

  Matrix tau_b(const Matrix& t) const {
    const Matrix full = iso * t * iso.adjoint();
    return partial_trace(full, dims, {1});
  }
  double k_of(const Matrix& t) const {
    return -entropy_bits(t) - (t * a_op).trace().real() + entropy_bits(tau_b(t));
  }
  double l0_of(const Matrix& t) const {
    return -entropy_bits(t) - (t * b_op).trace().real();
  }
  double j_of(const Matrix& t, double mu) const {
    return l0_of(t) - mu * k_of(t);
  }
  // Analytic gradient of j (additive multiples of the identity dropped; the
  // projected certificate removes them anyway):
  //   (1-mu) log2 t + (mu a_op - b_op) + mu iso^dag (I x log2 tau_B) iso.
  Matrix grad_j(const Matrix& t, double mu) const {
    const Matrix ts = sanitize_state(t);
    const Matrix full = iso * ts * iso.adjoint();
    const Matrix tb = partial_trace(full, dims, {1});
    Matrix g = (1.0 - mu) * floored_log2(ts) + (mu * a_op - b_op);
    g += mu * (iso.adjoint() *
               tensor_product(Matrix::Identity(dims[0], dims[0]),
                              floored_log2(tb)) *
               iso);
    return g;
  }
};

struct SweepState {
  std::vector<TauBlock> blocks;
  const SolveOptions* opts;

  // Minimizes the Lagrangian at multiplier mu; returns (K, L0) aggregates.
  std::pair<double, double> solve_at(double mu) {
    double k = 0.0, l0 = 0.0;
    for (auto& b : blocks) {
      if (b.q == 0.0) continue;
      if (mu == 0.0) {
        b.tau = b.tau0;
      } else if (b.iso.cols() > 1) {
        auto sol = mirror_descent(
            [&](const Matrix& t) { return b.j_of(sanitize_state(t), mu); },
            [&](const Matrix& t) { return b.grad_j(t, mu); }, b.tau,
            opts->inner_tol, opts->max_inner);
        if (!sol.converged)
          throw SolverError("variational solve stalled at gradient norm " +
                            std::to_string(sol.grad_norm));
        b.tau = sol.x;
      } else {
        b.tau = Matrix::Identity(1, 1);
      }
      k += b.q * b.k_of(b.tau);
      l0 += b.q * b.l0_of(b.tau);
    }
    return {k, l0};
  }

  std::vector<DensityOperator> assignment() const {
    std::vector<DensityOperator> taus;
    for (const auto& b : blocks)
      taus.emplace_back(b.iso * b.tau * b.iso.adjoint(), b.dims);
    return taus;
  }
};

SweepState build_sweep(const QuantumChannel& n, const StateEnsemble& ens,
                       const SolveOptions& opts) {
  SweepState sw;
  sw.opts = &opts;
  for (const auto& item : ens.items) {
    const DensityOperator out = apply_channel(n, item.state.density(), 1);
    TauBlock b;
    b.q = item.weight;
    b.dims = out.dims;
    b.iso = support_isometry(out.mat);
    const Matrix psi_a = partial_trace(out, {0}).mat;
    const Matrix log_a = matrix_log2(psi_a, true);
    const Matrix log_out = matrix_log2(out.mat, true);
    const Index db = out.dims[1];
    b.a_op = b.iso.adjoint() *
             tensor_product(log_a, Matrix::Identity(db, db)) * b.iso;
    b.b_op = b.iso.adjoint() * log_out * b.iso;
    b.tau0 = sanitize_state(b.iso.adjoint() * out.mat * b.iso);
    b.tau = b.tau0;
    sw.blocks.push_back(std::move(b));
  }
  return sw;
}

// Bisects the multiplier in [lo, hi] for K(mu) = rate; K is nondecreasing
// along the parametric path. Returns (mu, K, L0).
std::tuple<double, double, double> bisect_k(SweepState& sw, double rate, double lo,
                                            double hi) {
  double klo = sw.solve_at(lo).first;
  for (int it = 0; it < 80; ++it) {
    const double mid = (lo + hi) / 2.0;
    auto [k, l0] = sw.solve_at(mid);
    if (std::abs(k - rate) < 1e-10 || hi - lo < 1e-13) return {mid, k, l0};
    if (k < rate) {
      lo = mid;
      klo = k;
    } else {
      hi = mid;
    }
  }
  (void)klo;
  const auto [k, l0] = sw.solve_at((lo + hi) / 2.0);
  return {(lo + hi) / 2.0, k, l0};
}

}  // namespace

SplitResult f1_f2_split(const QuantumChannel& n, double rate, const StateEnsemble& ens,
                        const SolveOptions& opts) {
  ens.validate();
  if (!(rate >= 0.0)) throw DomainError("f1_f2_split: rate must be >= 0");
  SweepState sw = build_sweep(n, ens, opts);
  const auto [k0, l00] = sw.solve_at(0.0);
  const auto [k1, l01] = sw.solve_at(1.0);

  SplitResult out;
  if (k0 >= rate - 1e-10) {
    out.f1 = 0.0;  // tau = N(psi) already satisfies the constraint
  } else if (k1 >= rate) {
    auto [mu, k, l0] = bisect_k(sw, rate, 0.0, 1.0);
    (void)mu;
    (void)k;
    out.f1 = l0;
  } else {
    out.f1_infinite = true;  // the constraint set is out of the sweep's reach
    out.f1 = kInf;
  }

  if (k1 <= rate + 1e-10) {
    out.f2 = rate - k1 + l01;
  } else if (k0 <= rate) {
    auto [mu, k, l0] = bisect_k(sw, rate, 0.0, 1.0);
    (void)mu;
    out.f2 = rate - k + l0;
  } else {
    // Constraint active below the mu = 0 point; continue the sweep to
    // negative multipliers.
    double lo = -8.0, hi = 0.0;
    const double klo = sw.solve_at(lo).first;
    if (klo > rate) {
      out.f2 = kInf;
    } else {
      auto [mu, k, l0] = bisect_k(sw, rate, lo, hi);
      (void)mu;
      out.f2 = rate - k + l0;
    }
  }
  out.min = std::min(out.f1_infinite ? kInf : out.f1, out.f2);
  return out;
}

VariationalResult variational_F(const QuantumChannel& n, double rate,
                                const StateEnsemble& ens, const SolveOptions& opts) {
  ens.validate();
  if (!(rate >= 0.0)) throw DomainError("variational_F: rate must be >= 0");
  SweepState sw = build_sweep(n, ens, opts);
  const auto [k0, l00] = sw.solve_at(0.0);

  VariationalResult out;
  if (k0 >= rate - 1e-10) {
    // kink-inactive branch attains 0 at tau = N(psi)
    out.value = 0.0;
    out.assignment.tau = sw.assignment();
    return out;
  }
  const auto [k1, l01] = sw.solve_at(1.0);
  double branch_active;  // kink active: R - K + L0 with K <= R
  std::vector<DensityOperator> taus_active;
  if (k1 <= rate + 1e-10) {
    branch_active = rate - k1 + l01;
    taus_active = sw.assignment();
  } else {
    auto [mu, k, l0] = bisect_k(sw, rate, 0.0, 1.0);
    (void)mu;
    branch_active = rate - k + l0;
    taus_active = sw.assignment();
  }
  // kink-inactive branch: L0 under K >= R; reachable only if K(1) >= R
  double branch_inactive = kInf;
  std::vector<DensityOperator> taus_inactive;
  if (k1 >= rate) {
    auto [mu, k, l0] = bisect_k(sw, rate, 0.0, 1.0);
    (void)mu;
    (void)k;
    branch_inactive = l0;
    taus_inactive = sw.assignment();
  }
  if (branch_inactive < branch_active) {
    out.value = branch_inactive;
    out.assignment.tau = std::move(taus_inactive);
  } else {
    out.value = branch_active;
    out.assignment.tau = std::move(taus_active);
  }
  return out;
}

}  // namespace eact
