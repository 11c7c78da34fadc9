#pragma once

#include <functional>
#include <string>

#include "eact/divergence.hpp"
#include "eact/operator_core.hpp"

namespace eact {

/// Ensemble of bipartite pure states with weights summing to one.
struct StateEnsemble {
  struct Item {
    double weight;
    PureState state;
  };
  std::vector<Item> items;

  StateEnsemble() = default;
  explicit StateEnsemble(std::vector<Item> list) : items(std::move(list)) { validate(); }
  void validate() const;
};

struct SolveOptions {
  double inner_tol = 1e-7;   // projected-gradient norm for sigma_B minimizations
  double outer_tol = 1e-6;   // projected-gradient norm for input maximizations
  int max_inner = 4000;
  int max_outer = 1000;
  int restarts = 3;
  unsigned seed = 99991;
};

/// Result of a single density-matrix optimization.
struct MirrorResult {
  Matrix x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f over density operators of the given dimension by exponentiated
/// gradient descent; gradients by central finite differences (step 1e-5) on a
/// Hermitian operator basis. The convergence certificate is the projected
/// gradient norm ||sqrt(x)(G - tr(xG)I)sqrt(x)||_F <= tol.
MirrorResult minimize_over_states(const std::function<double(const Matrix&)>& f,
                                  const Matrix& x0, double tol, int max_iter);

struct MutualInfoResult {
  double value = 0.0;
  Matrix sigma;  // argmin on B
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// I*_alpha(A:B) = min_{sigma_B} D*_alpha(rho_AB || rho_A x sigma_B).
/// `warm` (a state on B) seeds the minimizer when provided.
MutualInfoResult sandwiched_mutual_info(const DensityOperator& rho_ab, RenyiOrder order,
                                        const Matrix* warm = nullptr,
                                        const SolveOptions& opts = {});

struct ChannelInfoResult {
  double value = 0.0;
  Matrix rho;    // argmax input state on A'
  Matrix sigma;  // matching inner argmin on B
  double grad_norm = 0.0;
  long inner_iterations = 0;
  int outer_iterations = 0;
  bool converged = false;
  double restart_spread = 0.0;  // max - min over converged restarts
};

struct ChannelInfoWarmStart {
  Matrix rho;
  Matrix sigma;
};

/// I*_alpha(N) = max over inputs rho on A' of the output Renyi mutual
/// information at psi(rho). Restarts: maximally mixed, fixed perturbation,
/// seeded random; a warm start replaces the restart schedule.
ChannelInfoResult channel_renyi_info(const QuantumChannel& n, RenyiOrder order,
                                     const SolveOptions& opts = {},
                                     const ChannelInfoWarmStart* warm = nullptr);

/// Entanglement-assisted classical capacity C_E = max_rho I(A:B) at psi(rho).
ChannelInfoResult ea_capacity(const QuantumChannel& n, const SolveOptions& opts = {});

struct ExponentQuery {
  double rate = 1.0;            // bits per channel use, > 0
  double window_delta = 1e-4;   // lambda window [delta, 1 - delta]
  double lambda_tol = 1e-6;     // golden-section window width at termination
  SolveOptions solve;
};

struct ExponentResult {
  double sc = 0.0;
  double lambda_star = 0.0;
  double alpha_star = 1.0;
  Matrix rho_star;              // optimizing input at lambda_star
  double truncation_bound = 0.0;
  long inner_iterations = 0;
  std::string status = "ok";
  std::vector<std::pair<double, double>> trace;  // (lambda, objective) evaluations
};

/// sc(N, R) = sup over the lambda window of lambda (R - I*_{1/(1-lambda)}(N)),
/// clamped at 0; golden-section search on the concave objective with warm
/// starts shared across evaluations.
ExponentResult strong_converse_exponent(const QuantumChannel& n, const ExponentQuery& q);

/// Quantum-feedback-assisted classical communication: same exponent.
ExponentResult feedback_exponent(const QuantumChannel& n, const ExponentQuery& q);

/// Entanglement-assisted quantum communication:
/// sup_alpha (alpha-1)/alpha (R - I*_alpha(N)/2).
ExponentResult quantum_exponent(const QuantumChannel& n, const ExponentQuery& q);

enum class PfPsDirection { success_to_fidelity, fidelity_to_success };

/// (P_f*(k))^2 = P_s*(k^2): square root toward fidelity, square back.
double pf_ps_transform(double value, PfPsDirection direction);

/// I_flat_alpha(N, ens) = sum_t q(t) min_{sigma_B} D_flat_alpha(N(psi^t) ||
/// psi^t_A x sigma_B). The single-state overload wraps a one-item ensemble.
double log_euclidean_channel_info(const QuantumChannel& n, const StateEnsemble& ens,
                                  RenyiOrder order, const SolveOptions& opts = {});
double log_euclidean_channel_info(const QuantumChannel& n, const PureState& psi,
                                  RenyiOrder order, const SolveOptions& opts = {});

/// F(N, R, ens) = sup_{alpha > 1} (alpha-1)/alpha {R - I_flat_alpha(N, ens)},
/// computed over the lambda window of the query.
double exponent_candidate_F(const QuantumChannel& n, double rate, const StateEnsemble& ens,
                            const ExponentQuery& q = {});

struct VariationalAssignment {
  std::vector<DensityOperator> tau;  // per ensemble index, on A x B
  bool feasible = true;              // supp(tau^t) within supp(N(psi^t))
};

struct VariationalResult {
  double value = 0.0;
  VariationalAssignment assignment;
};

/// min over assignments {tau^t} of
///   (R - sum_t q D(tau || psi_A x tau_B))_+ + sum_t q D(tau || N(psi^t)),
/// the positive-part kink handled by solving both smooth branches.
VariationalResult variational_F(const QuantumChannel& n, double rate,
                                const StateEnsemble& ens, const SolveOptions& opts = {});

struct SplitResult {
  double f1 = 0.0;  // +infinity represented by f1_infinite
  bool f1_infinite = false;
  double f2 = 0.0;
  double min = 0.0;
};

/// Constrained split: F1 = inf { L0 : K >= R }, F2 = inf { R - K + L0 : K <= R }
/// with K = sum q D(tau || psi_A x tau_B) and L0 = sum q D(tau || N(psi^t)),
/// solved by a parametric Lagrange-multiplier sweep.
SplitResult f1_f2_split(const QuantumChannel& n, double rate, const StateEnsemble& ens,
                        const SolveOptions& opts = {});

}  // namespace eact
