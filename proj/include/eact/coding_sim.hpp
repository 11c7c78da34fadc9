#pragma once

#include <vector>

#include "eact/operator_core.hpp"
#include "eact/types.hpp"

namespace eact {

struct HeisenbergWeylIndex {
  Index d = 2;
  Index y = 0;
  Index z = 0;
};

/// V_{y,z} = sum_x e^{2 pi i x z / d} |x + y mod d><x|.
Matrix heisenberg_weyl(const HeisenbergWeylIndex& idx);

/// Block structure of the shared entangled state: the sender space splits
/// into contiguous blocks, each sharing a maximally entangled state of the
/// block dimension with the receiver, mixed with the given weights.
struct BlockSpec {
  double weight = 1.0;
  Index dim = 2;
};

/// Entanglement-assisted code with per-copy, per-block random Heisenberg-Weyl
/// encoders (applied transposed on the sender side) and a square-root
/// measurement decoder over the induced signal states.
struct EACode {
  Index message_count = 0;    // M actually carrying information
  Index padded_count = 0;     // >= message_count after rate padding (0 = none)
  Index blocklength = 0;      // channel uses n
  Index d_in = 0, d_out = 0;  // per-copy channel dims; receiver share dim = d_in
  std::vector<BlockSpec> blocks;
  DensityOperator shared;     // per-copy shared state on A x B~
  // encoders[m][i]: unitary applied to the sender share of copy i (already
  // transposed per the maximally-entangled transfer identity)
  std::vector<std::vector<Matrix>> encoders;
  // untransposed block factors, for the receiver-side evaluation
  std::vector<std::vector<Matrix>> encoders_untransposed;
  std::vector<std::vector<std::array<Index, 2>>> hw_indices;  // flattened (y, z) per block
  bool rate_warning = false;  // M exceeded the distinguishable-dimension bound
  unsigned seed = 0;

  Index total_messages() const { return padded_count > 0 ? padded_count : message_count; }
};

/// Builds the code: M = floor(2^{n R}) messages, encoder tuples drawn
/// uniformly without replacement over the block Heisenberg-Weyl factors
/// (falling back to replacement once the family is exhausted).
EACode build_ea_code(const QuantumChannel& n, Index blocklength, double rate,
                     unsigned seed, const std::vector<BlockSpec>& blocks = {});

/// Pads the code to `m_total` messages; the extra messages always fail, so
/// the success probability scales by exactly M' / M.
EACode pad_code(const EACode& code, Index m_total);

/// Exact average success probability of the square-root-measurement decoder.
/// With `receiver_side` set, the encoders act untransposed on the receiver
/// share instead; the two evaluations agree on maximally entangled blocks.
double success_probability(const QuantumChannel& n, const EACode& code,
                           bool receiver_side = false);

/// One decoder POVM element (computed on demand; they are large).
Matrix decoder_element(const QuantumChannel& n, const EACode& code, Index m);

/// Quantum code: CPTP encoder (M x A~) -> A, CPTP decoder (B x B~) -> M.
struct QuantumCode {
  Index k = 1;                // message dimension
  DensityOperator shared;     // on A~ x B~
  QuantumChannel encoder;
  QuantumChannel decoder;
};

/// F(D o N o E (Psi_{M'M} x rho_shared), Psi_{M'M}).
double entanglement_fidelity(const QuantumChannel& n, const QuantumCode& code);

struct SimulationRecord {
  Index blocklength = 0;
  Index messages = 0;
  double p_success = 0.0;
  unsigned seed = 0;
};

struct ExponentFit {
  double slope = 0.0;
  double residual = 0.0;
  int points_used = 0;
  std::vector<Index> dropped;  // blocklengths with P_s = 0
};

struct SimulationResult {
  double rate = 0.0;
  unsigned seed = 0;
  std::vector<SimulationRecord> records;
  ExponentFit fit;
};

/// Builds and evaluates one code per blocklength, then fits the decay slope.
SimulationResult simulate(const QuantumChannel& n, double rate,
                          const std::vector<Index>& blocklengths, unsigned seed,
                          const std::vector<BlockSpec>& blocks = {});

/// Least-squares slope of -log2 P_s against n (affine fit); records with
/// P_s = 0 are dropped. Requires >= 3 usable points.
ExponentFit empirical_exponent(const std::vector<SimulationRecord>& records);

}  // namespace eact
