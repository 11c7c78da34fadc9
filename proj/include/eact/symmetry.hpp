#pragma once

#include <vector>

#include "eact/operator_core.hpp"
#include "eact/types.hpp"

namespace eact {

// Occupation counts over an alphabet of size d, summing to n.
using TypeVector = std::vector<Index>;

// All types of length-n strings over alphabet d, lexicographic order.
std::vector<TypeVector> enumerate_types(Index n, Index d);

// Number of strings with the given type (multinomial coefficient).
double type_class_size(const TypeVector& t);

struct TypeComponent {
  TypeVector type;
  double weight;       // q(t) = sum of Schmidt-coefficient products over the class
  PureState state;     // normalized |Psi^t> on A^n (x) A'^n, or empty if weight 0
};

// Schmidt-decompose |psi>^(x)n on (A A')^n into maximally-entangled-like type
// components: |psi>^n = sum_t sqrt(q(t)) |Psi^t>, after regrouping A^n A'^n.
// `psi` is a state on A (x) A' with equal local dimensions.
std::vector<TypeComponent> type_decomposition(const PureState& psi, Index n);

// Unitary permuting n d-dimensional factors: position j of the output string
// holds symbol x_{perm^{-1}(j)}.
Matrix permutation_unitary(const std::vector<Index>& perm, Index d);

struct UniversalSymmetricState {
  DensityOperator state;   // on (C^d)^(x)n
  double v;                // constructive universality constant
  Index component_count;   // number of isotypic components
};

// Permutation-invariant state sigma^u with rho^(x)n <= v * sigma^u for every
// single-system state rho, built from the isotypic decomposition of (C^d)^(x)n.
UniversalSymmetricState universal_symmetric_state(Index n, Index d);

// Pinching of the n-fold tensor power of `channel` by the universal symmetric
// state on the output space.
QuantumChannel pinched_channel(const QuantumChannel& channel, Index n);

}  // namespace eact
