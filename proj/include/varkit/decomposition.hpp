// Constructive product/power decompositions of digraphs: the factor
// kernels induced by a decomposition polymorphism, the factorization
// isomorphism, and the n-th power test.

#ifndef VARKIT_DECOMPOSITION_HPP_
#define VARKIT_DECOMPOSITION_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "varkit/conditions.hpp"
#include "varkit/structures.hpp"

namespace varkit {

struct DecompositionWitness {
  unsigned n = 0;
  OperationTable f;
  std::optional<OperationTable> shift;  // present for power decompositions
  std::vector<Partition> nus;           // one factor kernel per coordinate
  std::vector<Digraph> factors;
  // product case: a -> product(factors); power case: a -> power(base, n),
  // both with lexicographic tuple encoding
  VertexMap iso;

  const Digraph& base() const { return factors.front(); }
};

/// Factor kernels of a decomposition polymorphism: partition i relates x,y
/// iff f(x,...,x,y,x,...,x) = x with y in position i. Preconditions
/// (idempotence, composition identity, edge preservation) are checked and
/// reported. With verify_exhaustive the kernels are cross-checked against
/// the witness-tuple definition over all tuples.
std::vector<Partition> nu_equivalences(const Digraph& a, const OperationTable& f,
                                       bool verify_exhaustive = false);

DecompositionWitness product_decompose(const Digraph& a, const OperationTable& f);

DecompositionWitness power_decompose(const Digraph& a, const OperationTable& f,
                                     const OperationTable& g);

struct NthPowerResult {
  std::optional<DecompositionWitness> witness;
  std::uint64_t explored_nodes = 0;

  bool found() const { return witness.has_value(); }
};

/// Searches for a power-decomposition polymorphism pair; absence certifies
/// that a is not an n-th power.
NthPowerResult is_nth_power(const Digraph& a, unsigned n);

}  // namespace varkit

#endif  // VARKIT_DECOMPOSITION_HPP_
