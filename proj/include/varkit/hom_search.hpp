// Backtracking digraph homomorphism engine: existence, enumeration,
// retraction search, and the classifier that factors homomorphisms out of
// powers of the reflexive triangle through a projection.

#ifndef VARKIT_HOM_SEARCH_HPP_
#define VARKIT_HOM_SEARCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "varkit/structures.hpp"

namespace varkit {

struct HomProblem {
  Digraph source;
  Digraph target;
  // partial map fixed in advance; must be consistent (a function)
  std::vector<std::pair<Vertex, Vertex>> pins;
};

/// true iff every edge (u,v) of g maps to an edge (f u, f v) of h.
bool is_homomorphism(const VertexMap& f, const Digraph& g, const Digraph& h);

/// All homomorphisms extending the pins, in lexicographic order of the
/// image array, truncated at limit. Backtracking over source vertices in
/// ascending index order with arc-consistency propagation rerun to
/// fixpoint after each assignment.
std::vector<VertexMap> enumerate_homomorphisms(
    const HomProblem& p, std::optional<std::uint64_t> limit = std::nullopt);

std::optional<VertexMap> find_homomorphism(const HomProblem& p);

/// A homomorphism g -> g fixing `sub` pointwise with image exactly `sub`.
std::optional<VertexMap> find_retraction(const Digraph& g, const std::vector<Vertex>& sub);

/// Outcome of factoring a homomorphism f : C^k -> h through the
/// projection onto the coordinates f depends on.
struct PowerHomClassification {
  enum class Status {
    classified,      // f = iota . pi_J with iota an isomorphism onto the image
    not_applicable,  // h is not antisymmetric / fails the unique-triangle test
    violation,       // verification failed; witness describes where
  };
  Status status = Status::not_applicable;
  std::vector<unsigned> coords;  // J, ascending
  VertexMap iota;                // C^|J| -> h
  std::string witness;

  bool classified() const { return status == Status::classified; }
};

/// f must be a homomorphism power(C,k) -> h (checked).
PowerHomClassification classify_power_hom(const VertexMap& f, unsigned k, const Digraph& h);

}  // namespace varkit

#endif  // VARKIT_HOM_SEARCH_HPP_
