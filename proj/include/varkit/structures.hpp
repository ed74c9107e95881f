// Finite digraphs and the constructions performed on them: powers,
// products, disjoint unions, spanned subdigraphs, components, quotients
// and isomorphism. All values are immutable after construction.

#ifndef VARKIT_STRUCTURES_HPP_
#define VARKIT_STRUCTURES_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace varkit {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

// Default ceiling for materialized vertex/edge sets. Constructions that
// would exceed it throw cap_exceeded instead of truncating.
inline constexpr std::uint64_t kDefaultSizeCap = 50'000'000;

struct cap_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite digraph with 0-based positional vertex identity. Two digraphs
/// are equal iff vertex counts and edge sets are equal.
class Digraph {
 public:
  Digraph() = default;
  Digraph(Vertex vertex_count, std::vector<Edge> edges);

  Vertex vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }  // sorted
  std::uint64_t edge_count() const { return edges_.size(); }

  bool has_edge(Vertex u, Vertex v) const;
  std::span<const Vertex> out_neighbors(Vertex u) const;
  std::span<const Vertex> in_neighbors(Vertex u) const;
  std::size_t out_degree(Vertex u) const { return out_neighbors(u).size(); }
  std::size_t in_degree(Vertex u) const { return in_neighbors(u).size(); }

  bool operator==(const Digraph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  Vertex n_ = 0;
  std::vector<Edge> edges_;
  // CSR adjacency in both directions.
  std::vector<Vertex> out_flat_, in_flat_;
  std::vector<std::uint32_t> out_off_, in_off_;
};

/// Total map between vertex sets.
struct VertexMap {
  Vertex source_count = 0;
  Vertex target_count = 0;
  std::vector<Vertex> image;

  VertexMap() = default;
  VertexMap(Vertex source, Vertex target, std::vector<Vertex> img);
  static VertexMap identity(Vertex n);

  Vertex operator()(Vertex v) const { return image[v]; }
  bool operator==(const VertexMap&) const = default;
};

/// Equivalence relation on {0..n-1}. Block ids are contiguous from 0 and
/// assigned in order of first occurrence, so blocks are sorted by least
/// element.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<Vertex> block_of);  // relabels canonically

  static Partition discrete(Vertex n);
  static Partition total(Vertex n);

  Vertex universe_size() const { return static_cast<Vertex>(block_of_.size()); }
  Vertex block_count() const { return blocks_; }
  Vertex block_of(Vertex v) const { return block_of_[v]; }
  const std::vector<Vertex>& labels() const { return block_of_; }
  std::vector<std::vector<Vertex>> blocks() const;
  bool same_block(Vertex u, Vertex v) const { return block_of_[u] == block_of_[v]; }

  /// true iff every block of *this lies inside a block of other.
  bool refines(const Partition& other) const;

  static Partition meet(const Partition& p, const Partition& q);
  static Partition join(const Partition& p, const Partition& q);

  bool operator==(const Partition&) const = default;

 private:
  std::vector<Vertex> block_of_;
  Vertex blocks_ = 0;
};

// --- fixed structures -------------------------------------------------

/// The reflexive directed 3-cycle on {0,1,2}.
Digraph make_c();
/// make_c() plus an isolated loop vertex 3.
Digraph make_c1();
/// Single vertex with a loop.
Digraph make_loop();
/// Two vertices, edge 0->1, loops on both.
Digraph make_reflexive_edge();

// --- constructions ----------------------------------------------------

Digraph power(const Digraph& g, unsigned k, std::uint64_t cap = kDefaultSizeCap);
Digraph product(const std::vector<Digraph>& gs, std::uint64_t cap = kDefaultSizeCap);
Digraph disjoint_union(const std::vector<Digraph>& gs);

struct SpannedSubdigraph {
  Digraph graph;
  VertexMap embedding;  // new vertex -> original vertex, ascending
};
SpannedSubdigraph spanned_subdigraph(const Digraph& g, const std::vector<Vertex>& s);

/// Classes of the reflexive-symmetric-transitive closure of the edge
/// relation, sorted by least element.
std::vector<std::vector<Vertex>> components(const Digraph& g);

Digraph quotient(const Digraph& g, const Partition& p);

/// Edge-preserving bijection with edge-preserving inverse, or nothing.
/// Deterministic: the first map in lexicographic search order.
std::optional<VertexMap> is_isomorphic(const Digraph& g, const Digraph& h);

struct StructurePredicates {
  bool reflexive;
  bool antisymmetric;
  // every non-loop edge (u,v) admits at most one w, pairwise distinct from
  // u and v, with v->w->u
  bool unique_triangle;
};
StructurePredicates structure_predicates(const Digraph& g);

bool is_connected(const Digraph& g);

// --- serialization ----------------------------------------------------

// {"vertices": n, "edges": [[u,v],...]}; edges sorted on write, any order
// accepted on read, duplicates and out-of-range entries rejected.
Digraph digraph_from_json(const std::string& text);
std::string digraph_to_json(const Digraph& g);

}  // namespace varkit

#endif  // VARKIT_STRUCTURES_HPP_
