// Strong Maltsev conditions as finite identity systems, operation tables,
// and the searches deciding whether a digraph admits polymorphisms
// satisfying them.

#ifndef VARKIT_CONDITIONS_HPP_
#define VARKIT_CONDITIONS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "varkit/structures.hpp"

namespace varkit {

/// A variable or a function symbol applied to argument terms.
struct Term {
  bool is_variable = true;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string name) { return {true, std::move(name), {}}; }
  static Term app(std::string symbol, std::vector<Term> args) {
    return {false, std::move(symbol), std::move(args)};
  }
  bool operator==(const Term&) const = default;

  std::string to_string() const;
};

struct IdentitySystem {
  std::vector<std::pair<std::string, unsigned>> signature;  // (symbol, arity)
  std::vector<std::pair<Term, Term>> identities;
  std::vector<std::string> variables;  // ordered union of variables used

  unsigned arity_of(const std::string& symbol) const;
  /// Throws if a symbol is undeclared or applied with the wrong arity.
  void validate() const;
};

/// Finitary operation as a flat table, arguments encoded lexicographically
/// with the first argument most significant.
struct OperationTable {
  unsigned arity = 0;
  Vertex universe = 0;
  std::vector<Vertex> values;

  OperationTable() = default;
  OperationTable(unsigned arity, Vertex universe, std::vector<Vertex> values);

  Vertex apply(std::span<const Vertex> args) const;
  std::uint64_t cell_count() const { return values.size(); }
  bool operator==(const OperationTable&) const = default;
};

using TableSet = std::map<std::string, OperationTable>;

Vertex eval_term(const Term& t, const std::map<std::string, Vertex>& assignment,
                 const TableSet& tables);

struct IdentityFailure {
  std::size_t identity_index = 0;
  std::map<std::string, Vertex> assignment;
  Vertex lhs = 0, rhs = 0;
};

/// Exhaustive check over all assignments of variables to {0..n-1}.
/// Returns the first counterexample, or nothing if every identity holds.
/// Throws cap_exceeded when the assignment space is over `budget`.
std::optional<IdentityFailure> check_identities(const TableSet& tables,
                                                const IdentitySystem& sys, Vertex universe,
                                                std::uint64_t budget = 20'000'000);

/// Checks that `table` preserves the edges of g (a homomorphism from the
/// power to g). Returns a violating edge tuple if not.
std::optional<std::vector<Edge>> polymorphism_violation(const OperationTable& table,
                                                        const Digraph& g,
                                                        std::uint64_t budget = 200'000'000);

// --- built-in conditions ------------------------------------------------

/// olsak | majority | maltsev | minority | product_decomposition(n) |
/// power_decomposition(n)
IdentitySystem builtin(const std::string& name);

/// Row pattern of a Taylor identity for one coordinate: entries are 0 for
/// x and 1 for y; position i carries x on the left, y on the right.
struct TaylorRow {
  std::vector<std::uint8_t> left, right;
};
IdentitySystem taylor_system(unsigned arity, const std::vector<TaylorRow>& rows);

// --- identity DSL -------------------------------------------------------

// Text format: header "symbols: f/3, g/1" followed by one identity per
// line, e.g. "f(x,y,y) = x". Parse errors carry line numbers.
IdentitySystem parse_identity_system(const std::string& text);

// --- searches ------------------------------------------------------------

struct PolymorphismSearchOptions {
  std::uint64_t node_cap = 0;  // 0 = unlimited; exceeded -> cap_exceeded
};

struct PolymorphismSearchResult {
  std::optional<TableSet> tables;
  std::uint64_t explored_nodes = 0;

  bool found() const { return tables.has_value(); }
};

/// Exhaustive, deterministic search for tables that are polymorphisms of g
/// and satisfy the identity system. Absence is a certificate of
/// nonexistence, with the node count reported for regression tracking.
PolymorphismSearchResult find_polymorphisms(const Digraph& g, const IdentitySystem& sys,
                                            const PolymorphismSearchOptions& opts = {});

struct TaylorWitness {
  unsigned arity = 0;
  std::vector<TaylorRow> rows;
  TableSet tables;
};

/// Iterates arities 2..max_arity and canonical row patterns, returning the
/// first satisfiable Taylor instance.
std::optional<TaylorWitness> search_taylor(const Digraph& g, unsigned max_arity);

/// A binary polymorphism f of g together with a unit element e such that
/// f(e,x) = f(x,e) = x for all x, found exhaustively.
std::optional<std::pair<OperationTable, Vertex>> find_binary_with_unit(const Digraph& g);

}  // namespace varkit

#endif  // VARKIT_CONDITIONS_HPP_
