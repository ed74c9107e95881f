// Scalable checks for tables against the decomposition identities. The
// composition identity quantifies over an n x n variable matrix, which is
// far too large to enumerate on bigger universes; given idempotence it is
// equivalent to the per-coordinate absorption laws
//
//   f(w_1,...,f(u_1..u_n) at i,...,w_n) = f(w_1,...,u_i at i,...,w_n)
//
// which reduce to: f(u) lies in the same column-equality class as u_i. The
// checks below run in O(arity * table size).

#ifndef VARKIT_DETAIL_DECOMP_CHECK_HPP_
#define VARKIT_DETAIL_DECOMP_CHECK_HPP_

#include <optional>
#include <string>
#include <vector>

#include "varkit/conditions.hpp"
#include "varkit/structures.hpp"

namespace varkit::detail {

/// For each coordinate i, the partition relating p,q whenever the table's
/// column functions at position i agree: f(w, p at i) = f(w, q at i) for
/// every w. For product decomposition operations these are the factor
/// kernels.
std::vector<Partition> column_partitions(const OperationTable& f);

/// Empty when f is idempotent, satisfies the composition identity, and
/// preserves the edges of a; otherwise a description of the first failure.
/// Edge preservation is certified through the induced factorization: the
/// map x -> (block_1(x),...,block_n(x)) must be a bijection onto the
/// product of the quotients whose inverse pulls product edges back to
/// edges of a.
std::optional<std::string> decomposition_violation(const Digraph& a, const OperationTable& f);

}  // namespace varkit::detail

#endif  // VARKIT_DETAIL_DECOMP_CHECK_HPP_
