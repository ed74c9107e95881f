// Exhaustive CSP search for operation tables that are polymorphisms of a
// digraph and satisfy an identity system.
//
// One variable per table cell, domains as 64-bit masks. Linear identities
// are compiled into a union-find over cells before the search. Nested
// identities of the decomposition family are recognized structurally and
// become propagators: the composition identity turns into per-coordinate
// element merging (two elements whose columns are forced equal collapse,
// which merges whole table columns), unary power identities into orbit
// constraints, and the shift identity into forced assignments once the
// unary table is decided. Everything else is enforced at the leaves.
//
// Edge preservation runs in one of four modes per symbol, chosen by size:
// materialized arc consistency, on-assignment neighborhood checks, checks
// against neighbors one coordinate step away (sound for reflexive
// structures), or leaf-only verification.

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>

#include "varkit/conditions.hpp"
#include "varkit/detail/decomp_check.hpp"
#include "varkit/indexing.hpp"

namespace varkit {

namespace {

constexpr Vertex kMaxEngineUniverse = 64;
constexpr std::uint64_t kMaxEngineCells = 50'000'000;
constexpr std::uint64_t kEagerPairBudget = 2'000'000;
constexpr std::uint64_t kNeighborProductBudget = 8'192;
constexpr std::uint64_t kLinearInstanceBudget = 10'000'000;
constexpr std::uint64_t kLeafEdgeBudget = 400'000'000;

enum class EdgeMode : std::uint8_t { eager, full_neighbor, unit_move, none };

struct SymbolInfo {
  std::string name;
  unsigned arity = 0;
  std::uint64_t cells = 0;
  std::uint64_t base = 0;
  EdgeMode mode = EdgeMode::none;
  bool absorb = false;
  std::vector<std::uint64_t> strides;  // strides[i] = m^(arity-1-i)
};

struct PowerRule {
  unsigned sym = 0;
  unsigned exponent = 0;
};

struct RotationRule {
  unsigned g_sym = 0;
  unsigned f_sym = 0;
  std::vector<unsigned> perm;  // RHS argument j applies g to LHS variable perm[j]
};

// f absorb + g^n = id + rotation linking them: solutions make the structure
// an n-th power with g conjugate to the coordinate shift on base^n
struct PowerSystem {
  unsigned f_sym = 0;
  unsigned g_sym = 0;
  unsigned n = 0;
  Vertex root = 0;  // n-th root of the universe size
};

struct TrailRec {
  enum Kind : std::uint8_t { kAssign, kDomain, kCellUnion, kElemUnion, kInv };
  Kind kind;
  std::uint32_t a = 0, b = 0;
  std::uint64_t old_domain = 0;
  std::int16_t old_value = 0;
  std::uint32_t old_tail = 0;
  std::uint8_t slot = 0, coord = 0;
};

bool is_shallow(const Term& t) {
  if (t.is_variable) return true;
  for (const auto& a : t.args)
    if (!a.is_variable) return false;
  return true;
}

bool match_composition(const Term& lhs, const Term& rhs, std::string& fname) {
  if (lhs.is_variable || rhs.is_variable || lhs.name != rhs.name) return false;
  const std::size_t n = lhs.args.size();
  if (n == 0 || rhs.args.size() != n) return false;
  std::vector<std::vector<std::string>> matrix(n);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const Term& row = lhs.args[i];
    if (row.is_variable || row.name != lhs.name || row.args.size() != n) return false;
    for (const auto& arg : row.args) {
      if (!arg.is_variable || !seen.insert(arg.name).second) return false;
      matrix[i].push_back(arg.name);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!rhs.args[i].is_variable || rhs.args[i].name != matrix[i][i]) return false;
  fname = lhs.name;
  return true;
}

bool match_power(const Term& lhs, const Term& rhs, std::string& gname, unsigned& exponent) {
  if (!rhs.is_variable) return false;
  const Term* t = &lhs;
  unsigned depth = 0;
  std::string sym;
  while (!t->is_variable) {
    if (t->args.size() != 1) return false;
    if (depth == 0) sym = t->name;
    else if (t->name != sym) return false;
    ++depth;
    t = &t->args[0];
  }
  if (depth < 2 || t->name != rhs.name) return false;
  gname = sym;
  exponent = depth;
  return true;
}

bool match_rotation(const Term& lhs, const Term& rhs, std::string& gname, std::string& fname,
                    std::vector<unsigned>& perm) {
  if (lhs.is_variable || lhs.args.size() != 1 || lhs.args[0].is_variable) return false;
  const Term& inner = lhs.args[0];
  if (inner.args.empty()) return false;
  const std::size_t n = inner.args.size();
  std::vector<std::string> vars;
  std::set<std::string> seen;
  for (const auto& a : inner.args) {
    if (!a.is_variable || !seen.insert(a.name).second) return false;
    vars.push_back(a.name);
  }
  if (rhs.is_variable || rhs.name != inner.name || rhs.args.size() != n) return false;
  perm.assign(n, 0);
  std::vector<bool> used(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    const Term& a = rhs.args[j];
    if (a.is_variable || a.name != lhs.name || a.args.size() != 1 || !a.args[0].is_variable)
      return false;
    auto it = std::find(vars.begin(), vars.end(), a.args[0].name);
    if (it == vars.end()) return false;
    auto idx = static_cast<unsigned>(it - vars.begin());
    if (used[idx]) return false;
    used[idx] = true;
    perm[j] = idx;
  }
  gname = lhs.name;
  fname = inner.name;
  return true;
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

class PolyEngine {
 public:
  PolyEngine(const Digraph& g, const IdentitySystem& sys, const PolymorphismSearchOptions& opts)
      : g_(g), sys_(sys), opts_(opts), m_(g.vertex_count()) {}

  PolymorphismSearchResult run() {
    PolymorphismSearchResult result;
    sys_.validate();
    if (m_ > kMaxEngineUniverse)
      throw cap_exceeded("find_polymorphisms: universe larger than 64 is not supported");
    if (m_ == 0) {
      TableSet tables;
      for (const auto& [name, arity] : sys_.signature)
        tables[name] = OperationTable(arity, 0, {});
      result.tables = std::move(tables);
      return result;
    }

    compile();
    if (compile_unsat_) return result;
    if (!apply_static() || !drain()) return result;
    if (!dfs(result)) result.tables.reset();
    result.explored_nodes = nodes_;
    return result;
  }

 private:
  // --- compilation -------------------------------------------------------

  void compile() {
    full_mask_ = m_ == 64 ? ~0ull : (1ull << m_) - 1;
    for (Vertex v = 0; v < m_; ++v) {
      out_mask_[v] = in_mask_[v] = 0;
    }
    loop_mask_ = 0;
    for (auto [u, v] : g_.edges()) {
      out_mask_[u] |= 1ull << v;
      in_mask_[v] |= 1ull << u;
      if (u == v) loop_mask_ |= 1ull << u;
    }
    reflexive_ = true;
    for (Vertex v = 0; v < m_; ++v)
      if (!g_.has_edge(v, v)) reflexive_ = false;

    std::uint64_t base = 0;
    for (const auto& [name, arity] : sys_.signature) {
      SymbolInfo info;
      info.name = name;
      info.arity = arity;
      auto cells = checked_pow(m_, arity, kMaxEngineCells);
      if (!cells || base + *cells > kMaxEngineCells)
        throw cap_exceeded("find_polymorphisms: table space over the engine cap");
      info.cells = *cells;
      info.base = base;
      base += *cells;
      info.strides.resize(arity);
      std::uint64_t s = 1;
      for (unsigned i = arity; i-- > 0;) {
        info.strides[i] = s;
        s *= m_;
      }
      symbols_.push_back(std::move(info));
    }
    total_cells_ = base;

    classify_identities();
    pick_edge_modes();
    build_eager_constraints();

    parent_.resize(total_cells_);
    std::iota(parent_.begin(), parent_.end(), 0);
    size_.assign(total_cells_, 1);
    value_.assign(total_cells_, -1);
    domain_.assign(total_cells_, full_mask_);
    member_next_.assign(total_cells_, UINT32_MAX);
    member_tail_.resize(total_cells_);
    std::iota(member_tail_.begin(), member_tail_.end(), 0);
    // members worth visiting when a class gains a value: everything except
    // cells of absorb symbols without incident constraints (those classes
    // can grow huge through column merging; the root representative and the
    // leaf factorization check cover them)
    w0_.assign(total_cells_, 0);
    ic0_.assign(total_cells_, 0);
    for (std::uint64_t c = 0; c < total_cells_; ++c) {
      bool absorb = symbols_[symbol_of_cell(c)].absorb;
      bool has_inc = incidence_off_[c + 1] > incidence_off_[c];
      w0_[c] = (!absorb || has_inc) ? 1 : 0;
      ic0_[c] = has_inc ? 1 : 0;
    }
    wsum_.assign(w0_.begin(), w0_.end());
    icsum_.assign(ic0_.begin(), ic0_.end());

    // branch order: smaller tables first, then declaration order
    branch_syms_.resize(symbols_.size());
    std::iota(branch_syms_.begin(), branch_syms_.end(), 0u);
    std::sort(branch_syms_.begin(), branch_syms_.end(), [&](unsigned a, unsigned b) {
      if (symbols_[a].cells != symbols_[b].cells) return symbols_[a].cells < symbols_[b].cells;
      return a < b;
    });
    branch_cum_.assign(branch_syms_.size() + 1, 0);
    for (std::size_t i = 0; i < branch_syms_.size(); ++i)
      branch_cum_[i + 1] = branch_cum_[i] + symbols_[branch_syms_[i]].cells;
  }

  unsigned symbol_index(const std::string& name) const {
    for (unsigned i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].name == name) return i;
    throw std::logic_error("poly engine: unknown symbol");
  }

  unsigned symbol_of_cell(std::uint64_t cell) const {
    for (unsigned i = 0; i < symbols_.size(); ++i)
      if (cell < symbols_[i].base + symbols_[i].cells) return i;
    throw std::logic_error("poly engine: cell out of range");
  }

  void classify_identities() {
    std::set<std::string> idempotent;
    std::vector<std::pair<Term, Term>> nested;
    for (const auto& [lhs, rhs] : sys_.identities) {
      if (is_shallow(lhs) && is_shallow(rhs)) {
        compile_linear(lhs, rhs);
        // remember idempotence laws for the composition recognizer
        if (!lhs.is_variable && rhs.is_variable) {
          bool all_same = true;
          for (const auto& a : lhs.args)
            if (!a.is_variable || a.name != rhs.name) all_same = false;
          if (all_same && !lhs.args.empty()) idempotent.insert(lhs.name);
        }
        if (!rhs.is_variable && lhs.is_variable) {
          bool all_same = true;
          for (const auto& a : rhs.args)
            if (!a.is_variable || a.name != lhs.name) all_same = false;
          if (all_same && !rhs.args.empty()) idempotent.insert(rhs.name);
        }
        continue;
      }
      nested.push_back({lhs, rhs});
    }

    generic_.signature = sys_.signature;
    for (const auto& [lhs, rhs] : nested) {
      std::string f, gsym;
      unsigned exponent = 0;
      std::vector<unsigned> perm;
      if (match_composition(lhs, rhs, f) || match_composition(rhs, lhs, f)) {
        composition_syms_.push_back(symbol_index(f));
        continue;
      }
      if (match_power(lhs, rhs, gsym, exponent) || match_power(rhs, lhs, gsym, exponent)) {
        if (symbols_[symbol_index(gsym)].arity == 1) {
          power_rules_.push_back({symbol_index(gsym), exponent});
          continue;
        }
      }
      if (match_rotation(lhs, rhs, gsym, f, perm) || match_rotation(rhs, lhs, gsym, f, perm)) {
        if (symbols_[symbol_index(gsym)].arity == 1) {
          rotation_rules_.push_back({symbol_index(gsym), symbol_index(f), perm});
          continue;
        }
      }
      generic_.identities.push_back({lhs, rhs});
      collect_vars(lhs, generic_.variables);
      collect_vars(rhs, generic_.variables);
    }

    // the column propagator is only equivalent to the composition identity
    // alongside idempotence; without it the identity stays generic
    for (auto sym : composition_syms_) {
      if (idempotent.count(symbols_[sym].name)) {
        symbols_[sym].absorb = true;
        AbsorbState st;
        st.sym = sym;
        st.parent.assign(static_cast<std::size_t>(symbols_[sym].arity) * m_, 0);
        for (unsigned i = 0; i < symbols_[sym].arity; ++i)
          for (Vertex v = 0; v < m_; ++v) st.parent[i * m_ + v] = v;
        st.size.assign(static_cast<std::size_t>(symbols_[sym].arity) * m_, 1);
        st.counts.assign(symbols_[sym].arity, m_);
        absorbs_.push_back(std::move(st));
      } else {
        // keep the raw identity as a leaf check
        for (const auto& [lhs, rhs] : nested) {
          std::string f2;
          if (match_composition(lhs, rhs, f2) && symbol_index(f2) == sym)
            generic_.identities.push_back({lhs, rhs});
        }
      }
    }

    // a full power-decomposition system forces the universe size to be a
    // perfect n-th power and pins the cycle type of the shift
    for (const auto& rr : rotation_rules_) {
      bool has_power = false;
      for (const auto& pr : power_rules_)
        if (pr.sym == rr.g_sym && pr.exponent == symbols_[rr.f_sym].arity) has_power = true;
      if (!has_power || !symbols_[rr.f_sym].absorb) continue;
      PowerSystem ps;
      ps.f_sym = rr.f_sym;
      ps.g_sym = rr.g_sym;
      ps.n = symbols_[rr.f_sym].arity;
      Vertex r = 0;
      while (checked_pow(r + 1, ps.n, UINT64_MAX).value_or(UINT64_MAX) <= m_) ++r;
      ps.root = r;
      if (checked_pow(r, ps.n, UINT64_MAX) != std::optional<std::uint64_t>(m_)) {
        compile_unsat_ = true;
        return;
      }
      for (auto& st : absorbs_)
        if (st.sym == ps.f_sym)
          st.min_count = std::max(st.min_count, static_cast<std::uint16_t>(ps.root));
      power_systems_.push_back(ps);
    }

    // when the system is nothing but one power-decomposition family, the
    // n-ary table can be solved structurally from a completed shift
    exclusive_power_ = power_systems_.size() == 1 && symbols_.size() == 2 &&
                       absorbs_.size() == 1 && power_rules_.size() == 1 &&
                       rotation_rules_.size() == 1 && generic_.identities.empty() &&
                       sys_.identities.size() == 4;
  }

  void compile_linear(const Term& lhs, const Term& rhs) {
    std::vector<std::string> vars;
    collect_vars(lhs, vars);
    collect_vars(rhs, vars);
    auto count = checked_pow(m_, static_cast<unsigned>(vars.size()), kLinearInstanceBudget);
    if (!count) throw cap_exceeded("find_polymorphisms: linear identity instance space too large");
    std::vector<Vertex> vals(vars.size(), 0);
    while (true) {
      auto resolve = [&](const Term& t) -> std::pair<bool, std::uint64_t> {
        if (t.is_variable) {
          auto it = std::find(vars.begin(), vars.end(), t.name);
          return {false, vals[static_cast<std::size_t>(it - vars.begin())]};
        }
        const auto& sym = symbols_[symbol_index(t.name)];
        std::uint64_t idx = 0;
        for (const auto& a : t.args) {
          auto it = std::find(vars.begin(), vars.end(), a.name);
          idx = idx * m_ + vals[static_cast<std::size_t>(it - vars.begin())];
        }
        return {true, sym.base + idx};
      };
      auto [lcell, lval] = resolve(lhs);
      auto [rcell, rval] = resolve(rhs);
      if (lcell && rcell) {
        if (lval != rval) static_unions_.push_back({lval, rval});
      } else if (lcell) {
        static_fixes_.push_back({lval, static_cast<Vertex>(rval)});
      } else if (rcell) {
        static_fixes_.push_back({rval, static_cast<Vertex>(lval)});
      } else if (lval != rval) {
        compile_unsat_ = true;
        return;
      }
      if (vals.empty() || !next_tuple(std::span<Vertex>(vals), m_)) break;
    }
  }

  void pick_edge_modes() {
    const std::uint64_t edges = g_.edge_count();
    std::size_t max_deg = 0;
    for (Vertex v = 0; v < m_; ++v)
      max_deg = std::max({max_deg, g_.out_degree(v), g_.in_degree(v)});

    std::vector<std::pair<std::uint64_t, unsigned>> order;  // (pair count, sym)
    for (unsigned s = 0; s < symbols_.size(); ++s) {
      auto pairs = checked_pow(edges, symbols_[s].arity, kEagerPairBudget);
      order.push_back({pairs ? *pairs : UINT64_MAX, s});
    }
    std::sort(order.begin(), order.end());
    std::uint64_t used = 0;
    for (auto [pairs, s] : order) {
      if (pairs != UINT64_MAX && used + pairs <= kEagerPairBudget) {
        symbols_[s].mode = EdgeMode::eager;
        used += pairs;
        continue;
      }
      auto prod = checked_pow(max_deg, symbols_[s].arity, kNeighborProductBudget);
      if (prod) symbols_[s].mode = EdgeMode::full_neighbor;
      else if (reflexive_) symbols_[s].mode = EdgeMode::unit_move;
      else symbols_[s].mode = EdgeMode::none;
    }
  }

  void build_eager_constraints() {
    for (unsigned s = 0; s < symbols_.size(); ++s) {
      if (symbols_[s].mode != EdgeMode::eager) continue;
      const auto& sym = symbols_[s];
      if (sym.arity == 0) {
        if (g_.has_edge(0, 0) || m_ == 0) {
          // 0-ary table is a single constant; it needs a loop
        }
        constraints_.push_back({static_cast<std::uint32_t>(sym.base),
                                static_cast<std::uint32_t>(sym.base)});
        continue;
      }
      if (g_.edge_count() == 0) continue;
      std::vector<std::size_t> pick(sym.arity, 0);
      while (true) {
        std::uint64_t uidx = 0, vidx = 0;
        for (unsigned i = 0; i < sym.arity; ++i) {
          auto [u, v] = g_.edges()[pick[i]];
          uidx = uidx * m_ + u;
          vidx = vidx * m_ + v;
        }
        constraints_.push_back({static_cast<std::uint32_t>(sym.base + uidx),
                                static_cast<std::uint32_t>(sym.base + vidx)});
        unsigned i = sym.arity;
        bool carried = true;
        while (i-- > 0) {
          if (++pick[i] < g_.edge_count()) {
            carried = false;
            break;
          }
          pick[i] = 0;
        }
        if (carried) break;
      }
    }
    // incidence lists
    incidence_off_.assign(total_cells_ + 1, 0);
    for (auto [a, b] : constraints_) {
      ++incidence_off_[a + 1];
      if (b != a) ++incidence_off_[b + 1];
    }
    for (std::size_t i = 0; i < total_cells_; ++i) incidence_off_[i + 1] += incidence_off_[i];
    incidence_.resize(constraints_.empty() ? 0 : incidence_off_.back());
    std::vector<std::uint32_t> pos(incidence_off_.begin(), incidence_off_.end() - 1);
    for (std::uint32_t cid = 0; cid < constraints_.size(); ++cid) {
      auto [a, b] = constraints_[cid];
      incidence_[pos[a]++] = cid;
      if (b != a) incidence_[pos[b]++] = cid;
    }
    in_acq_.assign(constraints_.size(), false);
  }

  // --- state primitives ----------------------------------------------------

  std::uint32_t find(std::uint32_t c) const {
    while (parent_[c] != c) c = parent_[c];
    return c;
  }

  bool narrow(std::uint32_t root, std::uint64_t mask) {
    std::uint64_t nd = domain_[root] & mask;
    if (nd == domain_[root]) return true;
    trail_.push_back({TrailRec::kDomain, root, 0, domain_[root], 0, 0, 0, 0});
    domain_[root] = nd;
    if (nd == 0) return false;
    if (value_[root] < 0) {
      if ((nd & (nd - 1)) == 0) {
        return assign(root, static_cast<Vertex>(__builtin_ctzll(nd)));
      }
      enqueue_incident(root);
    }
    return true;
  }

  bool assign(std::uint32_t root, Vertex v) {
    if (value_[root] >= 0) return value_[root] == static_cast<std::int16_t>(v);
    if (!(domain_[root] >> v & 1)) return false;
    trail_.push_back({TrailRec::kDomain, root, 0, domain_[root], 0, 0, 0, 0});
    domain_[root] = 1ull << v;
    trail_.push_back({TrailRec::kAssign, root, 0, 0, 0, 0, 0, 0});
    value_[root] = static_cast<std::int16_t>(v);
    valq_.push_back(root);
    return true;
  }

  bool cell_union(std::uint32_t a, std::uint32_t b) {
    std::uint32_t ra = find(a), rb = find(b);
    if (ra == rb) return true;
    if (size_[ra] < size_[rb] || (size_[ra] == size_[rb] && ra > rb)) std::swap(ra, rb);
    // rb merges into ra
    trail_.push_back({TrailRec::kCellUnion, rb, ra, domain_[ra], value_[ra], member_tail_[ra],
                      0, 0});
    parent_[rb] = ra;
    size_[ra] += size_[rb];
    wsum_[ra] += wsum_[rb];
    icsum_[ra] += icsum_[rb];
    member_next_[member_tail_[ra]] = rb;
    member_tail_[ra] = member_tail_[rb];

    std::uint64_t nd = domain_[ra] & domain_[rb];
    std::int16_t va = value_[ra], vb = value_[rb];
    if (va >= 0 && vb >= 0) return va == vb;
    if (vb >= 0) {
      if (!(domain_[ra] >> vb & 1)) return false;
      value_[ra] = vb;
      domain_[ra] = 1ull << vb;
      valq_.push_back(ra);
      return true;
    }
    if (va >= 0) return (domain_[rb] >> va & 1) != 0;
    domain_[ra] = nd;
    if (nd == 0) return false;
    if ((nd & (nd - 1)) == 0) return assign_unlocked(ra);
    enqueue_incident(ra);
    return true;
  }

  bool assign_unlocked(std::uint32_t root) {
    // domain already a singleton
    trail_.push_back({TrailRec::kAssign, root, 0, 0, 0, 0, 0, 0});
    value_[root] = static_cast<std::int16_t>(__builtin_ctzll(domain_[root]));
    valq_.push_back(root);
    return true;
  }

  void enqueue_incident(std::uint32_t root) {
    if (constraints_.empty() || icsum_[root] == 0) return;
    for (std::uint32_t mc = root; mc != UINT32_MAX; mc = member_next_[mc])
      for (auto k = incidence_off_[mc]; k < incidence_off_[mc + 1]; ++k) {
        auto cid = incidence_[k];
        if (!in_acq_[cid]) {
          in_acq_[cid] = true;
          acq_.push_back(cid);
        }
      }
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const TrailRec& r = trail_.back();
      switch (r.kind) {
        case TrailRec::kAssign:
          value_[r.a] = -1;
          break;
        case TrailRec::kDomain:
          domain_[r.a] = r.old_domain;
          break;
        case TrailRec::kCellUnion: {
          parent_[r.a] = r.a;
          size_[r.b] -= size_[r.a];
          wsum_[r.b] -= wsum_[r.a];
          icsum_[r.b] -= icsum_[r.a];
          domain_[r.b] = r.old_domain;
          value_[r.b] = r.old_value;
          member_next_[r.old_tail] = UINT32_MAX;
          member_tail_[r.b] = r.old_tail;
          break;
        }
        case TrailRec::kElemUnion: {
          auto& st = absorbs_[r.slot];
          st.parent[r.coord * m_ + r.a] = static_cast<std::uint8_t>(r.a);
          st.size[r.coord * m_ + r.b] -= st.size[r.coord * m_ + r.a];
          ++st.counts[r.coord];
          break;
        }
        case TrailRec::kInv:
          ginv_[r.slot][r.a] = static_cast<std::uint8_t>(r.old_value);
          break;
      }
      trail_.pop_back();
    }
    clear_queues();
  }

  // --- propagation -----------------------------------------------------------

  struct AbsorbState {
    unsigned sym = 0;
    std::vector<std::uint8_t> parent;  // arity x m
    std::vector<std::uint16_t> size;
    std::vector<std::uint16_t> counts;
    std::uint16_t min_count = 1;
  };

  std::uint8_t efind(const AbsorbState& st, unsigned coord, std::uint8_t x) const {
    while (st.parent[coord * m_ + x] != x) x = st.parent[coord * m_ + x];
    return x;
  }

  bool elem_union(std::uint8_t slot, unsigned coord, Vertex p, Vertex q) {
    auto& st = absorbs_[slot];
    std::uint8_t rp = efind(st, coord, static_cast<std::uint8_t>(p));
    std::uint8_t rq = efind(st, coord, static_cast<std::uint8_t>(q));
    if (rp == rq) return true;
    if (st.size[coord * m_ + rp] < st.size[coord * m_ + rq]) std::swap(rp, rq);
    trail_.push_back({TrailRec::kElemUnion, rq, rp, 0, 0, 0, slot,
                      static_cast<std::uint8_t>(coord)});
    st.parent[coord * m_ + rq] = rp;
    st.size[coord * m_ + rp] += st.size[coord * m_ + rq];
    --st.counts[coord];

    // a solution extending this state factors through quotients at least as
    // coarse as these classes, and the factor sizes must multiply to m;
    // in a power system every factor has exactly root-many classes
    if (st.counts[coord] < st.min_count) return false;
    std::uint64_t prod = 1;
    for (auto c : st.counts) prod *= c;
    if (prod < m_) return false;

    // columns of the two merged class representatives must agree
    const auto& sym = symbols_[st.sym];
    const std::uint64_t stride = sym.strides[coord];
    const std::uint64_t rest = sym.cells / m_;
    for (std::uint64_t w = 0; w < rest; ++w) {
      std::uint64_t high = w / stride, low = w % stride;
      std::uint64_t base = (high * m_) * stride + low + sym.base;
      if (!cell_union(static_cast<std::uint32_t>(base + rp * stride),
                      static_cast<std::uint32_t>(base + rq * stride)))
        return false;
    }
    return true;
  }

  bool fire_cell(std::uint32_t mc, Vertex v) {
    const unsigned s = symbol_of_cell(mc);
    const auto& sym = symbols_[s];
    const std::uint64_t local = mc - sym.base;
    decode_tuple(local, sym.arity);

    if (sym.absorb) {
      std::uint8_t slot = absorb_slot(s);
      for (unsigned i = 0; i < sym.arity; ++i)
        if (!elem_union(slot, i, v, tuple_[i])) return false;
    }
    for (const auto& pr : power_rules_)
      if (pr.sym == s && !propagate_power(pr, static_cast<Vertex>(local), v)) return false;
    for (const auto& ps : power_systems_)
      if (ps.g_sym == s) {
        if (!check_fixed_point_bounds(ps)) return false;
        if (!check_shift_cycle_type(ps)) return false;
        if (exclusive_power_ && !structural_power_solve(ps)) return false;
      }
    for (const auto& rr : rotation_rules_)
      if (rr.f_sym == s && !propagate_rotation(rr, local, v)) return false;

    switch (sym.mode) {
      case EdgeMode::eager:
        break;  // handled by the arc-consistency queue
      case EdgeMode::full_neighbor:
        if (!edge_full_neighbor(sym, v)) return false;
        break;
      case EdgeMode::unit_move:
        if (!edge_unit_move(sym, local, v)) return false;
        break;
      case EdgeMode::none:
        break;
    }
    return true;
  }

  bool fire_value(std::uint32_t cell) {
    const std::uint32_t root = find(cell);
    const Vertex v = static_cast<Vertex>(value_[root]);
    if (!fire_cell(root, v)) return false;
    // the rest of the class matters only for static merge classes and
    // cells watched by materialized constraints
    if (wsum_[root] > w0_[root]) {
      for (std::uint32_t mc = member_next_[root]; mc != UINT32_MAX; mc = member_next_[mc]) {
        if (!w0_[mc]) continue;
        if (!fire_cell(mc, v)) return false;
      }
    }
    if (icsum_[root] > 0) enqueue_incident(root);
    return true;
  }

  std::uint8_t absorb_slot(unsigned sym) const {
    for (std::uint8_t i = 0; i < absorbs_.size(); ++i)
      if (absorbs_[i].sym == sym) return i;
    throw std::logic_error("poly engine: missing absorb slot");
  }

  void decode_tuple(std::uint64_t local, unsigned arity) {
    tuple_.resize(arity);
    for (unsigned i = arity; i-- > 0;) {
      tuple_[i] = static_cast<Vertex>(local % m_);
      local /= m_;
    }
  }

  bool propagate_power(const PowerRule& pr, Vertex x, Vertex y) {
    // injectivity: two sources mapping to the same image cannot close orbits
    auto& inv = ginv_[power_slot(pr.sym)];
    if (inv[y] != 0xFF && inv[y] != x) return false;
    if (inv[y] == 0xFF) {
      trail_.push_back({TrailRec::kInv, y, 0, 0, static_cast<std::int16_t>(0xFF), 0,
                        power_slot(pr.sym), 0});
      inv[y] = static_cast<std::uint8_t>(x);
    }
    // all-different: the value is spoken for
    {
      const auto& sym = symbols_[pr.sym];
      const std::uint64_t forbid = ~(1ull << y);
      for (Vertex z = 0; z < m_; ++z) {
        if (z == x) continue;
        auto root = find(static_cast<std::uint32_t>(sym.base + z));
        if (value_[root] == static_cast<std::int16_t>(y)) return false;
        if (value_[root] < 0 && !narrow(root, forbid)) return false;
      }
    }
    // walk the decided chain from x; it must close into a cycle whose
    // length divides the exponent
    const auto& sym = symbols_[pr.sym];
    Vertex cur = x;
    for (unsigned step = 1; step <= pr.exponent; ++step) {
      std::uint32_t root = find(static_cast<std::uint32_t>(sym.base + cur));
      if (value_[root] < 0) {
        if (step == pr.exponent) return assign(root, x);  // forced closure
        return true;
      }
      cur = static_cast<Vertex>(value_[root]);
      if (cur == x) return pr.exponent % step == 0;
    }
    return cur == x;
  }

  // The shift of a power system fixes exactly root-many elements.
  bool check_fixed_point_bounds(const PowerSystem& ps) {
    const auto& sym = symbols_[ps.g_sym];
    Vertex fixed = 0, possible = 0;
    for (Vertex x = 0; x < m_; ++x) {
      auto root = find(static_cast<std::uint32_t>(sym.base + x));
      if (value_[root] == static_cast<std::int16_t>(x)) ++fixed;
      else if (value_[root] < 0 && (domain_[root] >> x & 1)) ++possible;
    }
    return fixed <= ps.root && fixed + possible >= ps.root;
  }

  // Any solution's shift is conjugate to the coordinate rotation on
  // base^n, so once total it must have r^d fixed points under g^d for
  // every divisor d of n.
  bool check_shift_cycle_type(const PowerSystem& ps) {
    const auto& sym = symbols_[ps.g_sym];
    for (std::uint64_t c = 0; c < sym.cells; ++c)
      if (value_[find(static_cast<std::uint32_t>(sym.base + c))] < 0) return true;
    auto gval = [&](Vertex x) {
      return static_cast<Vertex>(value_[find(static_cast<std::uint32_t>(sym.base + x))]);
    };
    for (unsigned d = 1; d <= ps.n; ++d) {
      if (ps.n % d != 0) continue;
      std::uint64_t fixed = 0;
      for (Vertex x = 0; x < m_; ++x) {
        Vertex cur = x;
        for (unsigned i = 0; i < d; ++i) cur = gval(cur);
        if (cur == x) ++fixed;
      }
      auto expect = checked_pow(ps.root, d, UINT64_MAX);
      if (!expect || fixed != *expect) return false;
    }
    return true;
  }

  // With the shift total, any solution for the n-ary table corresponds to
  // an isomorphism psi: A -> B^n intertwining g with the coordinate
  // rotation, where B is spanned by the fixed points of g. Search for psi
  // directly and fill the table from it; no psi means no solution under
  // this shift. Only used when the system is exactly one power family.
  bool structural_power_solve(const PowerSystem& ps) {
    const auto& gsym = symbols_[ps.g_sym];
    const auto& fsym = symbols_[ps.f_sym];
    // only run once the shift is total and the table is still open
    std::vector<Vertex> gv(m_);
    for (Vertex x = 0; x < m_; ++x) {
      auto root = find(static_cast<std::uint32_t>(gsym.base + x));
      if (value_[root] < 0) return true;
      gv[x] = static_cast<Vertex>(value_[root]);
    }
    if (m_ < 2) return true;
    // probe a non-diagonal cell; diagonal ones are pinned by idempotence
    if (value_[find(static_cast<std::uint32_t>(fsym.base + 1))] >= 0)
      return true;  // already filled structurally

    const unsigned n = ps.n;
    const Vertex r = ps.root;
    std::vector<Vertex> fixset;
    for (Vertex x = 0; x < m_; ++x)
      if (gv[x] == x) fixset.push_back(x);
    if (fixset.size() != r) return false;

    auto span = spanned_subdigraph(g_, fixset);
    auto target = power(span.graph, n);
    if (target.vertex_count() != m_) return false;

    // coordinate rotation on the power and digit extraction
    std::vector<Vertex> sigma(m_);
    std::vector<std::uint32_t> digits(n);
    std::vector<std::vector<Vertex>> digit(n, std::vector<Vertex>(m_));
    for (Vertex p = 0; p < m_; ++p) {
      tuple_decode(p, r, n, digits);
      for (unsigned i = 0; i < n; ++i) digit[i][p] = digits[i];
      std::rotate(digits.begin(), digits.begin() + 1, digits.end());
      sigma[p] = static_cast<Vertex>(tuple_index(digits, r));
    }

    std::vector<int> psi(m_, -1);
    std::vector<bool> used(m_, false);
    std::vector<std::pair<Vertex, Vertex>> assigned;

    auto consistent = [&](Vertex x, Vertex p) {
      if (g_.has_edge(x, x) != target.has_edge(p, p)) return false;
      if (g_.out_degree(x) != target.out_degree(p)) return false;
      if (g_.in_degree(x) != target.in_degree(p)) return false;
      for (auto [y, q] : assigned) {
        if (g_.has_edge(x, y) != target.has_edge(p, q)) return false;
        if (g_.has_edge(y, x) != target.has_edge(q, p)) return false;
      }
      return true;
    };

    auto unplace = [&](int count) {
      for (int i = 0; i < count; ++i) {
        auto [x, p] = assigned.back();
        assigned.pop_back();
        psi[x] = -1;
        used[p] = false;
      }
    };
    // assign a whole g-orbit at once; the intertwining pins it
    auto place_orbit = [&](Vertex x, Vertex p) -> int {
      int added = 0;
      Vertex cx = x, cp = p;
      while (true) {
        if (psi[cx] >= 0) {
          if (psi[cx] != static_cast<int>(cp)) {
            unplace(added);
            return -1;
          }
          break;
        }
        if (used[cp] || !consistent(cx, cp)) {
          unplace(added);
          return -1;
        }
        psi[cx] = static_cast<int>(cp);
        used[cp] = true;
        assigned.push_back({cx, cp});
        ++added;
        cx = gv[cx];
        cp = sigma[cp];
        if (cx == x) {
          if (cp != p) {
            unplace(added);
            return -1;
          }
          break;
        }
      }
      return added;
    };

    struct PsiFrame {
      Vertex x;
      Vertex next_p;
      int placed;
    };
    std::vector<PsiFrame> stk;
    bool solved = false;
    Vertex x0 = 0;
    while (true) {
      while (x0 < m_ && psi[x0] >= 0) ++x0;
      if (x0 == m_) {
        solved = true;
        break;
      }
      stk.push_back({x0, 0, 0});
      bool progressed = false;
      while (!stk.empty()) {
        auto& fr = stk.back();
        if (fr.placed > 0) {
          unplace(fr.placed);
          fr.placed = 0;
        }
        Vertex p = fr.next_p;
        int added = -1;
        for (; p < m_; ++p) {
          if (used[p]) continue;
          added = place_orbit(fr.x, p);
          if (added >= 0) break;
        }
        if (added >= 0) {
          fr.placed = added;
          fr.next_p = p + 1;
          progressed = true;
          break;
        }
        stk.pop_back();
        if (!stk.empty()) x0 = stk.back().x;
      }
      if (!progressed && stk.empty()) return false;
      if (progressed) {
        x0 = stk.back().x;
      }
    }
    (void)solved;

    // fill the table: f(u_1..u_n) reads digit i of psi(u_i)
    std::vector<Vertex> inv(m_);
    for (Vertex x = 0; x < m_; ++x) inv[static_cast<Vertex>(psi[x])] = x;
    std::vector<Vertex> args(n, 0);
    std::uint64_t idx = 0;
    while (true) {
      std::uint64_t q = 0;
      for (unsigned i = 0; i < n; ++i) q = q * r + digit[i][static_cast<Vertex>(psi[args[i]])];
      auto root = find(static_cast<std::uint32_t>(fsym.base + idx));
      Vertex want = inv[q];
      if (value_[root] >= 0) {
        if (value_[root] != static_cast<std::int16_t>(want)) return false;
      } else {
        if (!(domain_[root] >> want & 1)) return false;
        trail_.push_back({TrailRec::kDomain, root, 0, domain_[root], 0, 0, 0, 0});
        domain_[root] = 1ull << want;
        trail_.push_back({TrailRec::kAssign, root, 0, 0, 0, 0, 0, 0});
        value_[root] = static_cast<std::int16_t>(want);
      }
      ++idx;
      if (!next_tuple(std::span<Vertex>(args), m_)) break;
    }
    return true;
  }

  std::uint8_t power_slot(unsigned sym) {
    for (std::uint8_t i = 0; i < power_syms_.size(); ++i)
      if (power_syms_[i] == sym) return i;
    power_syms_.push_back(sym);
    ginv_.emplace_back(m_, 0xFF);
    return static_cast<std::uint8_t>(power_syms_.size() - 1);
  }

  bool propagate_rotation(const RotationRule& rr, std::uint64_t local, Vertex v) {
    const auto& gsym = symbols_[rr.g_sym];
    const auto& fsym = symbols_[rr.f_sym];
    std::uint32_t gv_root = find(static_cast<std::uint32_t>(gsym.base + v));
    if (value_[gv_root] < 0) return true;
    const Vertex lhs = static_cast<Vertex>(value_[gv_root]);
    // arguments of the rotated cell: g applied to the permuted tuple
    std::uint64_t target = 0;
    std::uint64_t rest = local;
    rot_buf_.resize(fsym.arity);
    for (unsigned i = fsym.arity; i-- > 0;) {
      rot_buf_[i] = static_cast<Vertex>(rest % m_);
      rest /= m_;
    }
    for (unsigned j = 0; j < fsym.arity; ++j) {
      std::uint32_t r = find(static_cast<std::uint32_t>(gsym.base + rot_buf_[rr.perm[j]]));
      if (value_[r] < 0) return true;
      target = target * m_ + static_cast<Vertex>(value_[r]);
    }
    return assign(find(static_cast<std::uint32_t>(fsym.base + target)), lhs);
  }

  bool edge_full_neighbor(const SymbolInfo& sym, Vertex v) {
    // both directions; neighbor products are small by mode selection
    if (out_mask_[v] != full_mask_ || in_mask_[v] != full_mask_) {
      if (!neighbor_scan(sym, v, true)) return false;
      if (!neighbor_scan(sym, v, false)) return false;
    }
    return true;
  }

  bool neighbor_scan(const SymbolInfo& sym, Vertex v, bool out) {
    const std::uint64_t mask = out ? out_mask_[v] : in_mask_[v];
    // iterate the product of neighborhoods of the current tuple_
    nb_pick_.assign(sym.arity, 0);
    while (true) {
      std::uint64_t idx = 0;
      bool ok = true;
      for (unsigned i = 0; i < sym.arity && ok; ++i) {
        auto nbrs = out ? g_.out_neighbors(tuple_[i]) : g_.in_neighbors(tuple_[i]);
        if (nb_pick_[i] >= nbrs.size()) ok = false;
        else idx = idx * m_ + nbrs[nb_pick_[i]];
      }
      if (sym.arity == 0) {
        // constant: the single loop constraint
        std::uint32_t r = find(static_cast<std::uint32_t>(sym.base));
        return narrow(r, loop_mask_);
      }
      if (!ok) return true;  // some coordinate has no neighbors at all
      std::uint32_t r = find(static_cast<std::uint32_t>(sym.base + idx));
      if (value_[r] >= 0) {
        std::uint64_t bit = 1ull << value_[r];
        if (!(mask & bit)) return false;
      } else {
        if (!narrow(r, mask)) return false;
      }
      unsigned i = sym.arity;
      bool carried = true;
      while (i-- > 0) {
        auto nbrs = out ? g_.out_neighbors(tuple_[i]) : g_.in_neighbors(tuple_[i]);
        if (++nb_pick_[i] < nbrs.size()) {
          carried = false;
          break;
        }
        nb_pick_[i] = 0;
      }
      if (carried) return true;
    }
  }

  bool edge_unit_move(const SymbolInfo& sym, std::uint64_t local, Vertex v) {
    // neighbors one coordinate step away; sound because the structure is
    // reflexive, full verification happens at the leaf
    for (unsigned i = 0; i < sym.arity; ++i) {
      const std::uint64_t stride = sym.strides[i];
      const Vertex ui = tuple_[i];
      const std::uint64_t base = sym.base + local - static_cast<std::uint64_t>(ui) * stride;
      if (out_mask_[v] != full_mask_) {
        for (auto y : g_.out_neighbors(ui)) {
          if (y == ui) continue;
          std::uint32_t r = find(static_cast<std::uint32_t>(base + y * stride));
          if (value_[r] >= 0) {
            if (!(out_mask_[v] >> value_[r] & 1)) return false;
          } else if (!narrow(r, out_mask_[v]))
            return false;
        }
      }
      if (in_mask_[v] != full_mask_) {
        for (auto y : g_.in_neighbors(ui)) {
          if (y == ui) continue;
          std::uint32_t r = find(static_cast<std::uint32_t>(base + y * stride));
          if (value_[r] >= 0) {
            if (!(in_mask_[v] >> value_[r] & 1)) return false;
          } else if (!narrow(r, in_mask_[v]))
            return false;
        }
      }
    }
    return true;
  }

  bool revise(std::uint32_t cid) {
    auto [a, b] = constraints_[cid];
    std::uint32_t ra = find(a), rb = find(b);
    if (ra == rb) return narrow(ra, loop_mask_);
    // support masks through the edge relation in both directions
    std::uint64_t da = domain_[ra], db = domain_[rb];
    std::uint64_t forward = 0;
    for (std::uint64_t rem = da; rem;) {
      Vertex x = static_cast<Vertex>(__builtin_ctzll(rem));
      rem &= rem - 1;
      forward |= out_mask_[x];
    }
    if (!narrow(rb, forward)) return false;
    db = domain_[find(b)];
    std::uint64_t keep = 0;
    for (std::uint64_t rem = da; rem;) {
      Vertex x = static_cast<Vertex>(__builtin_ctzll(rem));
      rem &= rem - 1;
      if (out_mask_[x] & db) keep |= 1ull << x;
    }
    return narrow(find(a), keep);
  }

  void clear_queues() {
    valq_.clear();
    valq_head_ = 0;
    for (std::size_t i = acq_head_; i < acq_.size(); ++i) in_acq_[acq_[i]] = false;
    acq_.clear();
    acq_head_ = 0;
  }

  bool drain() {
    while (valq_head_ < valq_.size() || acq_head_ < acq_.size()) {
      if (valq_head_ < valq_.size()) {
        std::uint32_t c = valq_[valq_head_++];
        if (!fire_value(c)) {
          clear_queues();
          return false;
        }
      } else {
        std::uint32_t cid = acq_[acq_head_++];
        in_acq_[cid] = false;
        if (!revise(cid)) {
          clear_queues();
          return false;
        }
      }
    }
    clear_queues();
    return true;
  }

  bool apply_static() {
    for (auto [a, b] : static_unions_)
      if (!cell_union(a, b)) return false;
    for (auto [cell, v] : static_fixes_)
      if (!assign(find(cell), v)) return false;
    for (std::uint32_t cid = 0; cid < constraints_.size(); ++cid) {
      if (!in_acq_[cid]) {
        in_acq_[cid] = true;
        acq_.push_back(cid);
      }
    }
    return true;
  }

  // --- leaf verification -----------------------------------------------------

  TableSet materialize() const {
    TableSet tables;
    for (const auto& sym : symbols_) {
      std::vector<Vertex> values(sym.cells);
      for (std::uint64_t c = 0; c < sym.cells; ++c) {
        auto root = find(static_cast<std::uint32_t>(sym.base + c));
        if (value_[root] < 0) throw std::logic_error("poly engine: unvalued cell at leaf");
        values[c] = static_cast<Vertex>(value_[root]);
      }
      tables[sym.name] = OperationTable(sym.arity, m_, std::move(values));
    }
    return tables;
  }

  bool leaf_ok(TableSet& out) {
    TableSet tables = materialize();
    for (const auto& pr : power_rules_) {
      const auto& table = tables[symbols_[pr.sym].name];
      for (Vertex x = 0; x < m_; ++x) {
        Vertex cur = x;
        for (unsigned i = 0; i < pr.exponent; ++i) cur = table.values[cur];
        if (cur != x) return false;
      }
    }
    for (const auto& rr : rotation_rules_) {
      const auto& ft = tables[symbols_[rr.f_sym].name];
      const auto& gt = tables[symbols_[rr.g_sym].name];
      const unsigned n = ft.arity;
      std::vector<Vertex> args(n, 0), rotated(n);
      while (true) {
        for (unsigned j = 0; j < n; ++j) rotated[j] = gt.values[args[rr.perm[j]]];
        if (gt.values[ft.apply(args)] != ft.apply(rotated)) return false;
        if (n == 0 || !next_tuple(std::span<Vertex>(args), m_)) break;
      }
    }
    for (const auto& st : absorbs_) {
      if (detail::decomposition_violation(g_, tables[symbols_[st.sym].name])) return false;
    }
    if (!generic_.identities.empty()) {
      if (check_identities(tables, generic_, m_)) return false;
    }
    for (const auto& sym : symbols_) {
      if (sym.absorb) continue;  // certified through the factorization
      if (sym.mode == EdgeMode::unit_move || sym.mode == EdgeMode::none) {
        if (polymorphism_violation(tables[sym.name], g_, kLeafEdgeBudget)) return false;
      }
    }
    out = std::move(tables);
    return true;
  }

  // --- search ------------------------------------------------------------------

  std::uint32_t cell_at(std::uint64_t cursor) const {
    for (std::size_t i = 0; i < branch_syms_.size(); ++i)
      if (cursor < branch_cum_[i + 1])
        return static_cast<std::uint32_t>(symbols_[branch_syms_[i]].base +
                                          (cursor - branch_cum_[i]));
    throw std::logic_error("poly engine: cursor out of range");
  }

  bool dfs(PolymorphismSearchResult& result) {
    struct Frame {
      std::uint64_t cursor;
      std::uint32_t root;
      std::uint64_t rem;
      std::size_t mark;
    };
    std::vector<Frame> stack;
    std::uint64_t cursor = 0;
    bool descending = true;

    while (true) {
      if (descending) {
        while (cursor < total_cells_ && value_[find(cell_at(cursor))] >= 0) ++cursor;
        if (cursor == total_cells_) {
          TableSet tables;
          if (leaf_ok(tables)) {
            result.tables = std::move(tables);
            return true;
          }
          // fall through: treat as a conflict and resume value trying
        } else {
          std::uint32_t root = find(cell_at(cursor));
          stack.push_back({cursor, root, domain_[root], trail_.size()});
        }
        descending = false;
      }

      bool advanced = false;
      while (!stack.empty()) {
        Frame& fr = stack.back();
        undo_to(fr.mark);
        if (fr.rem == 0) {
          stack.pop_back();
          continue;
        }
        Vertex v = static_cast<Vertex>(__builtin_ctzll(fr.rem));
        fr.rem &= fr.rem - 1;
        ++nodes_;
        if (opts_.node_cap && nodes_ > opts_.node_cap)
          throw cap_exceeded("find_polymorphisms: node cap exceeded");
        if (assign(fr.root, v) && drain()) {
          cursor = fr.cursor + 1;
          descending = true;
          advanced = true;
          break;
        }
      }
      if (!advanced && stack.empty()) return false;
    }
  }

  // --- data ---------------------------------------------------------------------

  const Digraph& g_;
  IdentitySystem sys_;
  PolymorphismSearchOptions opts_;
  const Vertex m_;
  std::uint64_t full_mask_ = 0;
  std::uint64_t out_mask_[64] = {}, in_mask_[64] = {};
  std::uint64_t loop_mask_ = 0;
  bool reflexive_ = false;
  bool compile_unsat_ = false;

  std::vector<SymbolInfo> symbols_;
  std::uint64_t total_cells_ = 0;
  std::vector<unsigned> branch_syms_;
  std::vector<std::uint64_t> branch_cum_;

  std::vector<unsigned> composition_syms_;
  std::vector<AbsorbState> absorbs_;
  std::vector<PowerRule> power_rules_;
  std::vector<RotationRule> rotation_rules_;
  std::vector<PowerSystem> power_systems_;
  bool exclusive_power_ = false;
  std::vector<unsigned> power_syms_;
  std::vector<std::vector<std::uint8_t>> ginv_;
  IdentitySystem generic_;

  std::vector<std::pair<std::uint32_t, std::uint32_t>> static_unions_;
  std::vector<std::pair<std::uint32_t, Vertex>> static_fixes_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> constraints_;
  std::vector<std::uint32_t> incidence_, incidence_off_;
  std::vector<bool> in_acq_;

  std::vector<std::uint32_t> parent_, size_;
  std::vector<std::int16_t> value_;
  std::vector<std::uint64_t> domain_;
  std::vector<std::uint32_t> member_next_, member_tail_;
  std::vector<std::uint8_t> w0_, ic0_;
  std::vector<std::uint32_t> wsum_, icsum_;

  std::vector<TrailRec> trail_;
  std::vector<std::uint32_t> valq_, acq_;
  std::size_t valq_head_ = 0, acq_head_ = 0;
  std::vector<Vertex> tuple_, rot_buf_;
  std::vector<std::size_t> nb_pick_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

PolymorphismSearchResult find_polymorphisms(const Digraph& g, const IdentitySystem& sys,
                                            const PolymorphismSearchOptions& opts) {
  PolyEngine engine(g, sys, opts);
  return engine.run();
}

}  // namespace varkit
