#include "varkit/conditions.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

#include "varkit/hom_search.hpp"
#include "varkit/indexing.hpp"

namespace varkit {

std::string Term::to_string() const {
  if (is_variable) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].to_string();
  }
  return out + ")";
}

unsigned IdentitySystem::arity_of(const std::string& symbol) const {
  for (const auto& [name, arity] : signature)
    if (name == symbol) return arity;
  throw std::invalid_argument("identity system: unknown symbol '" + symbol + "'");
}

namespace {

void validate_term(const IdentitySystem& sys, const Term& t) {
  if (t.is_variable) {
    if (!t.args.empty()) throw std::invalid_argument("identity system: variable with arguments");
    return;
  }
  if (sys.arity_of(t.name) != t.args.size())
    throw std::invalid_argument("identity system: arity mismatch for '" + t.name + "'");
  for (const auto& a : t.args) validate_term(sys, a);
}

void collect_variables(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_variables(a, out);
}

}  // namespace

void IdentitySystem::validate() const {
  std::set<std::string> names;
  for (const auto& [name, arity] : signature) {
    (void)arity;
    if (!names.insert(name).second)
      throw std::invalid_argument("identity system: duplicate symbol '" + name + "'");
  }
  for (const auto& [lhs, rhs] : identities) {
    validate_term(*this, lhs);
    validate_term(*this, rhs);
  }
}

OperationTable::OperationTable(unsigned arity_, Vertex universe_, std::vector<Vertex> values_)
    : arity(arity_), universe(universe_), values(std::move(values_)) {
  auto expect = checked_pow(universe, arity, UINT64_MAX);
  if (!expect || values.size() != *expect)
    throw std::invalid_argument("operation table: wrong number of entries");
  for (auto v : values)
    if (v >= universe) throw std::invalid_argument("operation table: entry out of range");
}

Vertex OperationTable::apply(std::span<const Vertex> args) const {
  if (args.size() != arity) throw std::invalid_argument("operation table: wrong argument count");
  return values[tuple_index(args, universe)];
}

Vertex eval_term(const Term& t, const std::map<std::string, Vertex>& assignment,
                 const TableSet& tables) {
  if (t.is_variable) {
    auto it = assignment.find(t.name);
    if (it == assignment.end())
      throw std::invalid_argument("eval_term: unassigned variable '" + t.name + "'");
    return it->second;
  }
  auto it = tables.find(t.name);
  if (it == tables.end())
    throw std::invalid_argument("eval_term: missing table for '" + t.name + "'");
  std::vector<Vertex> args(t.args.size());
  for (std::size_t i = 0; i < t.args.size(); ++i)
    args[i] = eval_term(t.args[i], assignment, tables);
  return it->second.apply(args);
}

std::optional<IdentityFailure> check_identities(const TableSet& tables,
                                                const IdentitySystem& sys, Vertex universe,
                                                std::uint64_t budget) {
  sys.validate();
  for (const auto& [name, arity] : sys.signature) {
    auto it = tables.find(name);
    if (it == tables.end())
      throw std::invalid_argument("check_identities: missing table for '" + name + "'");
    if (it->second.arity != arity || it->second.universe != universe)
      throw std::invalid_argument("check_identities: table shape mismatch for '" + name + "'");
  }
  if (universe == 0) return std::nullopt;

  for (std::size_t idx = 0; idx < sys.identities.size(); ++idx) {
    const auto& [lhs, rhs] = sys.identities[idx];
    std::vector<std::string> vars;
    collect_variables(lhs, vars);
    collect_variables(rhs, vars);
    auto count = checked_pow(universe, static_cast<unsigned>(vars.size()), budget);
    if (!count) throw cap_exceeded("check_identities: assignment space over budget");
    std::vector<Vertex> vals(vars.size(), 0);
    while (true) {
      std::map<std::string, Vertex> assignment;
      for (std::size_t i = 0; i < vars.size(); ++i) assignment[vars[i]] = vals[i];
      Vertex l = eval_term(lhs, assignment, tables);
      Vertex r = eval_term(rhs, assignment, tables);
      if (l != r) return IdentityFailure{idx, std::move(assignment), l, r};
      if (vals.empty() || !next_tuple(std::span<Vertex>(vals), universe)) break;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Edge>> polymorphism_violation(const OperationTable& table,
                                                        const Digraph& g, std::uint64_t budget) {
  if (table.universe != g.vertex_count())
    throw std::invalid_argument("polymorphism_violation: universe mismatch");
  const unsigned k = table.arity;
  if (!checked_pow(g.edge_count(), k, budget))
    throw cap_exceeded("polymorphism_violation: edge tuple space over budget");
  if (g.edge_count() == 0 || table.cell_count() == 0) return std::nullopt;

  std::vector<std::size_t> pick(k, 0);
  std::vector<Vertex> us(k), vs(k);
  while (true) {
    for (unsigned i = 0; i < k; ++i) {
      auto [u, v] = g.edges()[pick[i]];
      us[i] = u;
      vs[i] = v;
    }
    if (!g.has_edge(table.apply(us), table.apply(vs))) {
      std::vector<Edge> witness(k);
      for (unsigned i = 0; i < k; ++i) witness[i] = g.edges()[pick[i]];
      return witness;
    }
    if (k == 0) break;
    unsigned i = k;
    bool carried = true;
    while (i-- > 0) {
      if (++pick[i] < g.edge_count()) {
        carried = false;
        break;
      }
      pick[i] = 0;
    }
    if (carried) break;
  }
  return std::nullopt;
}

// --- built-ins ----------------------------------------------------------

namespace {

Term tv(const std::string& n) { return Term::var(n); }

IdentitySystem olsak_system() {
  IdentitySystem sys;
  sys.signature = {{"t", 6}};
  sys.variables = {"x", "y"};
  auto x = tv("x"), y = tv("y");
  sys.identities.push_back({Term::app("t", {x, x, x, x, x, x}), x});
  sys.identities.push_back(
      {Term::app("t", {x, y, y, y, x, x}), Term::app("t", {y, x, y, x, y, x})});
  sys.identities.push_back(
      {Term::app("t", {y, x, y, x, y, x}), Term::app("t", {y, y, x, x, x, y})});
  return sys;
}

IdentitySystem majority_system() {
  IdentitySystem sys;
  sys.signature = {{"t", 3}};
  sys.variables = {"x", "y"};
  auto x = tv("x"), y = tv("y");
  sys.identities.push_back({Term::app("t", {y, x, x}), x});
  sys.identities.push_back({Term::app("t", {x, y, x}), x});
  sys.identities.push_back({Term::app("t", {x, x, y}), x});
  return sys;
}

IdentitySystem maltsev_system() {
  IdentitySystem sys;
  sys.signature = {{"p", 3}};
  sys.variables = {"x", "y"};
  auto x = tv("x"), y = tv("y");
  sys.identities.push_back({Term::app("p", {x, y, y}), x});
  sys.identities.push_back({Term::app("p", {y, y, x}), x});
  return sys;
}

IdentitySystem minority_system() {
  IdentitySystem sys;
  sys.signature = {{"m", 3}};
  sys.variables = {"x", "y"};
  auto x = tv("x"), y = tv("y");
  sys.identities.push_back({Term::app("m", {x, y, y}), x});
  sys.identities.push_back({Term::app("m", {y, x, y}), x});
  sys.identities.push_back({Term::app("m", {y, y, x}), x});
  return sys;
}

std::string matrix_var(unsigned i, unsigned j) {
  return "x" + std::to_string(i) + "_" + std::to_string(j);
}

IdentitySystem product_decomposition_system(unsigned n) {
  if (n == 0) throw std::invalid_argument("product_decomposition: arity must be positive");
  IdentitySystem sys;
  sys.signature = {{"f", n}};
  auto x = tv("x");
  sys.variables = {"x"};
  sys.identities.push_back({Term::app("f", std::vector<Term>(n, x)), x});

  // f(f(row_1),...,f(row_n)) = f(diagonal)
  std::vector<Term> rows, diag;
  for (unsigned i = 0; i < n; ++i) {
    std::vector<Term> row;
    for (unsigned j = 0; j < n; ++j) {
      sys.variables.push_back(matrix_var(i, j));
      row.push_back(tv(matrix_var(i, j)));
    }
    rows.push_back(Term::app("f", std::move(row)));
    diag.push_back(tv(matrix_var(i, i)));
  }
  sys.identities.push_back({Term::app("f", std::move(rows)), Term::app("f", std::move(diag))});
  return sys;
}

IdentitySystem power_decomposition_system(unsigned n) {
  auto sys = product_decomposition_system(n);
  sys.signature.push_back({"g", 1});

  // g^n(x) = x
  Term chain = tv("x");
  for (unsigned i = 0; i < n; ++i) chain = Term::app("g", {chain});
  sys.identities.push_back({chain, tv("x")});

  // g(f(x_1,...,x_n)) = f(g(x_2),...,g(x_n),g(x_1))
  std::vector<Term> args, rotated;
  for (unsigned i = 0; i < n; ++i) {
    std::string v = "y" + std::to_string(i + 1);
    sys.variables.push_back(v);
    args.push_back(tv(v));
  }
  for (unsigned i = 0; i < n; ++i)
    rotated.push_back(Term::app("g", {tv("y" + std::to_string((i + 1) % n + 1))}));
  sys.identities.push_back(
      {Term::app("g", {Term::app("f", std::move(args))}), Term::app("f", std::move(rotated))});
  return sys;
}

}  // namespace

IdentitySystem builtin(const std::string& name) {
  if (name == "olsak") return olsak_system();
  if (name == "majority") return majority_system();
  if (name == "maltsev") return maltsev_system();
  if (name == "minority") return minority_system();
  auto paren = name.find('(');
  if (paren != std::string::npos && name.back() == ')') {
    auto base = name.substr(0, paren);
    auto arg = name.substr(paren + 1, name.size() - paren - 2);
    unsigned n = 0;
    try {
      std::size_t pos = 0;
      n = static_cast<unsigned>(std::stoul(arg, &pos));
      if (pos != arg.size()) throw std::invalid_argument("trailing");
    } catch (...) {
      throw std::invalid_argument("builtin: bad arity argument in '" + name + "'");
    }
    if (base == "product_decomposition") return product_decomposition_system(n);
    if (base == "power_decomposition") return power_decomposition_system(n);
  }
  throw std::invalid_argument("builtin: unknown condition '" + name + "'");
}

IdentitySystem taylor_system(unsigned arity, const std::vector<TaylorRow>& rows) {
  if (arity == 0) throw std::invalid_argument("taylor_system: arity must be positive");
  if (rows.size() != arity)
    throw std::invalid_argument("taylor_system: need one row per coordinate");
  IdentitySystem sys;
  sys.signature = {{"t", arity}};
  sys.variables = {"x", "y"};
  auto x = tv("x"), y = tv("y");
  sys.identities.push_back({Term::app("t", std::vector<Term>(arity, x)), x});
  for (unsigned i = 0; i < arity; ++i) {
    const auto& row = rows[i];
    if (row.left.size() != arity || row.right.size() != arity)
      throw std::invalid_argument("taylor_system: row length mismatch");
    if (row.left[i] != 0 || row.right[i] != 1)
      throw std::invalid_argument(
          "taylor_system: row must place x left and y right at its coordinate");
    std::vector<Term> l, r;
    for (unsigned j = 0; j < arity; ++j) {
      l.push_back(row.left[j] ? y : x);
      r.push_back(row.right[j] ? y : x);
    }
    sys.identities.push_back({Term::app("t", std::move(l)), Term::app("t", std::move(r))});
  }
  return sys;
}

// --- identity DSL ---------------------------------------------------------

namespace {

struct LineParser {
  const std::string& text;
  std::size_t pos = 0;
  int line;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("line " + std::to_string(line) + ": " + what);
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (start == pos) fail("expected identifier");
    return text.substr(start, pos - start);
  }

  Term term(const IdentitySystem& sys) {
    auto name = ident();
    bool declared = false;
    for (const auto& [s, a] : sys.signature) {
      (void)a;
      declared |= s == name;
    }
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      if (!declared) fail("undeclared symbol '" + name + "'");
      ++pos;
      std::vector<Term> args;
      if (!eat(')')) {
        while (true) {
          args.push_back(term(sys));
          if (eat(')')) break;
          if (!eat(',')) fail("expected ',' or ')'");
        }
      }
      if (args.size() != sys.arity_of(name))
        fail("arity mismatch for '" + name + "': expected " + std::to_string(sys.arity_of(name)) +
             " arguments, got " + std::to_string(args.size()));
      return Term::app(name, std::move(args));
    }
    if (declared) fail("symbol '" + name + "' used without arguments");
    if (name.size() != 1 || !std::islower(static_cast<unsigned char>(name[0])))
      fail("variables must be single lowercase identifiers, got '" + name + "'");
    return Term::var(name);
  }
};

}  // namespace

IdentitySystem parse_identity_system(const std::string& text) {
  IdentitySystem sys;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string trimmed = raw;
    auto first = trimmed.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = trimmed.find_last_not_of(" \t\r");
    trimmed = trimmed.substr(first, last - first + 1);
    if (trimmed.empty() || trimmed[0] == '#') continue;

    if (!have_header) {
      if (trimmed.rfind("symbols:", 0) != 0)
        throw std::invalid_argument("line " + std::to_string(lineno) +
                                    ": expected header 'symbols: f/2, ...'");
      std::string rest = trimmed.substr(8);
      std::istringstream parts(rest);
      std::string item;
      while (std::getline(parts, item, ',')) {
        auto slash = item.find('/');
        if (slash == std::string::npos)
          throw std::invalid_argument("line " + std::to_string(lineno) +
                                      ": symbol declarations look like name/arity");
        auto strip = [](std::string s) {
          auto b = s.find_first_not_of(" \t");
          auto e = s.find_last_not_of(" \t");
          return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        std::string name = strip(item.substr(0, slash));
        std::string arity_str = strip(item.substr(slash + 1));
        if (name.empty())
          throw std::invalid_argument("line " + std::to_string(lineno) + ": empty symbol name");
        unsigned arity = 0;
        try {
          std::size_t pos = 0;
          arity = static_cast<unsigned>(std::stoul(arity_str, &pos));
          if (pos != arity_str.size()) throw std::invalid_argument("trailing");
        } catch (...) {
          throw std::invalid_argument("line " + std::to_string(lineno) + ": bad arity '" +
                                      arity_str + "'");
        }
        sys.signature.push_back({name, arity});
      }
      if (sys.signature.empty())
        throw std::invalid_argument("line " + std::to_string(lineno) + ": no symbols declared");
      have_header = true;
      continue;
    }

    auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected '='");
    std::string lhs_text = trimmed.substr(0, eq);
    std::string rhs_text = trimmed.substr(eq + 1);

    LineParser lp{lhs_text, 0, lineno};
    Term lhs = lp.term(sys);
    lp.skip_ws();
    if (lp.pos != lhs_text.size())
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": trailing input before '='");
    LineParser rp{rhs_text, 0, lineno};
    Term rhs = rp.term(sys);
    rp.skip_ws();
    if (rp.pos != rhs_text.size())
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": trailing input after term");

    collect_variables(lhs, sys.variables);
    collect_variables(rhs, sys.variables);
    sys.identities.push_back({std::move(lhs), std::move(rhs)});
  }
  if (!have_header) throw std::invalid_argument("line 1: missing 'symbols:' header");
  sys.validate();
  return sys;
}

// --- Taylor pattern search --------------------------------------------------

namespace {

std::uint64_t encode_row(const TaylorRow& row) {
  std::uint64_t code = 0;
  for (auto b : row.left) code = code << 1 | b;
  for (auto b : row.right) code = code << 1 | b;
  return code;
}

// global x/y swap plus exchanging the two sides gives an equivalent row
TaylorRow swap_row(const TaylorRow& row) {
  TaylorRow out;
  out.left.resize(row.right.size());
  out.right.resize(row.left.size());
  for (std::size_t j = 0; j < row.right.size(); ++j) out.left[j] = 1 - row.right[j];
  for (std::size_t j = 0; j < row.left.size(); ++j) out.right[j] = 1 - row.left[j];
  return out;
}

TaylorRow canonical_row(const TaylorRow& row) {
  auto swapped = swap_row(row);
  return encode_row(swapped) < encode_row(row) ? swapped : row;
}

std::vector<std::uint64_t> system_code(const std::vector<TaylorRow>& rows) {
  std::vector<std::uint64_t> code;
  for (const auto& r : rows) code.push_back(encode_row(canonical_row(r)));
  return code;
}

// system transported along a coordinate permutation
std::vector<TaylorRow> permute_system(const std::vector<TaylorRow>& rows,
                                      const std::vector<unsigned>& sigma) {
  const unsigned k = static_cast<unsigned>(rows.size());
  std::vector<TaylorRow> out(k);
  for (unsigned i = 0; i < k; ++i) {
    const auto& src = rows[sigma[i]];
    TaylorRow moved;
    moved.left.resize(k);
    moved.right.resize(k);
    for (unsigned p = 0; p < k; ++p) {
      moved.left[p] = src.left[sigma[p]];
      moved.right[p] = src.right[sigma[p]];
    }
    out[i] = moved;
  }
  return out;
}

bool is_canonical_system(const std::vector<TaylorRow>& rows) {
  const unsigned k = static_cast<unsigned>(rows.size());
  auto base = system_code(rows);
  std::vector<unsigned> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    auto moved = permute_system(rows, sigma);
    bool valid = true;
    for (unsigned i = 0; i < k && valid; ++i)
      if (moved[i].left[i] != 0 || moved[i].right[i] != 1) valid = false;
    if (valid && system_code(moved) < base) return false;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return true;
}

void enumerate_taylor_systems(unsigned k, unsigned coord, std::vector<TaylorRow>& acc,
                              std::vector<std::vector<TaylorRow>>& out) {
  if (coord == k) {
    if (is_canonical_system(acc)) out.push_back(acc);
    return;
  }
  const unsigned free_bits = 2 * (k - 1);
  for (std::uint64_t mask = 0; mask < (1ull << free_bits); ++mask) {
    TaylorRow row;
    row.left.assign(k, 0);
    row.right.assign(k, 0);
    row.right[coord] = 1;
    std::uint64_t m = mask;
    for (unsigned j = 0; j < k; ++j) {
      if (j == coord) continue;
      row.left[j] = m & 1;
      m >>= 1;
    }
    for (unsigned j = 0; j < k; ++j) {
      if (j == coord) continue;
      row.right[j] = m & 1;
      m >>= 1;
    }
    if (encode_row(canonical_row(row)) != encode_row(row)) continue;  // swap-quotient
    acc.push_back(row);
    enumerate_taylor_systems(k, coord + 1, acc, out);
    acc.pop_back();
  }
}

}  // namespace

std::optional<TaylorWitness> search_taylor(const Digraph& g, unsigned max_arity) {
  if (max_arity < 1) throw std::invalid_argument("search_taylor: max_arity must be positive");
  for (unsigned k = 2; k <= max_arity; ++k) {
    std::vector<std::vector<TaylorRow>> systems;
    std::vector<TaylorRow> acc;
    enumerate_taylor_systems(k, 0, acc, systems);
    std::sort(systems.begin(), systems.end(),
              [](const auto& a, const auto& b) { return system_code(a) < system_code(b); });
    for (const auto& rows : systems) {
      auto result = find_polymorphisms(g, taylor_system(k, rows));
      if (result.found()) return TaylorWitness{k, rows, std::move(*result.tables)};
    }
  }
  return std::nullopt;
}

std::optional<std::pair<OperationTable, Vertex>> find_binary_with_unit(const Digraph& g) {
  const Vertex n = g.vertex_count();
  if (n == 0) return std::nullopt;
  auto square = power(g, 2);
  for (Vertex e = 0; e < n; ++e) {
    HomProblem problem;
    problem.source = square;
    problem.target = g;
    for (Vertex x = 0; x < n; ++x) {
      problem.pins.push_back({e * n + x, x});
      problem.pins.push_back({x * n + e, x});
    }
    auto found = find_homomorphism(problem);
    if (found) return std::pair{OperationTable(2, n, found->image), e};
  }
  return std::nullopt;
}

}  // namespace varkit
