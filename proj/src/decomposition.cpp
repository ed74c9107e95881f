#include "varkit/decomposition.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "varkit/detail/decomp_check.hpp"
#include "varkit/indexing.hpp"

namespace varkit {

namespace detail {

std::vector<Partition> column_partitions(const OperationTable& f) {
  if (f.arity == 0) throw std::invalid_argument("column_partitions: nullary table");
  const Vertex m = f.universe;
  const unsigned n = f.arity;
  std::vector<Partition> out;
  out.reserve(n);
  if (m == 0) {
    for (unsigned i = 0; i < n; ++i) out.push_back(Partition(std::vector<Vertex>{}));
    return out;
  }
  std::uint64_t rest = 1;
  for (unsigned i = 0; i + 1 < n; ++i) rest *= m;

  std::uint64_t stride = 1;
  std::vector<std::uint64_t> strides(n);
  for (unsigned i = n; i-- > 0;) {
    strides[i] = stride;
    stride *= m;
  }

  for (unsigned i = 0; i < n; ++i) {
    std::map<std::vector<Vertex>, Vertex> ids;
    std::vector<Vertex> block_of(m);
    std::vector<Vertex> column(rest);
    for (Vertex p = 0; p < m; ++p) {
      for (std::uint64_t w = 0; w < rest; ++w) {
        std::uint64_t high = w / strides[i], low = w % strides[i];
        column[w] = f.values[(high * m + p) * strides[i] + low];
      }
      auto [it, fresh] = ids.emplace(column, static_cast<Vertex>(ids.size()));
      (void)fresh;
      block_of[p] = it->second;
    }
    out.push_back(Partition(std::move(block_of)));
  }
  return out;
}

std::optional<std::string> decomposition_violation(const Digraph& a, const OperationTable& f) {
  if (f.universe != a.vertex_count()) return "table universe differs from the vertex count";
  if (f.arity == 0) return "decomposition operations must have positive arity";
  const Vertex m = f.universe;
  const unsigned n = f.arity;
  if (m == 0) return std::nullopt;

  // idempotence
  std::uint64_t diag_step = 0;
  {
    std::uint64_t s = 1;
    for (unsigned i = 0; i < n; ++i) {
      diag_step += s;
      s *= m;
    }
  }
  for (Vertex x = 0; x < m; ++x)
    if (f.values[x * diag_step] != x) {
      std::ostringstream os;
      os << "idempotence fails at " << x;
      return os.str();
    }

  // composition identity via the column classes: f(u) must lie in the same
  // class as u_i at every coordinate
  auto nus = column_partitions(f);
  {
    std::vector<Vertex> tuple(n, 0);
    std::uint64_t idx = 0;
    while (true) {
      Vertex v = f.values[idx];
      for (unsigned i = 0; i < n; ++i)
        if (!nus[i].same_block(v, tuple[i])) {
          std::ostringstream os;
          os << "composition identity fails at cell " << idx << " in coordinate " << i;
          return os.str();
        }
      ++idx;
      if (!next_tuple(std::span<Vertex>(tuple), m)) break;
    }
  }

  // the factorization map must be a bijection
  std::uint64_t prod = 1;
  for (const auto& nu : nus) prod *= nu.block_count();
  if (prod != m) return "factor sizes do not multiply to the universe size";
  std::vector<std::uint32_t> sizes(n);
  for (unsigned i = 0; i < n; ++i) sizes[i] = nus[i].block_count();
  std::vector<bool> seen(m, false);
  std::vector<Vertex> blocks(n);
  for (Vertex x = 0; x < m; ++x) {
    for (unsigned i = 0; i < n; ++i) blocks[i] = nus[i].block_of(x);
    auto id = tuple_index_mixed(blocks, sizes);
    if (seen[id]) return "factorization map is not injective";
    seen[id] = true;
  }

  // edge preservation through the factorization: the product of the
  // quotients must pull back edge-for-edge
  std::vector<Digraph> quotients;
  std::uint64_t edge_prod = 1;
  for (const auto& nu : nus) {
    quotients.push_back(quotient(a, nu));
    edge_prod *= quotients.back().edge_count();
    if (edge_prod > a.edge_count())
      return "edge preservation fails: quotient product has extra edges";
  }
  if (edge_prod != a.edge_count())
    return "edge preservation fails: quotient product loses edges";
  auto prod_graph = product(quotients);
  std::vector<Vertex> inverse(m);
  for (Vertex x = 0; x < m; ++x) {
    for (unsigned i = 0; i < n; ++i) blocks[i] = nus[i].block_of(x);
    inverse[tuple_index_mixed(blocks, sizes)] = x;
  }
  for (auto [bu, bv] : prod_graph.edges())
    if (!a.has_edge(inverse[bu], inverse[bv])) {
      std::ostringstream os;
      os << "edge preservation fails: product edge (" << bu << "," << bv
         << ") does not pull back";
      return os.str();
    }
  return std::nullopt;
}

}  // namespace detail

namespace {

Vertex iterate_unary(const OperationTable& g, Vertex x, unsigned times) {
  for (unsigned i = 0; i < times; ++i) x = g.values[x];
  return x;
}

}  // namespace

std::vector<Partition> nu_equivalences(const Digraph& a, const OperationTable& f,
                                       bool verify_exhaustive) {
  if (auto why = detail::decomposition_violation(a, f))
    throw std::invalid_argument("nu_equivalences: " + *why);
  const Vertex m = f.universe;
  const unsigned n = f.arity;
  std::vector<Partition> out;
  if (m == 0) {
    for (unsigned i = 0; i < n; ++i) out.push_back(Partition(std::vector<Vertex>{}));
    return out;
  }

  std::vector<std::uint64_t> strides(n);
  {
    std::uint64_t s = 1;
    for (unsigned i = n; i-- > 0;) {
      strides[i] = s;
      s *= m;
    }
  }
  std::uint64_t diag_step = 0;
  for (unsigned i = 0; i < n; ++i) diag_step += strides[i];

  for (unsigned i = 0; i < n; ++i) {
    // membership rule: x ~ y iff substituting y at position i of the
    // constant-x tuple leaves the value at x
    auto related = [&](Vertex x, Vertex y) {
      std::uint64_t idx = x * (diag_step - strides[i]) + static_cast<std::uint64_t>(y) * strides[i];
      return f.values[idx] == x;
    };
    std::vector<Vertex> block_of(m, 0);
    std::vector<Vertex> rep;  // representative of each block discovered so far
    for (Vertex x = 0; x < m; ++x) {
      bool placed = false;
      for (Vertex b = 0; b < rep.size() && !placed; ++b)
        if (related(rep[b], x)) {
          block_of[x] = b;
          placed = true;
        }
      if (!placed) {
        block_of[x] = static_cast<Vertex>(rep.size());
        rep.push_back(x);
      }
    }
    Partition nu(block_of);
    // the rule must define an equivalence (it does for any table passing
    // the precondition; verify rather than trust)
    for (Vertex x = 0; x < m; ++x)
      for (Vertex y = 0; y < m; ++y)
        if (related(x, y) != nu.same_block(x, y))
          throw std::logic_error("nu_equivalences: membership rule is not an equivalence");
    out.push_back(std::move(nu));
  }

  if (verify_exhaustive) {
    // existential definition over all witness tuples
    std::uint64_t rest = 1;
    for (unsigned i = 0; i + 1 < n; ++i) rest *= m;
    if (rest > 10'000'000) throw cap_exceeded("nu_equivalences: exhaustive check too large");
    for (unsigned i = 0; i < n; ++i) {
      for (Vertex x = 0; x < m; ++x)
        for (Vertex y = 0; y < m; ++y) {
          bool exists = false;
          for (std::uint64_t w = 0; w < rest && !exists; ++w) {
            std::uint64_t high = w / strides[i], low = w % strides[i];
            std::uint64_t base = (high * m) * strides[i] + low;
            if (f.values[base + x * strides[i]] == f.values[base + y * strides[i]]) exists = true;
          }
          if (exists != out[i].same_block(x, y))
            throw std::logic_error(
                "nu_equivalences: membership rule disagrees with the existential definition");
        }
    }
  }
  return out;
}

DecompositionWitness product_decompose(const Digraph& a, const OperationTable& f) {
  auto nus = nu_equivalences(a, f);
  const Vertex m = a.vertex_count();
  const unsigned n = f.arity;

  DecompositionWitness w;
  w.n = n;
  w.f = f;
  w.nus = nus;
  for (const auto& nu : nus) w.factors.push_back(quotient(a, nu));

  std::vector<std::uint32_t> sizes(n);
  for (unsigned i = 0; i < n; ++i) sizes[i] = nus[i].block_count();
  std::vector<Vertex> image(m);
  std::vector<Vertex> blocks(n);
  for (Vertex x = 0; x < m; ++x) {
    for (unsigned i = 0; i < n; ++i) blocks[i] = nus[i].block_of(x);
    image[x] = static_cast<Vertex>(tuple_index_mixed(blocks, sizes));
  }
  auto prod_graph = product(w.factors);
  w.iso = VertexMap(m, prod_graph.vertex_count(), image);

  // the theorem guarantees an isomorphism; a failure here is an internal
  // invariant violation, never a result
  if (prod_graph.vertex_count() != m)
    throw std::logic_error("product_decompose: factorization is not bijective");
  std::vector<bool> seen(m, false);
  for (Vertex x = 0; x < m; ++x) {
    if (seen[image[x]]) throw std::logic_error("product_decompose: factorization is not injective");
    seen[image[x]] = true;
  }
  std::vector<Vertex> inverse(m);
  for (Vertex x = 0; x < m; ++x) inverse[image[x]] = x;
  for (auto [u, v] : a.edges())
    if (!prod_graph.has_edge(image[u], image[v]))
      throw std::logic_error("product_decompose: map does not preserve edges");
  for (auto [u, v] : prod_graph.edges())
    if (!a.has_edge(inverse[u], inverse[v]))
      throw std::logic_error("product_decompose: inverse does not preserve edges");
  return w;
}

DecompositionWitness power_decompose(const Digraph& a, const OperationTable& f,
                                     const OperationTable& g) {
  if (auto why = detail::decomposition_violation(a, f))
    throw std::invalid_argument("power_decompose: " + *why);
  const Vertex m = a.vertex_count();
  const unsigned n = f.arity;
  if (g.arity != 1 || g.universe != m)
    throw std::invalid_argument("power_decompose: shift must be unary over the same universe");

  for (Vertex x = 0; x < m; ++x)
    if (iterate_unary(g, x, n) != x)
      throw std::invalid_argument("power_decompose: identity g^n(x) = x fails");
  for (auto [u, v] : a.edges())
    if (!a.has_edge(g.values[u], g.values[v]))
      throw std::invalid_argument("power_decompose: shift does not preserve edges");

  // rotation identity g(f(x_1,...,x_n)) = f(g(x_2),...,g(x_n),g(x_1))
  if (m > 0) {
    std::vector<Vertex> tuple(n, 0), rotated(n);
    while (true) {
      for (unsigned j = 0; j < n; ++j) rotated[j] = g.values[tuple[(j + 1) % n]];
      if (g.values[f.apply(tuple)] != f.apply(rotated))
        throw std::invalid_argument("power_decompose: rotation identity fails");
      if (!next_tuple(std::span<Vertex>(tuple), m)) break;
    }
  }

  auto nus = nu_equivalences(a, f);

  // the shift must rotate the kernels: g(nu_i) = nu_{i-1 mod n}
  for (unsigned i = 0; i < n; ++i) {
    unsigned prev = (i + n - 1) % n;
    for (Vertex x = 0; x < m; ++x)
      for (Vertex y = 0; y < m; ++y)
        if (nus[i].same_block(x, y) != nus[prev].same_block(g.values[x], g.values[y]))
          throw std::logic_error("power_decompose: shift does not rotate the factor kernels");
  }

  DecompositionWitness w;
  w.n = n;
  w.f = f;
  w.shift = g;
  w.nus = nus;
  for (const auto& nu : nus) w.factors.push_back(quotient(a, nu));
  for (unsigned i = 1; i < n; ++i)
    if (!is_isomorphic(w.factors[0], w.factors[i]))
      throw std::logic_error("power_decompose: factors are not pairwise isomorphic");

  // a ~ base^n through x -> (block_1(x), block_1(g x), ..., block_1(g^(n-1) x))
  const auto& base_nu = nus[0];
  const Vertex bsize = base_nu.block_count();
  std::vector<Vertex> image(m);
  for (Vertex x = 0; x < m; ++x) {
    std::uint64_t idx = 0;
    Vertex cur = x;
    for (unsigned i = 0; i < n; ++i) {
      idx = idx * bsize + base_nu.block_of(cur);
      cur = g.values[cur];
    }
    image[x] = static_cast<Vertex>(idx);
  }
  auto target = power(w.factors[0], n);
  if (target.vertex_count() != m)
    throw std::logic_error("power_decompose: base power has the wrong size");
  std::vector<bool> seen(m, false);
  for (Vertex x = 0; x < m; ++x) {
    if (seen[image[x]]) throw std::logic_error("power_decompose: power map is not injective");
    seen[image[x]] = true;
  }
  std::vector<Vertex> inverse(m);
  for (Vertex x = 0; x < m; ++x) inverse[image[x]] = x;
  for (auto [u, v] : a.edges())
    if (!target.has_edge(image[u], image[v]))
      throw std::logic_error("power_decompose: power map does not preserve edges");
  for (auto [u, v] : target.edges())
    if (!a.has_edge(inverse[u], inverse[v]))
      throw std::logic_error("power_decompose: power map inverse does not preserve edges");
  w.iso = VertexMap(m, target.vertex_count(), image);
  return w;
}

NthPowerResult is_nth_power(const Digraph& a, unsigned n) {
  if (n == 0) throw std::invalid_argument("is_nth_power: n must be positive");
  auto search = find_polymorphisms(a, builtin("power_decomposition(" + std::to_string(n) + ")"));
  NthPowerResult result;
  result.explored_nodes = search.explored_nodes;
  if (!search.found()) return result;
  const auto& tables = *search.tables;
  result.witness = power_decompose(a, tables.at("f"), tables.at("g"));
  return result;
}

}  // namespace varkit
