#include "varkit/structures.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "varkit/indexing.hpp"

namespace varkit {

namespace {

struct Dsu {
  std::vector<Vertex> parent;
  explicit Dsu(Vertex n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  Vertex find(Vertex x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Digraph::Digraph(Vertex vertex_count, std::vector<Edge> edges)
    : n_(vertex_count), edges_(std::move(edges)) {
  for (auto [u, v] : edges_) {
    if (u >= n_ || v >= n_) throw std::invalid_argument("digraph: edge endpoint out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("digraph: duplicate edge");

  out_off_.assign(n_ + 1, 0);
  in_off_.assign(n_ + 1, 0);
  for (auto [u, v] : edges_) {
    ++out_off_[u + 1];
    ++in_off_[v + 1];
  }
  for (Vertex i = 0; i < n_; ++i) {
    out_off_[i + 1] += out_off_[i];
    in_off_[i + 1] += in_off_[i];
  }
  out_flat_.resize(edges_.size());
  in_flat_.resize(edges_.size());
  std::vector<std::uint32_t> opos(out_off_.begin(), out_off_.end() - 1);
  std::vector<std::uint32_t> ipos(in_off_.begin(), in_off_.end() - 1);
  for (auto [u, v] : edges_) {
    out_flat_[opos[u]++] = v;
    in_flat_[ipos[v]++] = u;
  }
  // edges_ is sorted, so out lists come out ascending; sort in lists too.
  for (Vertex v = 0; v < n_; ++v)
    std::sort(in_flat_.begin() + in_off_[v], in_flat_.begin() + in_off_[v + 1]);
}

bool Digraph::has_edge(Vertex u, Vertex v) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

std::span<const Vertex> Digraph::out_neighbors(Vertex u) const {
  return {out_flat_.data() + out_off_[u], out_off_[u + 1] - out_off_[u]};
}

std::span<const Vertex> Digraph::in_neighbors(Vertex u) const {
  return {in_flat_.data() + in_off_[u], in_off_[u + 1] - in_off_[u]};
}

VertexMap::VertexMap(Vertex source, Vertex target, std::vector<Vertex> img)
    : source_count(source), target_count(target), image(std::move(img)) {
  if (image.size() != source_count)
    throw std::invalid_argument("vertex map: image length mismatch");
  for (auto v : image)
    if (v >= target_count) throw std::invalid_argument("vertex map: image out of range");
}

VertexMap VertexMap::identity(Vertex n) {
  std::vector<Vertex> img(n);
  std::iota(img.begin(), img.end(), 0);
  return {n, n, std::move(img)};
}

Partition::Partition(std::vector<Vertex> block_of) : block_of_(std::move(block_of)) {
  std::vector<Vertex> relabel(block_of_.size(), UINT32_MAX);
  Vertex next = 0;
  for (auto& b : block_of_) {
    if (b >= block_of_.size() && !block_of_.empty())
      throw std::invalid_argument("partition: block label out of range");
    if (relabel[b] == UINT32_MAX) relabel[b] = next++;
    b = relabel[b];
  }
  blocks_ = next;
}

Partition Partition::discrete(Vertex n) {
  std::vector<Vertex> b(n);
  std::iota(b.begin(), b.end(), 0);
  return Partition(std::move(b));
}

Partition Partition::total(Vertex n) { return Partition(std::vector<Vertex>(n, 0)); }

std::vector<std::vector<Vertex>> Partition::blocks() const {
  std::vector<std::vector<Vertex>> out(blocks_);
  for (Vertex v = 0; v < block_of_.size(); ++v) out[block_of_[v]].push_back(v);
  return out;
}

bool Partition::refines(const Partition& other) const {
  if (universe_size() != other.universe_size())
    throw std::invalid_argument("partition: universe mismatch");
  std::vector<Vertex> rep(blocks_, UINT32_MAX);
  for (Vertex v = 0; v < block_of_.size(); ++v) {
    Vertex b = block_of_[v];
    if (rep[b] == UINT32_MAX) rep[b] = other.block_of(v);
    else if (rep[b] != other.block_of(v)) return false;
  }
  return true;
}

Partition Partition::meet(const Partition& p, const Partition& q) {
  if (p.universe_size() != q.universe_size())
    throw std::invalid_argument("partition: universe mismatch");
  Vertex n = p.universe_size();
  std::map<std::pair<Vertex, Vertex>, Vertex> ids;
  std::vector<Vertex> out(n);
  for (Vertex v = 0; v < n; ++v) {
    auto key = std::pair{p.block_of(v), q.block_of(v)};
    auto [it, fresh] = ids.emplace(key, static_cast<Vertex>(ids.size()));
    (void)fresh;
    out[v] = it->second;
  }
  return Partition(std::move(out));
}

Partition Partition::join(const Partition& p, const Partition& q) {
  if (p.universe_size() != q.universe_size())
    throw std::invalid_argument("partition: universe mismatch");
  Vertex n = p.universe_size();
  Dsu dsu(n);
  std::vector<Vertex> first_of_p(p.block_count(), UINT32_MAX);
  std::vector<Vertex> first_of_q(q.block_count(), UINT32_MAX);
  for (Vertex v = 0; v < n; ++v) {
    auto& fp = first_of_p[p.block_of(v)];
    if (fp == UINT32_MAX) fp = v;
    else dsu.unite(fp, v);
    auto& fq = first_of_q[q.block_of(v)];
    if (fq == UINT32_MAX) fq = v;
    else dsu.unite(fq, v);
  }
  std::vector<Vertex> out(n);
  for (Vertex v = 0; v < n; ++v) out[v] = dsu.find(v);
  return Partition(std::move(out));
}

Digraph make_c() {
  return Digraph(3, {{0, 1}, {1, 2}, {2, 0}, {0, 0}, {1, 1}, {2, 2}});
}

Digraph make_c1() {
  return Digraph(4, {{0, 1}, {1, 2}, {2, 0}, {0, 0}, {1, 1}, {2, 2}, {3, 3}});
}

Digraph make_loop() { return Digraph(1, {{0, 0}}); }

Digraph make_reflexive_edge() { return Digraph(2, {{0, 0}, {1, 1}, {0, 1}}); }

Digraph power(const Digraph& g, unsigned k, std::uint64_t cap) {
  std::vector<Digraph> gs(k, g);
  if (k == 0) return Digraph(1, {{0, 0}});
  auto nverts = checked_pow(g.vertex_count(), k, cap);
  auto nedges = checked_pow(g.edge_count(), k, cap);
  if (!nverts || !nedges) throw cap_exceeded("power: size cap exceeded");
  return product(gs, cap);
}

Digraph product(const std::vector<Digraph>& gs, std::uint64_t cap) {
  if (gs.empty()) throw std::invalid_argument("product: empty factor list");
  std::uint64_t nverts = 1, nedges = 1;
  for (const auto& g : gs) {
    if (g.vertex_count() != 0 && nverts > cap / g.vertex_count())
      throw cap_exceeded("product: vertex cap exceeded");
    nverts *= g.vertex_count();
    if (g.edge_count() != 0 && nedges > cap / g.edge_count())
      throw cap_exceeded("product: edge cap exceeded");
    nedges *= g.edge_count();
    if (nverts > cap || nedges > cap) throw cap_exceeded("product: size cap exceeded");
  }

  const std::size_t k = gs.size();
  std::vector<std::uint32_t> sizes(k);
  for (std::size_t i = 0; i < k; ++i) sizes[i] = gs[i].vertex_count();

  std::vector<Edge> edges;
  if (nverts > 0 && nedges > 0) {
    edges.reserve(nedges);
    // odometer over edge choices per coordinate
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      std::uint64_t uidx = 0, vidx = 0;
      for (std::size_t i = 0; i < k; ++i) {
        auto [u, v] = gs[i].edges()[pick[i]];
        uidx = uidx * sizes[i] + u;
        vidx = vidx * sizes[i] + v;
      }
      edges.emplace_back(static_cast<Vertex>(uidx), static_cast<Vertex>(vidx));
      std::size_t i = k;
      while (i-- > 0) {
        if (++pick[i] < gs[i].edge_count()) break;
        pick[i] = 0;
        if (i == 0) goto done;
      }
      if (k == 0) break;
    }
  done:;
  }
  return Digraph(static_cast<Vertex>(nverts), std::move(edges));
}

Digraph disjoint_union(const std::vector<Digraph>& gs) {
  std::uint64_t n = 0, m = 0;
  for (const auto& g : gs) {
    n += g.vertex_count();
    m += g.edge_count();
  }
  if (n > UINT32_MAX) throw cap_exceeded("disjoint_union: too many vertices");
  std::vector<Edge> edges;
  edges.reserve(m);
  Vertex offset = 0;
  for (const auto& g : gs) {
    for (auto [u, v] : g.edges()) edges.emplace_back(u + offset, v + offset);
    offset += g.vertex_count();
  }
  return Digraph(static_cast<Vertex>(n), std::move(edges));
}

SpannedSubdigraph spanned_subdigraph(const Digraph& g, const std::vector<Vertex>& s) {
  std::vector<Vertex> verts(s);
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  for (auto v : verts)
    if (v >= g.vertex_count()) throw std::invalid_argument("spanned_subdigraph: vertex out of range");

  std::vector<Vertex> new_of(g.vertex_count(), UINT32_MAX);
  for (Vertex i = 0; i < verts.size(); ++i) new_of[verts[i]] = i;

  std::vector<Edge> edges;
  for (auto [u, v] : g.edges())
    if (new_of[u] != UINT32_MAX && new_of[v] != UINT32_MAX)
      edges.emplace_back(new_of[u], new_of[v]);

  SpannedSubdigraph out;
  out.graph = Digraph(static_cast<Vertex>(verts.size()), std::move(edges));
  out.embedding = VertexMap(static_cast<Vertex>(verts.size()), g.vertex_count(), verts);
  return out;
}

std::vector<std::vector<Vertex>> components(const Digraph& g) {
  Dsu dsu(g.vertex_count());
  for (auto [u, v] : g.edges()) dsu.unite(u, v);
  std::map<Vertex, std::vector<Vertex>> classes;  // keyed by least element
  for (Vertex v = 0; v < g.vertex_count(); ++v) classes[dsu.find(v)].push_back(v);
  std::vector<std::vector<Vertex>> out;
  out.reserve(classes.size());
  for (auto& [root, verts] : classes) out.push_back(std::move(verts));
  return out;
}

bool is_connected(const Digraph& g) { return components(g).size() <= 1; }

Digraph quotient(const Digraph& g, const Partition& p) {
  if (p.universe_size() != g.vertex_count())
    throw std::invalid_argument("quotient: partition size mismatch");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (auto [u, v] : g.edges()) edges.emplace_back(p.block_of(u), p.block_of(v));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Digraph(p.block_count(), std::move(edges));
}

namespace {

// Joint 1-dimensional refinement; colors are comparable across g and h.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> refine_colors(
    const Digraph& g, const Digraph& h) {
  auto init = [](const Digraph& d) {
    std::vector<std::tuple<std::size_t, std::size_t, bool>> sig(d.vertex_count());
    for (Vertex v = 0; v < d.vertex_count(); ++v)
      sig[v] = {d.out_degree(v), d.in_degree(v), d.has_edge(v, v)};
    return sig;
  };
  auto sg = init(g), sh = init(h);
  std::map<std::tuple<std::size_t, std::size_t, bool>, std::uint32_t> dict;
  auto assign = [&dict](const auto& sigs) {
    std::vector<std::uint32_t> colors(sigs.size());
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      auto [it, fresh] = dict.emplace(sigs[i], static_cast<std::uint32_t>(dict.size()));
      (void)fresh;
      colors[i] = it->second;
    }
    return colors;
  };
  auto cg = assign(sg), ch = assign(sh);

  while (true) {
    using Sig = std::tuple<std::uint32_t, std::vector<std::uint32_t>, std::vector<std::uint32_t>>;
    auto next = [](const Digraph& d, const std::vector<std::uint32_t>& c) {
      std::vector<Sig> sigs(d.vertex_count());
      for (Vertex v = 0; v < d.vertex_count(); ++v) {
        std::vector<std::uint32_t> outs, ins;
        for (auto w : d.out_neighbors(v)) outs.push_back(c[w]);
        for (auto w : d.in_neighbors(v)) ins.push_back(c[w]);
        std::sort(outs.begin(), outs.end());
        std::sort(ins.begin(), ins.end());
        sigs[v] = {c[v], std::move(outs), std::move(ins)};
      }
      return sigs;
    };
    auto ng = next(g, cg), nh = next(h, ch);
    std::map<Sig, std::uint32_t> ndict;
    auto nassign = [&ndict](const auto& sigs) {
      std::vector<std::uint32_t> colors(sigs.size());
      for (std::size_t i = 0; i < sigs.size(); ++i) {
        auto [it, fresh] = ndict.emplace(sigs[i], static_cast<std::uint32_t>(ndict.size()));
        (void)fresh;
        colors[i] = it->second;
      }
      return colors;
    };
    auto ncg = nassign(ng), nch = nassign(nh);
    if (ncg == cg && nch == ch) break;  // stable permutation of color ids is
    // possible; compare class structure instead of exact equality
    auto classes = [](const std::vector<std::uint32_t>& c) {
      std::map<std::uint32_t, std::vector<std::size_t>> m;
      for (std::size_t i = 0; i < c.size(); ++i) m[c[i]].push_back(i);
      std::vector<std::vector<std::size_t>> out;
      for (auto& [k, v] : m) out.push_back(v);
      std::sort(out.begin(), out.end());
      return out;
    };
    bool stable = classes(ncg) == classes(cg) && classes(nch) == classes(ch);
    cg = std::move(ncg);
    ch = std::move(nch);
    if (stable) break;
  }
  return {cg, ch};
}

}  // namespace

std::optional<VertexMap> is_isomorphic(const Digraph& g, const Digraph& h) {
  if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count())
    return std::nullopt;
  const Vertex n = g.vertex_count();
  if (n == 0) return VertexMap(0, 0, {});

  auto [cg, ch] = refine_colors(g, h);
  {
    auto hist = [](std::vector<std::uint32_t> c) {
      std::sort(c.begin(), c.end());
      return c;
    };
    if (hist(cg) != hist(ch)) return std::nullopt;
  }

  std::vector<Vertex> image(n, UINT32_MAX);
  std::vector<bool> used(n, false);

  auto consistent = [&](Vertex u, Vertex x) {
    if (cg[u] != ch[x]) return false;
    for (Vertex w = 0; w < n; ++w) {
      if (image[w] == UINT32_MAX) continue;
      if (g.has_edge(u, w) != h.has_edge(x, image[w])) return false;
      if (g.has_edge(w, u) != h.has_edge(image[w], x)) return false;
    }
    return g.has_edge(u, u) == h.has_edge(x, x);
  };

  // plain lexicographic backtracking; returns the first full map found
  std::vector<Vertex> stack;
  Vertex u = 0;
  Vertex start = 0;
  while (true) {
    Vertex x = start;
    for (; x < n; ++x)
      if (!used[x] && consistent(u, x)) break;
    if (x < n) {
      image[u] = x;
      used[x] = true;
      stack.push_back(x);
      if (u + 1 == n) return VertexMap(n, n, image);
      ++u;
      start = 0;
    } else {
      if (stack.empty()) return std::nullopt;
      --u;
      Vertex prev = stack.back();
      stack.pop_back();
      used[prev] = false;
      image[u] = UINT32_MAX;
      start = prev + 1;
    }
  }
}

StructurePredicates structure_predicates(const Digraph& g) {
  StructurePredicates p{true, true, true};
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (!g.has_edge(v, v)) p.reflexive = false;
  for (auto [u, v] : g.edges()) {
    if (u != v && g.has_edge(v, u)) p.antisymmetric = false;
    if (u != v) {
      unsigned third = 0;
      for (auto w : g.out_neighbors(v))
        if (w != u && w != v && g.has_edge(w, u)) ++third;
      if (third > 1) p.unique_triangle = false;
    }
  }
  return p;
}

Digraph digraph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("digraph json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw std::invalid_argument("digraph json: expected object with 'vertices' and 'edges'");
  if (!j["vertices"].is_number_unsigned())
    throw std::invalid_argument("digraph json: 'vertices' must be a non-negative integer");
  std::uint64_t n = j["vertices"].get<std::uint64_t>();
  if (n > UINT32_MAX) throw std::invalid_argument("digraph json: vertex count too large");
  if (!j["edges"].is_array()) throw std::invalid_argument("digraph json: 'edges' must be an array");
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
      throw std::invalid_argument("digraph json: each edge must be a pair of non-negative integers");
    std::uint64_t u = e[0].get<std::uint64_t>(), v = e[1].get<std::uint64_t>();
    if (u >= n || v >= n) throw std::invalid_argument("digraph json: edge endpoint out of range");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  auto sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("digraph json: duplicate edge");
  return Digraph(static_cast<Vertex>(n), std::move(edges));
}

std::string digraph_to_json(const Digraph& g) {
  std::ostringstream out;
  out << "{\"vertices\":" << g.vertex_count() << ",\"edges\":[";
  bool first = true;
  for (auto [u, v] : g.edges()) {
    if (!first) out << ",";
    first = false;
    out << "[" << u << "," << v << "]";
  }
  out << "]}";
  return out.str();
}

}  // namespace varkit
