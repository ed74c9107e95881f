#include "varkit/hom_search.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "varkit/indexing.hpp"

namespace varkit {

namespace {

// Dynamic bitset sized for the target vertex set.
struct Bits {
  std::vector<std::uint64_t> w;

  static Bits none(std::size_t n) {
    Bits b;
    b.w.assign((n + 63) / 64, 0);
    return b;
  }
  static Bits all(std::size_t n) {
    Bits b = none(n);
    for (std::size_t i = 0; i < n; ++i) b.set(i);
    return b;
  }
  void set(std::size_t i) { w[i / 64] |= 1ull << (i % 64); }
  bool empty() const {
    for (auto x : w)
      if (x) return false;
    return true;
  }
  bool intersect(const Bits& o) {  // *this &= o; true if changed
    bool changed = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto nw = w[i] & o.w[i];
      changed |= nw != w[i];
      w[i] = nw;
    }
    return changed;
  }
  void unite(const Bits& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
  }
  bool intersects(const Bits& o) const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] & o.w[i]) return true;
    return false;
  }
  int first() const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i]) return static_cast<int>(i * 64 + __builtin_ctzll(w[i]));
    return -1;
  }
  int next_after(int v) const {
    for (std::size_t i = (v + 1) / 64; i < w.size(); ++i) {
      auto x = w[i];
      if (static_cast<std::size_t>(v + 1) > i * 64) x &= ~0ull << ((v + 1) - i * 64);
      if (x) return static_cast<int>(i * 64 + __builtin_ctzll(x));
    }
    return -1;
  }
};

class HomSolver {
 public:
  HomSolver(const Digraph& source, const Digraph& target) : src_(source), tgt_(target) {
    const auto n = tgt_.vertex_count();
    out_.assign(n, Bits::none(n));
    in_.assign(n, Bits::none(n));
    loop_ = Bits::none(n);
    for (auto [u, v] : tgt_.edges()) {
      out_[u].set(v);
      in_[v].set(u);
      if (u == v) loop_.set(u);
    }
    domains_.assign(src_.vertex_count(), Bits::all(n));
  }

  void restrict_domain(Vertex v, const Bits& allowed) { domains_[v].intersect(allowed); }

  void pin(Vertex v, Vertex img) {
    Bits single = Bits::none(tgt_.vertex_count());
    single.set(img);
    domains_[v].intersect(single);
  }

  // Enumerates in lexicographic order of the image array.
  void run(std::optional<std::uint64_t> limit, std::vector<VertexMap>& out) {
    if (!propagate_all()) return;
    image_.assign(src_.vertex_count(), 0);
    dfs(0, limit, out);
  }

  Bits domain_mask(const std::vector<Vertex>& verts) const {
    Bits b = Bits::none(tgt_.vertex_count());
    for (auto v : verts) b.set(v);
    return b;
  }

 private:
  bool revise_edge(Vertex a, Vertex b, std::deque<Vertex>& queue) {
    // constraint: (f a, f b) must be an edge of the target
    if (a == b) {
      if (domains_[a].intersect(loop_)) {
        if (domains_[a].empty()) return false;
        queue.push_back(a);
      }
      return true;
    }
    Bits support = Bits::none(tgt_.vertex_count());
    for (int x = domains_[a].first(); x >= 0; x = domains_[a].next_after(x))
      support.unite(out_[x]);
    if (domains_[b].intersect(support)) {
      if (domains_[b].empty()) return false;
      queue.push_back(b);
    }
    Bits keep = Bits::none(tgt_.vertex_count());
    for (int x = domains_[a].first(); x >= 0; x = domains_[a].next_after(x))
      if (out_[static_cast<std::size_t>(x)].intersects(domains_[b])) keep.set(x);
    if (domains_[a].intersect(keep)) {
      if (domains_[a].empty()) return false;
      queue.push_back(a);
    }
    return true;
  }

  // arc consistency over both edge directions, rerun to fixpoint
  bool propagate_from(std::deque<Vertex> queue) {
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop_front();
      for (auto w : src_.out_neighbors(v))
        if (!revise_edge(v, w, queue)) return false;
      for (auto w : src_.in_neighbors(v))
        if (!revise_edge(w, v, queue)) return false;
    }
    return true;
  }

  bool propagate_all() {
    std::deque<Vertex> queue;
    for (Vertex v = 0; v < src_.vertex_count(); ++v) queue.push_back(v);
    return propagate_from(std::move(queue));
  }

  void dfs(Vertex depth, std::optional<std::uint64_t>& limit, std::vector<VertexMap>& out) {
    if (limit && out.size() >= *limit) return;
    if (depth == src_.vertex_count()) {
      out.emplace_back(src_.vertex_count(), tgt_.vertex_count(), image_);
      return;
    }
    auto saved = domains_;
    for (int x = domains_[depth].first(); x >= 0; x = domains_[depth].next_after(x)) {
      Bits single = Bits::none(tgt_.vertex_count());
      single.set(static_cast<std::size_t>(x));
      domains_[depth] = single;
      if (propagate_from({{depth}})) {
        image_[depth] = static_cast<Vertex>(x);
        dfs(depth + 1, limit, out);
        if (limit && out.size() >= *limit) {
          domains_ = saved;
          return;
        }
      }
      domains_ = saved;
    }
  }

  const Digraph& src_;
  const Digraph& tgt_;
  std::vector<Bits> out_, in_;
  Bits loop_;
  std::vector<Bits> domains_;
  std::vector<Vertex> image_;
};

}  // namespace

bool is_homomorphism(const VertexMap& f, const Digraph& g, const Digraph& h) {
  if (f.source_count != g.vertex_count() || f.target_count != h.vertex_count())
    throw std::invalid_argument("is_homomorphism: dimension mismatch");
  for (auto [u, v] : g.edges())
    if (!h.has_edge(f(u), f(v))) return false;
  return true;
}

std::vector<VertexMap> enumerate_homomorphisms(const HomProblem& p,
                                               std::optional<std::uint64_t> limit) {
  if (limit && *limit == 0) return {};
  HomSolver solver(p.source, p.target);
  std::vector<std::optional<Vertex>> pinned(p.source.vertex_count());
  for (auto [v, img] : p.pins) {
    if (v >= p.source.vertex_count() || img >= p.target.vertex_count())
      throw std::invalid_argument("hom problem: pin out of range");
    if (pinned[v] && *pinned[v] != img)
      throw std::invalid_argument("hom problem: inconsistent pins");
    pinned[v] = img;
    solver.pin(v, img);
  }
  std::vector<VertexMap> out;
  solver.run(limit, out);
  return out;
}

std::optional<VertexMap> find_homomorphism(const HomProblem& p) {
  auto found = enumerate_homomorphisms(p, 1);
  if (found.empty()) return std::nullopt;
  return found.front();
}

std::optional<VertexMap> find_retraction(const Digraph& g, const std::vector<Vertex>& sub) {
  for (auto v : sub)
    if (v >= g.vertex_count()) throw std::invalid_argument("find_retraction: vertex out of range");
  HomSolver solver(g, g);
  auto allowed = solver.domain_mask(sub);
  for (Vertex v = 0; v < g.vertex_count(); ++v) solver.restrict_domain(v, allowed);
  for (auto v : sub) solver.pin(v, v);
  std::vector<VertexMap> out;
  std::optional<std::uint64_t> one = 1;
  solver.run(one, out);
  if (out.empty()) return std::nullopt;
  return out.front();
}

PowerHomClassification classify_power_hom(const VertexMap& f, unsigned k, const Digraph& h) {
  auto source = power(make_c(), k);
  if (f.source_count != source.vertex_count() || f.target_count != h.vertex_count())
    throw std::invalid_argument("classify_power_hom: dimension mismatch");
  if (!is_homomorphism(f, source, h))
    throw std::invalid_argument("classify_power_hom: map is not a homomorphism");

  PowerHomClassification result;
  auto pred = structure_predicates(h);
  if (!pred.antisymmetric || !pred.unique_triangle) {
    result.status = PowerHomClassification::Status::not_applicable;
    return result;
  }

  // J = coordinates f depends on, by scanning pairs differing only there
  std::vector<unsigned> coords;
  const std::uint64_t total = f.source_count;
  std::vector<std::uint32_t> tuple(k);
  for (unsigned j = 0; j < k; ++j) {
    std::uint64_t stride = 1;
    for (unsigned t = j + 1; t < k; ++t) stride *= 3;
    bool depends = false;
    for (std::uint64_t idx = 0; idx < total && !depends; ++idx) {
      tuple_decode(idx, 3, k, tuple);
      if (tuple[j] != 0) continue;
      Vertex base = f(static_cast<Vertex>(idx));
      if (f(static_cast<Vertex>(idx + stride)) != base ||
          f(static_cast<Vertex>(idx + 2 * stride)) != base)
        depends = true;
    }
    if (depends) coords.push_back(j);
  }

  // iota on C^J: evaluate f on the extension of each J-tuple by zeros
  const unsigned jsize = static_cast<unsigned>(coords.size());
  std::uint64_t jtotal = 1;
  for (unsigned i = 0; i < jsize; ++i) jtotal *= 3;
  std::vector<Vertex> iota_img(jtotal);
  std::vector<std::uint32_t> jtuple(jsize);
  for (std::uint64_t a = 0; a < jtotal; ++a) {
    tuple_decode(a, 3, jsize, jtuple);
    std::fill(tuple.begin(), tuple.end(), 0);
    for (unsigned i = 0; i < jsize; ++i) tuple[coords[i]] = jtuple[i];
    iota_img[a] = f(static_cast<Vertex>(tuple_index(tuple, 3)));
  }
  VertexMap iota(static_cast<Vertex>(jtotal), h.vertex_count(), iota_img);

  auto violation = [&](const std::string& what) {
    PowerHomClassification r;
    r.status = PowerHomClassification::Status::violation;
    r.coords = coords;
    r.iota = iota;
    r.witness = what;
    return r;
  };

  // f = iota . pi_J pointwise
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    tuple_decode(idx, 3, k, tuple);
    for (unsigned i = 0; i < jsize; ++i) jtuple[i] = tuple[coords[i]];
    if (f(static_cast<Vertex>(idx)) != iota(static_cast<Vertex>(tuple_index(jtuple, 3)))) {
      std::ostringstream os;
      os << "f differs from iota.pi_J at tuple index " << idx;
      return violation(os.str());
    }
  }

  // iota must be injective with image equal to f's image
  {
    std::vector<bool> seen(h.vertex_count(), false);
    for (auto v : iota_img) {
      if (seen[v]) return violation("iota is not injective");
      seen[v] = true;
    }
    std::vector<bool> fimg(h.vertex_count(), false);
    for (Vertex v = 0; v < f.source_count; ++v) fimg[f(v)] = true;
    for (Vertex v = 0; v < h.vertex_count(); ++v)
      if (fimg[v] != seen[v]) return violation("iota image differs from f image");
  }

  // two-sided edge preservation onto the spanned image
  auto cj = power(make_c(), jsize);
  for (Vertex a = 0; a < jtotal; ++a)
    for (Vertex b = 0; b < jtotal; ++b)
      if (cj.has_edge(a, b) != h.has_edge(iota(a), iota(b))) {
        std::ostringstream os;
        os << "iota is not an isomorphism onto the image at pair (" << a << "," << b << ")";
        return violation(os.str());
      }

  result.status = PowerHomClassification::Status::classified;
  result.coords = std::move(coords);
  result.iota = std::move(iota);
  return result;
}

}  // namespace varkit
