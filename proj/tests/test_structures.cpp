#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "varkit/indexing.hpp"
#include "varkit/structures.hpp"

using namespace varkit;

namespace {

// all digraphs on n vertices, n <= 3; used for small exhaustive properties
std::vector<Digraph> all_digraphs(Vertex n) {
  std::vector<Edge> slots;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) slots.emplace_back(u, v);
  std::vector<Digraph> out;
  for (std::uint64_t mask = 0; mask < (1ull << slots.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (mask >> i & 1) edges.push_back(slots[i]);
    out.emplace_back(n, std::move(edges));
  }
  return out;
}

}  // namespace

TEST_CASE("make_c matches the fixed three-cycle with loops") {
  auto c = make_c();
  CHECK(c.vertex_count() == 3);
  std::set<Edge> expect{{0, 1}, {1, 2}, {2, 0}, {0, 0}, {1, 1}, {2, 2}};
  CHECK(std::set<Edge>(c.edges().begin(), c.edges().end()) == expect);
  auto p = structure_predicates(c);
  CHECK(p.reflexive);
  CHECK(p.antisymmetric);
  CHECK(p.unique_triangle);
}

TEST_CASE("digraph constructor validates") {
  CHECK_THROWS_AS(Digraph(2, {{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Digraph(2, {{0, 1}, {0, 1}}), std::invalid_argument);
  CHECK(Digraph() == Digraph(0, {}));
}

TEST_CASE("power sizes") {
  auto c = make_c();
  auto c2 = power(c, 2);
  CHECK(c2.vertex_count() == 9);
  CHECK(c2.edge_count() == 36);
  auto c0 = power(c, 0);
  CHECK(c0.vertex_count() == 1);
  CHECK(c0.edge_count() == 1);
  CHECK(c0.has_edge(0, 0));
  auto c3 = power(c, 3);
  CHECK(c3.vertex_count() == 27);
  CHECK(c3.edge_count() == 216);
}

TEST_CASE("power edge count property |E(g^k)| = |E|^k") {
  for (Vertex n = 1; n <= 3; ++n) {
    // a few digraphs of each size, not all 2^9
    auto all = all_digraphs(n);
    for (std::size_t i = 0; i < all.size(); i += all.size() > 64 ? 37 : 1) {
      const auto& g = all[i];
      for (unsigned k = 0; k <= 3; ++k) {
        auto p = power(g, k);
        std::uint64_t expect = 1;
        for (unsigned j = 0; j < k; ++j) expect *= g.edge_count();
        CHECK(p.edge_count() == expect);
      }
    }
  }
}

TEST_CASE("power overflow is reported") {
  auto c = make_c();
  CHECK_THROWS_AS(power(c, 50), cap_exceeded);
}

TEST_CASE("product basics") {
  auto c = make_c();
  CHECK(product({c, c}) == power(c, 2));
  auto with_unit = product({c, make_loop()});
  REQUIRE(is_isomorphic(with_unit, c).has_value());
  auto pe = product({c, make_reflexive_edge()});
  CHECK(pe.vertex_count() == 6);
  CHECK(pe.edge_count() == 18);
  CHECK_THROWS_AS(product({}), std::invalid_argument);
}

TEST_CASE("disjoint union") {
  auto c = make_c();
  auto two = disjoint_union({c, c});
  CHECK(two.vertex_count() == 6);
  CHECK(two.edge_count() == 12);
  CHECK(components(two).size() == 2);

  auto u = disjoint_union({make_loop(), c});
  REQUIRE(is_isomorphic(u, make_c1()).has_value());

  CHECK(disjoint_union({}) == Digraph(0, {}));
  CHECK(components(disjoint_union({c, c, c})).size() == 3);
}

TEST_CASE("components union property") {
  auto c = make_c();
  std::vector<Digraph> parts{c, make_loop(), make_reflexive_edge(), power(c, 2)};
  std::size_t expect = 0;
  for (const auto& g : parts) expect += components(g).size();
  CHECK(components(disjoint_union(parts)).size() == expect);
}

TEST_CASE("components of c1 and c^2") {
  CHECK(components(power(make_c(), 2)).size() == 1);
  auto comps = components(make_c1());
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<Vertex>{0, 1, 2});
  CHECK(comps[1] == std::vector<Vertex>{3});
}

TEST_CASE("spanned subdigraph") {
  auto c1 = make_c1();
  auto iso_pt = spanned_subdigraph(c1, {3});
  CHECK(iso_pt.graph == make_loop());
  CHECK(iso_pt.embedding.image == std::vector<Vertex>{3});

  auto tri = spanned_subdigraph(c1, {0, 1, 2});
  CHECK(tri.graph == make_c());

  // diagonal of C^2 spans a copy of C: check the 6 induced edges directly
  auto c2 = power(make_c(), 2);
  std::vector<Vertex> diag{0 * 3 + 0, 1 * 3 + 1, 2 * 3 + 2};
  auto d = spanned_subdigraph(c2, diag);
  REQUIRE(is_isomorphic(d.graph, make_c()).has_value());
  std::set<Edge> expect;
  for (Vertex a = 0; a < 3; ++a)
    for (Vertex b = 0; b < 3; ++b)
      if (make_c().has_edge(a, b)) expect.insert({a, b});  // diagonal inherits C itself
  CHECK(std::set<Edge>(d.graph.edges().begin(), d.graph.edges().end()) == expect);

  CHECK_THROWS_AS(spanned_subdigraph(c1, {7}), std::invalid_argument);
}

TEST_CASE("quotient") {
  auto c = make_c();
  auto c2 = power(c, 2);
  // kernel of the first projection on C^2
  std::vector<Vertex> first(9);
  for (Vertex v = 0; v < 9; ++v) first[v] = v / 3;
  auto q = quotient(c2, Partition(first));
  CHECK(q == c);  // block order follows least original element

  CHECK(quotient(c, Partition::total(3)) == make_loop());
  CHECK(quotient(c, Partition::discrete(3)) == c);
  CHECK_THROWS_AS(quotient(c, Partition::discrete(5)), std::invalid_argument);
}

TEST_CASE("partition canonical form and lattice ops") {
  Partition p(std::vector<Vertex>{2, 2, 0, 1});
  CHECK(p.block_of(0) == 0);
  CHECK(p.block_of(2) == 1);
  CHECK(p.block_count() == 3);
  auto blocks = p.blocks();
  CHECK(blocks[0] == std::vector<Vertex>{0, 1});

  auto m = Partition::meet(Partition(std::vector<Vertex>{0, 0, 1, 1}),
                           Partition(std::vector<Vertex>{0, 1, 1, 1}));
  CHECK(m == Partition(std::vector<Vertex>{0, 1, 2, 2}));
  auto j = Partition::join(Partition(std::vector<Vertex>{0, 0, 1, 2}),
                           Partition(std::vector<Vertex>{0, 1, 1, 2}));
  CHECK(j == Partition(std::vector<Vertex>{0, 0, 0, 1}));
  CHECK(Partition::discrete(4).refines(j));
  CHECK(j.refines(Partition::total(4)));
}

TEST_CASE("isomorphism basics") {
  auto c = make_c();
  auto id = is_isomorphic(c, c);
  REQUIRE(id.has_value());
  CHECK(id->image == std::vector<Vertex>{0, 1, 2});

  std::vector<Edge> rev;
  for (auto [u, v] : c.edges()) rev.emplace_back(v, u);
  Digraph crev(3, rev);
  auto m = is_isomorphic(c, crev);
  REQUIRE(m.has_value());
  CHECK(m->image == std::vector<Vertex>{0, 2, 1});

  // brute force over all 6 bijections agrees
  std::vector<Vertex> perm{0, 1, 2};
  bool any = false;
  do {
    bool ok = true;
    for (Vertex u = 0; u < 3 && ok; ++u)
      for (Vertex v = 0; v < 3 && ok; ++v)
        if (c.has_edge(u, v) != crev.has_edge(perm[u], perm[v])) ok = false;
    any = any || ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(any);

  CHECK_FALSE(is_isomorphic(c, make_c1()).has_value());
}

TEST_CASE("isomorphism is an equivalence on digraphs with <= 3 vertices") {
  std::vector<Digraph> corpus;
  for (Vertex n = 0; n <= 2; ++n)
    for (auto& g : all_digraphs(n)) corpus.push_back(g);
  // sample of the 512 on three vertices
  auto three = all_digraphs(3);
  for (std::size_t i = 0; i < three.size(); i += 11) corpus.push_back(three[i]);

  for (const auto& g : corpus) {
    auto self = is_isomorphic(g, g);
    REQUIRE(self.has_value());
  }
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = i + 1; j < corpus.size(); ++j) {
      auto gh = is_isomorphic(corpus[i], corpus[j]);
      auto hg = is_isomorphic(corpus[j], corpus[i]);
      CHECK(gh.has_value() == hg.has_value());
    }
}

TEST_CASE("isomorphic maps preserve edges both ways") {
  auto c2 = power(make_c(), 2);
  auto m = is_isomorphic(c2, c2);
  REQUIRE(m.has_value());
  for (Vertex u = 0; u < 9; ++u)
    for (Vertex v = 0; v < 9; ++v)
      CHECK(c2.has_edge(u, v) == c2.has_edge((*m)(u), (*m)(v)));
}

TEST_CASE("structure predicates") {
  auto c2 = power(make_c(), 2);
  auto p = structure_predicates(c2);
  CHECK(p.reflexive);
  CHECK(p.antisymmetric);
  CHECK(p.unique_triangle);

  // brute-force unique_triangle oracle on C^2
  for (auto [u, v] : c2.edges()) {
    if (u == v) continue;
    unsigned count = 0;
    for (Vertex w = 0; w < 9; ++w)
      if (w != u && w != v && c2.has_edge(v, w) && c2.has_edge(w, u)) ++count;
    CHECK(count <= 1);
  }

  // two triangles sharing edge (0,1)
  Digraph shared(4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 1}, {1, 2}, {2, 0}, {1, 3}, {3, 0}});
  CHECK_FALSE(structure_predicates(shared).unique_triangle);

  CHECK_FALSE(structure_predicates(make_c1()).antisymmetric == false);
}

TEST_CASE("product of connected reflexive digraphs is connected") {
  std::vector<Digraph> corpus{make_c(), make_loop(), make_reflexive_edge()};
  for (const auto& a : corpus)
    for (const auto& b : corpus) {
      CHECK(components(product({a, b})).size() == 1);
      for (const auto& c : corpus) CHECK(components(product({a, b, c})).size() == 1);
    }
}

TEST_CASE("json round trip and validation") {
  auto c2 = power(make_c(), 2);
  auto text = digraph_to_json(c2);
  CHECK(digraph_from_json(text) == c2);

  // reader accepts any edge order
  CHECK(digraph_from_json(R"({"vertices":2,"edges":[[1,1],[0,0]]})") ==
        Digraph(2, {{0, 0}, {1, 1}}));
  CHECK_THROWS_AS(digraph_from_json(R"({"vertices":2,"edges":[[0,2]]})"), std::invalid_argument);
  CHECK_THROWS_AS(digraph_from_json(R"({"vertices":2,"edges":[[0,1],[0,1]]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(digraph_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(digraph_from_json(R"({"vertices":-1,"edges":[]})"), std::invalid_argument);

  // stable output: edges sorted lexicographically
  CHECK(digraph_to_json(Digraph(2, {{1, 1}, {0, 1}})) ==
        R"({"vertices":2,"edges":[[0,1],[1,1]]})");
}

TEST_CASE("tuple indexing convention: first coordinate most significant") {
  std::vector<std::uint32_t> t{1, 2, 0};
  CHECK(tuple_index(t, 3) == 1 * 9 + 2 * 3 + 0);
  std::vector<std::uint32_t> back(3);
  tuple_decode(15, 3, 3, back);
  CHECK(back == std::vector<std::uint32_t>{1, 2, 0});
}
