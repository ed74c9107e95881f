#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "varkit/hom_search.hpp"
#include "varkit/indexing.hpp"
#include "varkit/structures.hpp"

using namespace varkit;

namespace {

// brute-force oracle: every map source -> target, filtered by edge preservation
std::vector<VertexMap> brute_homs(const Digraph& g, const Digraph& h) {
  std::vector<VertexMap> out;
  std::vector<Vertex> image(g.vertex_count(), 0);
  while (true) {
    VertexMap f(g.vertex_count(), h.vertex_count(), image);
    if (is_homomorphism(f, g, h)) out.push_back(f);
    std::size_t i = image.size();
    while (i-- > 0) {
      if (++image[i] < h.vertex_count()) break;
      image[i] = 0;
      if (i == 0) return out;
    }
    if (image.empty()) return out;
  }
}

bool constant_or_rotation_of_projection(const VertexMap& f, unsigned k) {
  bool constant = true;
  for (Vertex v = 0; v < f.source_count; ++v)
    if (f(v) != f(0)) constant = false;
  if (constant) return true;
  std::vector<std::uint32_t> tuple(k);
  for (unsigned j = 0; j < k; ++j)
    for (Vertex r = 0; r < 3; ++r) {
      bool match = true;
      for (Vertex v = 0; v < f.source_count && match; ++v) {
        tuple_decode(v, 3, k, tuple);
        if (f(v) != (tuple[j] + r) % 3) match = false;
      }
      if (match) return true;
    }
  return false;
}

}  // namespace

TEST_CASE("is_homomorphism") {
  auto c = make_c();
  CHECK(is_homomorphism(VertexMap::identity(3), c, c));
  auto c2 = power(c, 2);
  CHECK(is_homomorphism(VertexMap(9, 3, std::vector<Vertex>(9, 0)), c2, c));
  // swapping 0,1 breaks the edge (0,1)
  CHECK_FALSE(is_homomorphism(VertexMap(3, 3, {1, 0, 2}), c, c));
  CHECK_THROWS_AS(is_homomorphism(VertexMap(2, 3, {0, 0}), c, c), std::invalid_argument);
}

TEST_CASE("census of homomorphisms C^k -> C") {
  auto c = make_c();

  auto h1 = enumerate_homomorphisms({c, c, {}});
  CHECK(h1.size() == 6);
  CHECK(h1 == brute_homs(c, c));

  auto c2 = power(c, 2);
  auto h2 = enumerate_homomorphisms({c2, c, {}});
  CHECK(h2.size() == 9);
  CHECK(h2 == brute_homs(c2, c));

  auto c3 = power(c, 3);
  auto h3 = enumerate_homomorphisms({c3, c, {}});
  CHECK(h3.size() == 12);

  // 3 + 3k maps, each constant or a rotation composed with a projection
  for (unsigned k = 1; k <= 3; ++k) {
    auto hs = enumerate_homomorphisms({power(c, k), c, {}});
    CHECK(hs.size() == 3 + 3 * k);
    for (const auto& f : hs) CHECK(constant_or_rotation_of_projection(f, k));
  }
}

TEST_CASE("enumeration order is lexicographic and maps verify") {
  auto c = make_c();
  auto c2 = power(c, 2);
  auto hs = enumerate_homomorphisms({c2, c, {}});
  auto sorted = hs;
  std::sort(sorted.begin(), sorted.end(),
            [](const VertexMap& a, const VertexMap& b) { return a.image < b.image; });
  CHECK(hs == sorted);
  for (const auto& f : hs) CHECK(is_homomorphism(f, c2, c));
}

TEST_CASE("pins and limit") {
  auto c = make_c();
  auto pinned = enumerate_homomorphisms({c, c, {{0, 1}}});
  CHECK(pinned.size() == 2);  // constant 1 and the rotation x+1
  for (const auto& f : pinned) CHECK(f(0) == 1);

  auto limited = enumerate_homomorphisms({c, c, {}}, 3);
  CHECK(limited.size() == 3);
  auto all = enumerate_homomorphisms({c, c, {}});
  CHECK(std::equal(limited.begin(), limited.end(), all.begin()));

  CHECK_THROWS_AS(enumerate_homomorphisms({c, c, {{0, 0}, {0, 1}}}), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_homomorphisms({c, c, {{5, 0}}}), std::invalid_argument);
}

TEST_CASE("retractions") {
  auto c1 = make_c1();
  auto r = find_retraction(c1, {0, 1, 2});
  REQUIRE(r.has_value());
  CHECK((*r)(0) == 0);
  CHECK((*r)(1) == 1);
  CHECK((*r)(2) == 2);
  CHECK((*r)(3) <= 2);
  CHECK(is_homomorphism(*r, c1, c1));

  auto c = make_c();
  auto to_point = find_retraction(c, {0});
  REQUIRE(to_point.has_value());
  CHECK(to_point->image == std::vector<Vertex>{0, 0, 0});

  CHECK_FALSE(find_retraction(c, {0, 1}).has_value());
  // brute-force confirmation: no hom C -> C fixes {0,1} with image inside it
  for (const auto& f : brute_homs(c, c)) {
    bool fixes = f(0) == 0 && f(1) == 1;
    bool inside = f(2) <= 1;
    bool retraction_candidate = fixes && inside;
    CHECK_FALSE(retraction_candidate);
  }
}

TEST_CASE("classify_power_hom examples") {
  auto c = make_c();

  // first projection C^2 -> C
  std::vector<Vertex> proj(9);
  for (Vertex v = 0; v < 9; ++v) proj[v] = v / 3;
  auto r = classify_power_hom(VertexMap(9, 3, proj), 2, c);
  REQUIRE(r.classified());
  CHECK(r.coords == std::vector<unsigned>{0});
  CHECK(r.iota.image == std::vector<Vertex>{0, 1, 2});

  // constant map
  auto rc = classify_power_hom(VertexMap(9, 3, std::vector<Vertex>(9, 2)), 2, c);
  REQUIRE(rc.classified());
  CHECK(rc.coords.empty());
  CHECK(rc.iota.image == std::vector<Vertex>{2});

  // x2 + 1, evaluated on all 9 inputs
  std::vector<Vertex> shifted(9);
  for (Vertex v = 0; v < 9; ++v) shifted[v] = (v % 3 + 1) % 3;
  auto rs = classify_power_hom(VertexMap(9, 3, shifted), 2, c);
  REQUIRE(rs.classified());
  CHECK(rs.coords == std::vector<unsigned>{1});
  CHECK(rs.iota.image == std::vector<Vertex>{1, 2, 0});

  // not applicable when the target fails the hypotheses
  Digraph sym(2, {{0, 1}, {1, 0}, {0, 0}, {1, 1}});
  auto na = classify_power_hom(VertexMap(9, 2, std::vector<Vertex>(9, 0)), 2, sym);
  CHECK(na.status == PowerHomClassification::Status::not_applicable);

  CHECK_THROWS_AS(classify_power_hom(VertexMap(9, 3, {1, 0, 2, 0, 1, 2, 0, 1, 2}), 2, c),
                  std::invalid_argument);
}

TEST_CASE("every hom C^k -> C^m factors through a projection (k,m <= 2)") {
  auto c = make_c();
  for (unsigned k = 0; k <= 2; ++k)
    for (unsigned m = 1; m <= 2; ++m) {
      auto target = power(c, m);
      auto pred = structure_predicates(target);
      REQUIRE(pred.antisymmetric);
      REQUIRE(pred.unique_triangle);
      auto homs = enumerate_homomorphisms({power(c, k), target, {}});
      CHECK(!homs.empty());
      for (const auto& f : homs) {
        auto r = classify_power_hom(f, k, target);
        CHECK(r.classified());
      }
    }
}
