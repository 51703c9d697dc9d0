#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "nanophrase/fixtures.hpp"
#include "nanophrase/forest.hpp"
#include "nanophrase/random_phrase.hpp"
#include "nanophrase/text.hpp"

using namespace nanophrase;

TEST_CASE("forest of the first component at stage 4", "[forest]") {
  // rho^4(w_1^eps) = E C^-1 D C A C^-1 D^-1 C E^-1 C^-1 B C
  Forest f = build_forest(fixture_ex32(), 1, 4);
  REQUIRE(f.roots.size() == 2);

  const ForestNode& a = f.roots[0];
  CHECK(a.letter == "A");
  CHECK(a.depth == 0);
  CHECK(a.location == 5);
  REQUIRE(a.children.size() == 4);
  CHECK(a.children[0].letter == "E");
  CHECK(a.children[0].sign == 1);
  CHECK(a.children[1].letter == "D");
  CHECK(a.children[2].letter == "D");
  CHECK(a.children[2].sign == -1);
  CHECK(a.children[3].letter == "E");
  CHECK(a.children[3].sign == -1);
  for (const ForestNode& c : a.children)
    CHECK(c.depth == 1);
  // grandchildren C^{+-1} sit under the D vertices
  CHECK(a.children[0].children.empty());
  REQUIRE(a.children[1].children.size() == 2);
  CHECK(a.children[1].children[0].letter == "C");
  CHECK(a.children[1].children[0].sign == -1);
  CHECK(a.children[1].children[0].depth == 2);
  REQUIRE(a.children[2].children.size() == 2);
  CHECK(a.children[2].children[1].letter == "C");
  CHECK(a.children[2].children[1].sign == 1);

  const ForestNode& b = f.roots[1];
  CHECK(b.letter == "B");
  CHECK(b.location == 11);
  REQUIRE(b.children.size() == 2);
  CHECK(b.children[0].letter == "C");
  CHECK(b.children[0].sign == -1);
  CHECK(b.children[1].letter == "C");
  CHECK(b.children[1].sign == 1);
}

TEST_CASE("stage 2 forests have bare roots", "[forest]") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 20; ++t) {
    Nanophrase p = random_phrase(rng, builtin_virtual());
    for (int i = 1; i <= p.component_count(); ++i) {
      Forest f = build_forest(p, i, 2);
      CHECK(f.roots.size() == signed_component(p, i).size());
      for (const ForestNode& r : f.roots) {
        CHECK(r.children.empty());
        CHECK(r.depth == 0);
      }
    }
  }
}

TEST_CASE("depth never exceeds q-2", "[forest]") {
  Forest f = build_forest(fixture_ex32(), 1, 4);
  auto max_depth = [](const ForestNode& n, auto&& self) -> int {
    int d = n.depth;
    for (const ForestNode& c : n.children)
      d = std::max(d, self(c, self));
    return d;
  };
  int d = 0;
  for (const ForestNode& r : f.roots)
    d = std::max(d, max_depth(r, max_depth));
  CHECK(d <= 2);
}

TEST_CASE("flattening the forest reproduces the expanding word", "[forest]") {
  std::mt19937_64 rng(67);
  int checked = 0;
  for (int t = 0; t < 80; ++t) {
    Nanophrase p = random_phrase(rng, builtin_virtual());
    for (int i = 1; i <= p.component_count(); ++i) {
      for (int q = 2; q <= 4; ++q) {
        Forest f = build_forest(p, i, q);
        CHECK(flatten(f) == rho_expand(p, i, q));
        ++checked;
      }
    }
  }
  CHECK(checked >= 200);

  // locations are consistent with left-to-right reading
  Forest f = build_forest(fixture_ex32(), 3, 3);
  SignedWord w = flatten(f);
  CHECK(render_signed_word(w) == "C^-1 D^-1 C E^-1");
}

TEST_CASE("subforest counts on the worked example", "[forest]") {
  // F_3^3: roots D^-1 (loc 2) and E^-1 (loc 4); D has children C^-1 (loc 1)
  // and C (loc 3); eta labels: D -> 2, C -> 4, E -> 4
  Forest f = build_forest(fixture_ex32(), 3, 3);
  auto [even, odd] = subforest_counts(f, {2, 4});
  CHECK(even == 1);  // the two roots
  CHECK(odd == 1);   // root D^-1 with child C
  CHECK(even - odd == 0);

  auto [e0, o0] = subforest_counts(f, {});
  CHECK(e0 == 1);
  CHECK(o0 == 0);

  CHECK_THROWS_AS(subforest_counts(f, {2, 2}), Error);
}

TEST_CASE("single negative root", "[forest]") {
  // one letter crossing two components with sign -1 in component 1
  Nanophrase p = parse_nanophrase("letters: A:a-\nphrase: A | A");
  Forest f = build_forest(p, 1, 3);
  REQUIRE(f.roots.size() == 1);
  CHECK(f.roots[0].sign == -1);
  int k = f.roots[0].eta_index;
  auto [even, odd] = subforest_counts(f, {k});
  CHECK(even == 0);
  CHECK(odd == 1);
}

TEST_CASE("oracle check on fixtures", "[forest]") {
  CHECK(oracle_check(fixture_ex32(), 3, {2, 4}, 3));
  CHECK(oracle_check(fixture_borromean(), 1, {2, 3}, 3));
  // and the lemma value matches the known mu
  MagnusSeries s = component_series(fixture_borromean(), 1, 3, 2);
  auto [even, odd] = subforest_counts(build_forest(fixture_borromean(), 1, 3), {2, 3});
  CHECK(even - odd == -1);
  CHECK(s.coefficient({2, 3}) == even - odd);
}

TEST_CASE("oracle check on random phrases", "[forest]") {
  std::mt19937_64 rng(71);
  int trials = 0;
  while (trials < 200) {
    Nanophrase p = random_phrase(rng, builtin_virtual());
    int n = p.component_count();
    if (n < 1)
      continue;
    int i = 1 + static_cast<int>(rng() % n);
    int q = 2 + static_cast<int>(rng() % 3);
    // random distinct label sequence with |c| <= 3
    std::vector<int> indices;
    for (int k = 1; k <= n; ++k)
      indices.push_back(k);
    for (std::size_t k = indices.size(); k > 1; --k)
      std::swap(indices[k - 1], indices[rng() % k]);
    int len = 1 + static_cast<int>(rng() % 3);
    if (len > n)
      len = n;
    std::vector<int> c(indices.begin(), indices.begin() + len);
    CHECK(oracle_check(p, i, c, q));
    ++trials;
  }
}

TEST_CASE("selection counts grow with the stage", "[forest]") {
  // deeper stages only add vertices, so valid selections never disappear
  std::mt19937_64 rng(73);
  for (int t = 0; t < 30; ++t) {
    Nanophrase p = random_phrase(rng, builtin_virtual());
    int n = p.component_count();
    int i = 1 + static_cast<int>(rng() % n);
    std::vector<int> c;
    for (int k = 1; k <= std::min(n, 2); ++k)
      c.push_back(k);
    long long prev_total = -1;
    for (int q = 2; q <= 4; ++q) {
      auto [even, odd] = subforest_counts(build_forest(p, i, q), c);
      CHECK(even + odd >= prev_total);
      prev_total = even + odd;
    }
  }
}

TEST_CASE("forest dump format", "[forest]") {
  Forest f = build_forest(fixture_ex32(), 3, 3);
  std::string dump = dump_forest(f);
  CHECK_THAT(dump, Catch::Matchers::ContainsSubstring("g=2 D^-1 k=2 d=0"));
  CHECK_THAT(dump, Catch::Matchers::ContainsSubstring("g=3 C^+1 k=4 d=1"));
}
