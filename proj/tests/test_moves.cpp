#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "nanophrase/fixtures.hpp"
#include "nanophrase/moves.hpp"
#include "nanophrase/random_phrase.hpp"
#include "nanophrase/text.hpp"

using namespace nanophrase;

namespace {

std::vector<MoveSite> sites_of(const Nanophrase& p, const HomotopyData& h,
                               std::initializer_list<MoveKind> kinds) {
  return enumerate_sites(p, h, KindSet(kinds));
}

}  // namespace

TEST_CASE("H1 removal sites", "[moves]") {
  Nanophrase p = parse_nanophrase("letters: A:a+\nphrase: A A");
  auto sites = sites_of(p, builtin_virtual(), {MoveKind::h1_remove});
  REQUIRE(sites.size() == 1);
  Nanophrase q = apply_move(p, builtin_virtual(), sites[0]);
  CHECK(q.component_count() == 1);
  CHECK(q.letter_count() == 0);
  CHECK(validate(q).empty());
}

TEST_CASE("H1 pattern never straddles a separator", "[moves]") {
  Nanophrase p = parse_nanophrase("letters: A:a+\nphrase: A | A");
  CHECK(sites_of(p, builtin_virtual(), {MoveKind::h1_remove}).empty());
}

TEST_CASE("H2 removal with a separator-spanning gap", "[moves]") {
  Nanophrase p = parse_nanophrase("letters: A:a+ B:b-\nphrase: A B | B A");
  auto sites = sites_of(p, builtin_virtual(), {MoveKind::h2_remove});
  REQUIRE(sites.size() == 1);  // tau_v(a+) = b-
  Nanophrase q = apply_move(p, builtin_virtual(), sites[0]);
  CHECK(q.component_count() == 2);
  CHECK(q.total_size() == 0);
  CHECK(validate(q).empty());

  // without the tau relation there is no site
  Nanophrase bad = parse_nanophrase("letters: A:a+ B:b+\nphrase: A B | B A");
  CHECK(sites_of(bad, builtin_virtual(), {MoveKind::h2_remove}).empty());
}

TEST_CASE("H3 site on the all-a+ word", "[moves]") {
  Nanophrase p = parse_nanophrase("letters: A:a+ B:a+ C:a+\nphrase: A B A C B C");
  auto sites = sites_of(p, builtin_virtual(), {MoveKind::h3});
  REQUIRE_FALSE(sites.empty());  // (a+,a+,a+) lies in S_v
  bool found_forward = false;
  for (const auto& s : sites) {
    if (!s.backward) {
      found_forward = true;
      Nanophrase q = apply_move(p, builtin_virtual(), s);
      CHECK(q.components()[0] == std::vector<std::string>{"B", "A", "C", "A", "C", "B"});
      // the mirrored site undoes the move
      auto back = sites_of(q, builtin_virtual(), {MoveKind::h3});
      bool undone = false;
      for (const auto& b : back) {
        if (b.backward && apply_move(q, builtin_virtual(), b) == p)
          undone = true;
      }
      CHECK(undone);
    }
  }
  CHECK(found_forward);
}

TEST_CASE("H3 respects the triple set", "[moves]") {
  // (a+,a-,a+) is not in S_v: the pattern shape alone is not enough
  Nanophrase p = parse_nanophrase("letters: A:a+ B:a- C:a+\nphrase: A B A C B C");
  for (const auto& s : sites_of(p, builtin_virtual(), {MoveKind::h3}))
    CHECK(s.backward);  // backward roles read a different triple
}

TEST_CASE("extended H3 with an empty slot", "[moves]") {
  // (b-,b-,_) in S'_w matches x AB y A z B t
  Nanophrase p = parse_nanophrase("letters: A:b- B:b-\nphrase: A B A B");
  auto sites = sites_of(p, builtin_welded(), {MoveKind::h3ext});
  REQUIRE_FALSE(sites.empty());
  bool applied = false;
  for (const auto& s : sites) {
    if (s.backward)
      continue;
    Nanophrase q = apply_move(p, builtin_welded(), s);
    CHECK(q.components()[0] == std::vector<std::string>{"B", "A", "A", "B"});
    applied = true;
    break;
  }
  CHECK(applied);
  // the virtual data has no empty-slot triples
  CHECK(sites_of(p, builtin_virtual(), {MoveKind::h3ext}).empty());
}

TEST_CASE("extended H3 middle-pair form", "[moves]") {
  // (a-,_,b-): x A y AC z C t <-> x A y CA z C t
  Nanophrase p = parse_nanophrase("letters: A:a- C:b-\nphrase: A | A C | C");
  auto sites = sites_of(p, builtin_welded(), {MoveKind::h3ext});
  bool found = false;
  for (const auto& s : sites) {
    if (s.backward)
      continue;
    Nanophrase q = apply_move(p, builtin_welded(), s);
    CHECK(q.components()[1] == std::vector<std::string>{"C", "A"});
    found = true;
  }
  CHECK(found);
}

TEST_CASE("shift rotates and twists by nu", "[moves]") {
  Nanophrase p = parse_nanophrase("letters: A:a+ B:b+\nphrase: A B A B");
  MoveSite site;
  site.kind = MoveKind::shift;
  site.component = 1;
  Nanophrase q = apply_move(p, builtin_virtual(), site);
  CHECK(q.components()[0] == std::vector<std::string>{"B", "A", "B", "A"});
  CHECK(q.proj("A") == Symbol("b+"));  // nu_v(a+), both occurrences in component 1
  CHECK(q.proj("B") == Symbol("b+"));  // B did not move

  // shifting an empty or single-letter component is the identity
  Nanophrase small = parse_nanophrase("letters: A:a+\nphrase: A | A");
  MoveSite s2;
  s2.kind = MoveKind::shift;
  s2.component = 1;
  CHECK(apply_move(small, builtin_virtual(), s2) == small);
}

TEST_CASE("shift cycles back after m_i applications", "[moves]") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 60; ++t) {
    Nanophrase p = random_phrase(rng, builtin_virtual());
    for (int c = 1; c <= p.component_count(); ++c) {
      MoveSite site;
      site.kind = MoveKind::shift;
      site.component = c;
      Nanophrase q = p;
      int m = p.component_size(c);
      for (int k = 0; k < m; ++k)
        q = apply_move(q, builtin_virtual(), site);
      CHECK(q == p);  // nu is applied an even number of times to each letter
    }
  }
}

TEST_CASE("self-crossing flips sigma", "[moves]") {
  Nanophrase p = parse_nanophrase("letters: A:b+ B:a+\nphrase: A B A B | .");
  auto sites = sites_of(p, builtin_virtual(), {MoveKind::self_cross});
  REQUIRE(sites.size() == 2);  // both letters live inside component 1
  for (const auto& s : sites) {
    Nanophrase q = apply_move(p, builtin_virtual(), s);
    if (s.letters[0] == "A") {
      CHECK(q.proj("A") == Symbol("b-"));
      CHECK(q.components() == p.components());
    }
  }
}

TEST_CASE("inserts are inverse to removals", "[moves]") {
  Nanophrase p = fixture_ex32();
  const HomotopyData& v = builtin_virtual();

  auto h1_schemas = sites_of(p, v, {MoveKind::h1_insert});
  REQUIRE(h1_schemas.size() == 2 + 1 + 3 + 1 + 3 + 1 + 4 + 1);  // sum of m_i + 1
  MoveSite ins = h1_schemas[3];
  ins.projection = Symbol("a-");
  ins.fresh = {"Z9"};
  Nanophrase q = apply_move(p, v, ins);
  CHECK(validate(q, v).empty());
  CHECK(q.letter_count() == p.letter_count() + 1);

  bool undone = false;
  for (const auto& rem : sites_of(q, v, {MoveKind::h1_remove})) {
    if (rem.letters[0] == "Z9" && apply_move(q, v, rem) == p)
      undone = true;
  }
  CHECK(undone);

  auto h2_schemas = sites_of(p, v, {MoveKind::h2_insert});
  MoveSite ins2 = h2_schemas[7];
  ins2.projection = Symbol("b+");
  ins2.fresh = {"Y1", "Y2"};
  Nanophrase q2 = apply_move(p, v, ins2);
  CHECK(validate(q2, v).empty());
  CHECK(q2.proj("Y2") == v.tau(Symbol("b+")));
  bool undone2 = false;
  for (const auto& rem : sites_of(q2, v, {MoveKind::h2_remove})) {
    if (rem.letters[0] == "Y1" && apply_move(q2, v, rem) == p)
      undone2 = true;
  }
  CHECK(undone2);
}

TEST_CASE("h2 insert at one slot builds the contiguous pattern", "[moves]") {
  Nanophrase p = parse_nanophrase("letters:\nphrase: .");
  MoveSite site;
  site.kind = MoveKind::h2_insert;
  site.slots = {{1, 1}, {1, 1}};
  site.projection = Symbol("a+");
  site.fresh = {"A", "B"};
  Nanophrase q = apply_move(p, builtin_virtual(), site);
  CHECK(q.components()[0] == std::vector<std::string>{"A", "B", "B", "A"});
  CHECK(validate(q, builtin_virtual()).empty());
}

TEST_CASE("stale sites and collisions are rejected", "[moves]") {
  Nanophrase p = parse_nanophrase("letters: A:a+ B:b-\nphrase: A B | B A");
  auto sites = sites_of(p, builtin_virtual(), {MoveKind::h2_remove});
  REQUIRE(sites.size() == 1);
  Nanophrase shifted = parse_nanophrase("letters: A:a+ B:b-\nphrase: B A | B A");
  CHECK_THROWS_WITH(apply_move(shifted, builtin_virtual(), sites[0]),
                    Catch::Matchers::ContainsSubstring("stale"));

  MoveSite ins;
  ins.kind = MoveKind::h1_insert;
  ins.slots = {{1, 1}};
  ins.projection = Symbol("a+");
  ins.fresh = {"A"};  // collides
  CHECK_THROWS_WITH(apply_move(p, builtin_virtual(), ins),
                    Catch::Matchers::ContainsSubstring("collides"));
}

TEST_CASE("move flags gate shift and self-crossing", "[moves]") {
  HomotopyData::MoveFlags flags;
  flags.allow_shift = false;
  flags.allow_self_crossing = false;
  HomotopyData h = HomotopyData::make("plain", {Symbol("p")}, {}, {}, {}, {}, flags);
  Nanophrase p({{"A", Symbol("p")}}, {{"A", "A"}});
  auto sites = enumerate_sites(p, h, all_move_kinds());
  for (const auto& s : sites) {
    CHECK(s.kind != MoveKind::shift);
    CHECK(s.kind != MoveKind::self_cross);
  }
}

TEST_CASE("move engine works over a custom alphabet", "[moves]") {
  // tau fixes p, so H2 pairs two p-letters; (p,p,p) licenses H3
  HomotopyData h = parse_homotopy_data(
      "alpha: p q\n"
      "nu: p<->q\n"
      "sigma: p<->q\n"
      "S: (p,p,p)");
  Nanophrase p2 = parse_nanophrase("letters: A:p B:p\nphrase: A B | B A");
  auto h2 = sites_of(p2, h, {MoveKind::h2_remove});
  REQUIRE(h2.size() == 1);
  CHECK(apply_move(p2, h, h2[0]).total_size() == 0);

  Nanophrase p3 = parse_nanophrase("letters: A:p B:p C:p\nphrase: A B A C B C");
  auto h3 = sites_of(p3, h, {MoveKind::h3});
  CHECK_FALSE(h3.empty());

  // q-projected letters admit no H3 (triple set lacks them)
  Nanophrase q3 = parse_nanophrase("letters: A:q B:q C:q\nphrase: A B A C B C");
  CHECK(sites_of(q3, h, {MoveKind::h3}).empty());
}

TEST_CASE("every applied move validates and preserves n", "[moves]") {
  std::mt19937_64 rng(47);
  const HomotopyData& w = builtin_welded();
  int applied = 0;
  for (int t = 0; t < 40; ++t) {
    Nanophrase p = random_phrase(rng, w);
    auto sites = enumerate_sites(p, w, {MoveKind::h1_remove, MoveKind::h2_remove, MoveKind::h3,
                                        MoveKind::h3ext, MoveKind::shift, MoveKind::self_cross});
    for (const auto& s : sites) {
      Nanophrase q = apply_move(p, w, s);
      CHECK(validate(q, w).empty());
      CHECK(q.component_count() == p.component_count());
      ++applied;
    }
  }
  CHECK(applied > 50);
}
