#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "nanophrase/fixtures.hpp"
#include "nanophrase/invariants.hpp"
#include "nanophrase/text.hpp"

using namespace nanophrase;

namespace {
IndexSequence seq(std::initializer_list<int> full) {
  return IndexSequence::from_full(std::vector<int>(full));
}
}  // namespace

TEST_CASE("index sequence parsing and checks", "[invariants]") {
  IndexSequence s = IndexSequence::parse("2,3,1");
  CHECK(s.prefix == std::vector<int>{2, 3});
  CHECK(s.target == 1);
  CHECK(s.pairwise_distinct());
  CHECK_FALSE(IndexSequence::parse("2,2,1").pairwise_distinct());
  CHECK_THROWS_AS(IndexSequence::parse("3"), Error);
  CHECK_THROWS_AS(IndexSequence::parse("a,b"), Error);
  CHECK(s.within(3));
  CHECK_FALSE(s.within(2));
}

TEST_CASE("borromean invariants", "[invariants]") {
  Nanophrase p = fixture_borromean();
  CHECK(mu(p, seq({2, 1})) == 0);
  CHECK(mu(p, seq({3, 1})) == 0);
  CHECK(mu(p, seq({2, 3, 1})) == -1);
  CHECK(mu(p, seq({1, 2})) == 0);
  CHECK(mu(p, seq({1, 3})) == 0);
  CHECK(mu(p, seq({2, 3})) == 0);
  CHECK(mu(p, seq({3, 2})) == 0);
  CHECK(delta(p, seq({2, 3, 1})) == 0);
  CHECK(mu_bar(p, seq({2, 3, 1})) == Residue{-1, 0});

  InvariantResult r = compute_invariant(p, seq({2, 3, 1}));
  CHECK(r.mu == -1);
  CHECK(r.q_used == 3);
  nlohmann::json j = invariant_to_json(r);
  CHECK(j.at("sequence") == nlohmann::json::array({2, 3, 1}));
  CHECK(j.at("mu") == -1);
  CHECK(j.at("delta") == 0);
  CHECK(j.at("mubar").at("value") == -1);
  CHECK(j.at("mubar").at("modulus") == 0);
  CHECK(j.at("q_used") == 3);
}

TEST_CASE("torus family invariants", "[invariants]") {
  for (int n = 1; n <= 8; ++n) {
    Nanophrase p = fixture_torus(n);
    CHECK(mu(p, seq({2, 1})) == n);
    CHECK(mu(p, seq({1, 2})) == n);
  }
}

TEST_CASE("one-sided family invariants", "[invariants]") {
  for (int n = 1; n <= 8; ++n) {
    Nanophrase p = fixture_vlink(n);
    CHECK(mu(p, seq({2, 1})) == n);
    CHECK(mu(p, seq({1, 2})) == 0);
  }
}

TEST_CASE("fourth example invariants", "[invariants]") {
  Nanophrase p = fixture_ex4();
  CHECK(mu(p, seq({2, 1})) == 2);
  CHECK(mu(p, seq({3, 1})) == 0);
  CHECK(mu(p, seq({2, 3, 1})) == -1);
  CHECK(mu(p, seq({3, 2, 1})) == 1);
  CHECK(mu(p, seq({1, 2})) == 0);
  CHECK(mu(p, seq({3, 2})) == -1);
  CHECK(mu(p, seq({1, 3})) == 0);
  CHECK(mu(p, seq({2, 3})) == -1);
  CHECK(delta(p, seq({2, 3, 1})) == 1);
  CHECK(delta(p, seq({3, 2, 1})) == 1);
  CHECK(mu_bar(p, seq({2, 3, 1})) == Residue{0, 1});
  CHECK(mu_bar(p, seq({3, 2, 1})) == Residue{0, 1});
}

TEST_CASE("fifth example invariants", "[invariants]") {
  Nanophrase p = fixture_ex5();
  CHECK(mu(p, seq({2, 1})) == 2);
  CHECK(mu(p, seq({3, 1})) == 0);
  CHECK(mu(p, seq({2, 3, 1})) == 1);
  CHECK(mu(p, seq({1, 2})) == 2);
  CHECK(mu(p, seq({3, 2})) == 1);
  CHECK(mu(p, seq({1, 3})) == 0);
  CHECK(mu(p, seq({2, 3})) == 1);
  CHECK(delta(p, seq({2, 3, 1})) == 1);
  CHECK(mu_bar(p, seq({2, 3, 1})) == Residue{0, 1});
}

TEST_CASE("empty two-component phrase has vanishing mu", "[invariants]") {
  Nanophrase p = parse_nanophrase("letters:\nphrase: . | .");
  CHECK(mu(p, seq({1, 2})) == 0);
  CHECK(mu(p, seq({2, 1})) == 0);
  CHECK(mu(p, seq({1, 2, 1})) == 0);
  CHECK(mu_bar(p, seq({1, 2})) == Residue{0, 0});
}

TEST_CASE("delta subsequences: delete then rotate", "[invariants]") {
  auto subs = delta_subsequences(seq({2, 3, 1}));
  std::set<std::vector<int>> got;
  for (const IndexSequence& s : subs)
    got.insert(s.full());
  std::set<std::vector<int>> expected = {{3, 1}, {1, 3}, {2, 1}, {1, 2}, {2, 3}, {3, 2}};
  CHECK(got == expected);

  // a pair admits no deletion keeping two entries
  CHECK(delta_subsequences(seq({2, 1})).empty());

  // never the full sequence, lengths 2..u
  for (const IndexSequence& s : delta_subsequences(seq({2, 3, 4, 1}))) {
    int len = static_cast<int>(s.full().size());
    CHECK(len >= 2);
    CHECK(len <= 3);
  }
}

TEST_CASE("delta of a pair is zero", "[invariants]") {
  CHECK(delta(fixture_torus(3), seq({2, 1})) == 0);
}

TEST_CASE("residue canonical form", "[invariants]") {
  CHECK(Residue::reduce(-1, 0) == Residue{-1, 0});
  CHECK(Residue::reduce(7, 1) == Residue{0, 1});
  CHECK(Residue::reduce(-5, 3) == Residue{1, 3});
  CHECK(Residue::reduce(5, 3) == Residue{2, 3});
}

TEST_CASE("stabilization policy accepts q = u+1 on fixtures", "[invariants]") {
  struct Case {
    Nanophrase p;
    IndexSequence s;
  };
  std::vector<Case> cases = {{fixture_borromean(), seq({2, 3, 1})},
                             {fixture_ex4(), seq({3, 2, 1})},
                             {fixture_ex5(), seq({2, 3, 1})},
                             {fixture_torus(4), seq({2, 1})}};
  for (const auto& c : cases) {
    MuValue m = mu_with_info(c.p, c.s);
    CHECK(m.q_used == c.s.u() + 1);
    // the accepted value also agrees with two further stages
    PhraseEvaluator eval(c.p, c.s.u());
    CHECK(eval.coefficient(c.s, c.s.u() + 2) == m.value);
    CHECK(eval.coefficient(c.s, c.s.u() + 3) == m.value);
  }
}

TEST_CASE("stabilization escalation and failure report", "[invariants]") {
  // a synthetic coefficient stream that settles only from stage 5 on
  auto settles_late = [](int q) -> long long { return q < 5 ? q : 5; };
  auto [v, q_used] = stabilized_coefficient(settles_late, 3, 8);
  CHECK(v == 5);
  CHECK(q_used == 5);

  // never settles: the error must carry the last two values
  auto diverges = [](int q) -> long long { return q; };
  try {
    stabilized_coefficient(diverges, 3, 6);
    FAIL("expected StabilizationError");
  } catch (const StabilizationError& e) {
    CHECK(e.q_last == 6);
    CHECK(e.previous_value == 5);
    CHECK(e.last_value == 6);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("did not stabilize"));
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("5"));
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("6"));
  }
}

TEST_CASE("forced q bypasses stabilization", "[invariants]") {
  // at q=2 the borromean degree-2 coefficient has not yet appeared
  Nanophrase p = fixture_borromean();
  MuValue early = mu_with_info(p, seq({2, 3, 1}), {.forced_q = 2});
  CHECK(early.value == 0);
  CHECK(early.q_used == 2);
  MuValue late = mu_with_info(p, seq({2, 3, 1}), {.forced_q = 3});
  CHECK(late.value == -1);
}

TEST_CASE("repeated-index sequences are computable", "[invariants]") {
  Nanophrase p = fixture_ex4();
  CHECK_NOTHROW(mu(p, seq({2, 2, 1})));
  CHECK_NOTHROW(mu(p, seq({1, 1})));
}
