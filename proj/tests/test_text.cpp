#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "nanophrase/fixtures.hpp"
#include "nanophrase/random_phrase.hpp"
#include "nanophrase/text.hpp"

using namespace nanophrase;

TEST_CASE("parse the example phrase", "[text]") {
  Nanophrase p = parse_nanophrase(
      "letters: A:b+ B:b+ C:b+ D:b- E:a- F:a-\n"
      "phrase: A B | C D B | D E A | F F C E");
  CHECK(p.component_count() == 4);
  CHECK(p.letter_count() == 6);
  CHECK(p.proj("D") == Symbol("b-"));
  CHECK(p == fixture_ex32());
}

TEST_CASE("compact notation splits single-character names", "[text]") {
  Nanophrase compact = parse_nanophrase(
      "letters: A:b+ B:b+ C:b+ D:b- E:a- F:a-\n"
      "phrase: AB|CDB|DEA|FFCE");
  CHECK(compact == fixture_ex32());

  // multi-character names disable splitting
  CHECK_THROWS_AS(parse_nanophrase("letters: AB:b+ A:b- B:b-\nphrase: ABAB | A B"), Error);
}

TEST_CASE("empty components and the empty phrase", "[text]") {
  Nanophrase two = parse_nanophrase("letters:\nphrase: . | .");
  CHECK(two.component_count() == 2);
  CHECK(two.component_size(1) == 0);
  CHECK(two.letter_count() == 0);

  Nanophrase zero = parse_nanophrase("letters:\nphrase:");
  CHECK(zero.component_count() == 0);
  CHECK(render_nanophrase(zero) == "letters:\nphrase:");
}

TEST_CASE("parse errors", "[text]") {
  // letter occurring once
  CHECK_THROWS_WITH(parse_nanophrase("letters: A:a+\nphrase: A"),
                    Catch::Matchers::ContainsSubstring("occurs 1 times"));
  // letter occurring three times
  CHECK_THROWS_AS(parse_nanophrase("letters: A:a+\nphrase: A A A"), Error);
  // unknown letter in the phrase line
  CHECK_THROWS_WITH(parse_nanophrase("letters: A:a+\nphrase: A Q A"),
                    Catch::Matchers::ContainsSubstring("unknown letter 'Q'"));
  // syntax error position points at line 2
  CHECK_THROWS_WITH(parse_nanophrase("letters: A:a+\nphrase: A | | A"),
                    Catch::Matchers::ContainsSubstring("line 2"));
  // malformed letters token
  CHECK_THROWS_AS(parse_nanophrase("letters: Ab+\nphrase:"), Error);
  // duplicate declaration
  CHECK_THROWS_WITH(parse_nanophrase("letters: A:a+ A:b+\nphrase: A A"),
                    Catch::Matchers::ContainsSubstring("duplicate"));
  // declared letter that never occurs
  CHECK_THROWS_AS(parse_nanophrase("letters: A:a+ B:a-\nphrase: A A"), Error);
  // missing lines
  CHECK_THROWS_AS(parse_nanophrase("letters: A:a+"), Error);
}

TEST_CASE("render canonical form", "[text]") {
  CHECK(render_nanophrase(fixture_ex32()) ==
        "letters: A:b+ B:b+ C:b+ D:b- E:a- F:a-\n"
        "phrase: A B | C D B | D E A | F F C E");
  CHECK(render_nanophrase(fixture_ex5()) ==
        "letters: A:a+ B:b+ C:a+ D:b+ E:b+ F:a+\n"
        "phrase: A B C D | D A E F B C | E F | .");
}

TEST_CASE("parse inverts render on random phrases", "[text]") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    Nanophrase p = random_phrase(rng, builtin_virtual());
    Nanophrase q = parse_nanophrase(render_nanophrase(p));
    CHECK(q == p);
    CHECK(render_nanophrase(q) == render_nanophrase(p));
  }
}

TEST_CASE("json round trip", "[text]") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    Nanophrase p = random_phrase(rng, builtin_virtual());
    nlohmann::json j = phrase_to_json(p);
    CHECK(phrase_from_json(j) == p);
  }
  nlohmann::json j = phrase_to_json(fixture_ex32());
  CHECK(j.at("letters").at("D") == "b-");
  CHECK(j.at("components").at(0) == nlohmann::json::array({"A", "B"}));
}
