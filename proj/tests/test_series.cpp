#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "nanophrase/fixtures.hpp"
#include "nanophrase/random_phrase.hpp"
#include "nanophrase/series.hpp"
#include "nanophrase/text.hpp"

using namespace nanophrase;

namespace {

EtaWord random_eta_word(std::mt19937_64& rng, int n, int max_len) {
  EtaWord w;
  int len = static_cast<int>(rng() % (max_len + 1));
  for (int i = 0; i < len; ++i)
    w.push_back({1 + static_cast<int>(rng() % n), rng() % 2 == 0 ? 1 : -1});
  return w;
}

MagnusSeries random_series_with_unit(std::mt19937_64& rng, int n, int bound) {
  std::mt19937_64 local(rng());
  return phi_series(random_eta_word(local, n, 6), bound);
}

}  // namespace

TEST_CASE("phi unit factors", "[series]") {
  // phi(a_1) * phi(a_1^-1) = 1: the inverse factor is the geometric series
  MagnusSeries prod = phi_series({{1, 1}, {1, -1}}, 3);
  CHECK(prod == MagnusSeries::one(3));

  MagnusSeries inv = MagnusSeries::unit_factor(1, -1, 3);
  CHECK(inv.coefficient({1}) == -1);
  CHECK(inv.coefficient({1, 1}) == 1);
  CHECK(inv.coefficient({1, 1, 1}) == -1);

  CHECK(phi_series({}, 5) == MagnusSeries::one(5));
}

TEST_CASE("series inverse", "[series]") {
  CHECK(series_inverse(MagnusSeries::one(4)) == MagnusSeries::one(4));

  MagnusSeries s = MagnusSeries::unit_factor(1, 1, 3);  // 1 + k1
  MagnusSeries inv = series_inverse(s);
  CHECK(inv == MagnusSeries::unit_factor(1, -1, 3));  // 1 - k1 + k1^2 - k1^3

  MagnusSeries zero(3);
  CHECK_THROWS_AS(series_inverse(zero), Error);

  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    EtaWord w = random_eta_word(rng, 3, 6);
    MagnusSeries ph = phi_series(w, 4);
    CHECK(ph * series_inverse(ph) == MagnusSeries::one(4));
    // inverse(phi(w)) = phi(w^-1): the reversed-inverted word as the oracle
    CHECK(series_inverse(ph) == phi_series(inverse(w), 4));
  }
}

TEST_CASE("phi is multiplicative", "[series]") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 100; ++t) {
    EtaWord u = random_eta_word(rng, 3, 5);
    EtaWord v = random_eta_word(rng, 3, 5);
    EtaWord uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    CHECK(phi_series(uv, 3) == phi_series(u, 3) * phi_series(v, 3));
  }
}

TEST_CASE("multiplication is associative and truncation-coherent", "[series]") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    MagnusSeries a = random_series_with_unit(rng, 3, 4);
    MagnusSeries b = random_series_with_unit(rng, 3, 4);
    MagnusSeries c = random_series_with_unit(rng, 3, 4);
    CHECK((a * b) * c == a * (b * c));
    // truncating the factors first changes nothing at the shared bound
    CHECK((a * b).truncated(2) == a.truncated(2) * b.truncated(2));
  }
}

TEST_CASE("borromean component series at bound 2", "[series]") {
  MagnusSeries s = component_series(fixture_borromean(), 1, 3, 2);
  MagnusSeries expected = MagnusSeries::one(2);
  expected.set_coefficient({2, 3}, -1);
  expected.set_coefficient({3, 2}, 1);
  CHECK(s == expected);  // 1 - k2 k3 + k3 k2
  CHECK(s.coefficient({2, 3}) == -1);
}

TEST_CASE("memoized series equals the naive expansion path", "[series]") {
  auto naive = [](const Nanophrase& p, int i, int q, int bound) {
    return phi_series(eta_word(p, rho_expand(p, i, q)), bound);
  };

  // all fixtures, all components, q <= 4, bound <= 4
  std::vector<Nanophrase> fixtures = {fixture_ex32(), fixture_borromean(), fixture_ex4(),
                                      fixture_ex5(), fixture_torus(2), fixture_vlink(3)};
  for (const Nanophrase& p : fixtures)
    for (int i = 1; i <= p.component_count(); ++i)
      for (int q = 2; q <= 4; ++q)
        for (int bound : {1, 2, 3, 4})
          CHECK(component_series(p, i, q, bound) == naive(p, i, q, bound));

  // random phrases
  std::mt19937_64 rng(37);
  for (int t = 0; t < 60; ++t) {
    Nanophrase p = random_phrase(rng, builtin_virtual());
    for (int i = 1; i <= p.component_count(); ++i)
      for (int q = 2; q <= 4; ++q)
        CHECK(component_series(p, i, q, 3) == naive(p, i, q, 3));
  }
}

TEST_CASE("empty signed component gives the constant series", "[series]") {
  Nanophrase p = fixture_ex32();
  CHECK(component_series(p, 4, 4, 3) == MagnusSeries::one(3));
}

TEST_CASE("constant term is always 1", "[series]") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 50; ++t) {
    Nanophrase p = random_phrase(rng, builtin_virtual());
    for (int i = 1; i <= p.component_count(); ++i)
      CHECK(component_series(p, i, 3, 2).coefficient({}) == 1);
  }
}

TEST_CASE("coefficients below degree q stabilize from stage q+1 on", "[series]") {
  std::vector<Nanophrase> fixtures = {fixture_ex32(), fixture_borromean(), fixture_ex4(),
                                      fixture_ex5()};
  for (const Nanophrase& p : fixtures) {
    for (int i = 1; i <= p.component_count(); ++i) {
      for (int u = 1; u <= 2; ++u) {
        MagnusSeries a = component_series(p, i, u + 1, u);
        MagnusSeries b = component_series(p, i, u + 2, u);
        CHECK(a == b);
      }
    }
  }
}

TEST_CASE("series rendering", "[series]") {
  MagnusSeries s = component_series(fixture_borromean(), 1, 3, 2);
  CHECK(render_series(s) == "1: 1\nk_2 k_3: -1\nk_3 k_2: 1\n");
}
