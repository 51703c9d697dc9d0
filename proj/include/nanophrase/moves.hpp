#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nanophrase/phrase.hpp"
#include "nanophrase/symbols.hpp"

namespace nanophrase {

enum class MoveKind { h1_remove, h1_insert, h2_remove, h2_insert, h3, h3ext, shift, self_cross };

inline std::string to_string(MoveKind k) {
  switch (k) {
    case MoveKind::h1_remove: return "H1_remove";
    case MoveKind::h1_insert: return "H1_insert";
    case MoveKind::h2_remove: return "H2_remove";
    case MoveKind::h2_insert: return "H2_insert";
    case MoveKind::h3: return "H3";
    case MoveKind::h3ext: return "H3ext";
    case MoveKind::shift: return "Shift";
    case MoveKind::self_cross: return "SelfCross";
  }
  return "?";
}

inline MoveKind move_kind_from_string(const std::string& s) {
  for (MoveKind k : {MoveKind::h1_remove, MoveKind::h1_insert, MoveKind::h2_remove,
                     MoveKind::h2_insert, MoveKind::h3, MoveKind::h3ext, MoveKind::shift,
                     MoveKind::self_cross})
    if (to_string(k) == s)
      return k;
  throw Error("unknown move kind '" + s + "'");
}

using KindSet = std::set<MoveKind>;

inline KindSet all_move_kinds() {
  return {MoveKind::h1_remove, MoveKind::h1_insert, MoveKind::h2_remove, MoveKind::h2_insert,
          MoveKind::h3,        MoveKind::h3ext,     MoveKind::shift,     MoveKind::self_cross};
}

// A concrete applicable rewriting site. Remove/H3/self-cross sites record
// the matched occurrence slots and the letters playing each pattern role
// (H3ext leaves the erased role blank). Insert sites from enumerate_sites
// are schemas: slots are fixed, the projection and fresh names are chosen
// by the caller before applying.
struct MoveSite {
  MoveKind kind = MoveKind::h1_remove;
  bool backward = false;                     // H3/H3ext: matched the right-hand side
  std::vector<OccurrenceAddress> addresses;  // matched pattern slots
  std::vector<std::string> letters;          // pattern roles A[,B[,C]]
  int component = 0;                         // shift
  std::vector<OccurrenceAddress> slots;      // insert positions (insert-before)
  std::vector<std::string> fresh;            // fresh names for insert moves
  std::optional<Symbol> projection;          // |A| for inserts; |B| = tau(|A|)
};

namespace detail {

struct FlatOcc {
  OccurrenceAddress addr;
  std::string letter;
};

inline std::vector<FlatOcc> flatten_occurrences(const Nanophrase& p) {
  std::vector<FlatOcc> out;
  for (int c = 1; c <= p.component_count(); ++c)
    for (int j = 1; j <= p.component_size(c); ++j)
      out.push_back({{c, j}, p.letter_at({c, j})});
  return out;
}

// Matched pairs never straddle a component separator.
struct AdjPair {
  int first_flat = 0;  // index into the flattened occurrence list
  OccurrenceAddress a, b;
  std::string la, lb;
};

inline std::vector<AdjPair> adjacent_pairs(const std::vector<FlatOcc>& flat) {
  std::vector<AdjPair> out;
  for (std::size_t g = 0; g + 1 < flat.size(); ++g) {
    if (flat[g].addr.component != flat[g + 1].addr.component)
      continue;
    out.push_back({static_cast<int>(g), flat[g].addr, flat[g + 1].addr, flat[g].letter,
                   flat[g + 1].letter});
  }
  return out;
}

inline MoveSite make_site(MoveKind kind, bool backward,
                          std::vector<OccurrenceAddress> addresses,
                          std::vector<std::string> letters) {
  MoveSite s;
  s.kind = kind;
  s.backward = backward;
  s.addresses = std::move(addresses);
  s.letters = std::move(letters);
  return s;
}

}  // namespace detail

// Complete enumeration of applicable sites of the requested kinds. The gap
// words of a pattern may span component separators; matched pairs are always
// adjacent within one component. Shift and self-crossing are additionally
// gated by the data's move flags.
inline std::vector<MoveSite> enumerate_sites(const Nanophrase& p, const HomotopyData& h,
                                             const KindSet& kinds) {
  std::vector<MoveSite> sites;
  const auto flat = detail::flatten_occurrences(p);
  const auto pairs = detail::adjacent_pairs(flat);

  auto gidx = [&](OccurrenceAddress a) { return p.global_index(a); };

  if (kinds.count(MoveKind::h1_remove)) {
    for (const auto& pr : pairs)
      if (pr.la == pr.lb)
        sites.push_back(detail::make_site(MoveKind::h1_remove, false, {pr.a, pr.b}, {pr.la}));
  }

  if (kinds.count(MoveKind::h2_remove)) {
    // x A B y B A z with tau(|A|) = |B|
    for (const auto& p1 : pairs) {
      if (p1.la == p1.lb || h.tau(p.proj(p1.la)) != p.proj(p1.lb))
        continue;
      for (const auto& p2 : pairs) {
        if (p2.first_flat <= p1.first_flat + 1)
          continue;
        if (p2.la == p1.lb && p2.lb == p1.la)
          sites.push_back(detail::make_site(MoveKind::h2_remove, false,
                                            {p1.a, p1.b, p2.a, p2.b}, {p1.la, p1.lb}));
      }
    }
  }

  if (kinds.count(MoveKind::h3)) {
    // x AB y AC z BC t <-> x BA y CA z CB t, (|A|,|B|,|C|) in S
    for (std::size_t i1 = 0; i1 < pairs.size(); ++i1) {
      for (std::size_t i2 = 0; i2 < pairs.size(); ++i2) {
        if (pairs[i2].first_flat <= pairs[i1].first_flat + 1)
          continue;
        for (std::size_t i3 = 0; i3 < pairs.size(); ++i3) {
          if (pairs[i3].first_flat <= pairs[i2].first_flat + 1)
            continue;
          const auto& P1 = pairs[i1];
          const auto& P2 = pairs[i2];
          const auto& P3 = pairs[i3];
          // forward roles: P1=(A,B) P2=(A,C) P3=(B,C)
          if (P1.la == P2.la && P1.lb == P3.la && P2.lb == P3.lb && P1.la != P1.lb &&
              P2.lb != P1.la && P2.lb != P1.lb &&
              h.has_triple(p.proj(P1.la), p.proj(P1.lb), p.proj(P2.lb))) {
            sites.push_back(detail::make_site(MoveKind::h3, false,
                                              {P1.a, P1.b, P2.a, P2.b, P3.a, P3.b},
                                              {P1.la, P1.lb, P2.lb}));
          }
          // backward roles: P1=(B,A) P2=(C,A) P3=(C,B)
          if (P1.lb == P2.lb && P1.la == P3.lb && P2.la == P3.la && P1.la != P1.lb &&
              P2.la != P1.la && P2.la != P1.lb &&
              h.has_triple(p.proj(P1.lb), p.proj(P1.la), p.proj(P2.la))) {
            sites.push_back(detail::make_site(MoveKind::h3, true,
                                              {P1.a, P1.b, P2.a, P2.b, P3.a, P3.b},
                                              {P1.lb, P1.la, P2.la}));
          }
        }
      }
    }
  }

  if (kinds.count(MoveKind::h3ext)) {
    const Symbol empty = Symbol::empty();
    // an empty slot erases that letter from the pattern, leaving one
    // adjacent pair and two single occurrences in a fixed order
    for (const auto& pr : pairs) {
      if (pr.la == pr.lb)
        continue;
      for (int dir = 0; dir < 2; ++dir) {
        const std::string& x = dir == 0 ? pr.la : pr.lb;
        const std::string& y = dir == 0 ? pr.lb : pr.la;
        auto occx = p.occurrences(x);
        auto occy = p.occurrences(y);
        OccurrenceAddress other_x = (occx[0] == pr.a || occx[0] == pr.b) ? occx[1] : occx[0];
        OccurrenceAddress other_y = (occy[0] == pr.a || occy[0] == pr.b) ? occy[1] : occy[0];

        // C erased, pair plays (A,B): x AB y A z B t <-> x BA y A z B t
        if (h.has_triple(p.proj(x), p.proj(y), empty) && gidx(other_x) > gidx(pr.b) &&
            gidx(other_y) > gidx(other_x))
          sites.push_back(detail::make_site(MoveKind::h3ext, dir == 1,
                                            {pr.a, pr.b, other_x, other_y}, {x, y, ""}));

        // B erased, pair plays (A,C): x A y AC z C t <-> x A y CA z C t
        if (h.has_triple(p.proj(x), empty, p.proj(y)) && gidx(other_x) < gidx(pr.a) &&
            gidx(other_y) > gidx(pr.b))
          sites.push_back(detail::make_site(MoveKind::h3ext, dir == 1,
                                            {other_x, pr.a, pr.b, other_y}, {x, "", y}));

        // A erased, pair plays (B,C): x B y C z BC t <-> x B y C z CB t
        if (h.has_triple(empty, p.proj(x), p.proj(y)) && gidx(other_x) < gidx(other_y) &&
            gidx(other_y) < gidx(pr.a))
          sites.push_back(detail::make_site(MoveKind::h3ext, dir == 1,
                                            {other_x, other_y, pr.a, pr.b}, {"", x, y}));
      }
    }
  }

  if (kinds.count(MoveKind::shift) && h.flags().allow_shift) {
    for (int c = 1; c <= p.component_count(); ++c) {
      MoveSite s;
      s.kind = MoveKind::shift;
      s.component = c;
      sites.push_back(std::move(s));
    }
  }

  if (kinds.count(MoveKind::self_cross) && h.flags().allow_self_crossing) {
    for (const auto& [letter, occs] : p.occurrence_index()) {
      if (occs.size() == 2 && occs[0].component == occs[1].component)
        sites.push_back(detail::make_site(MoveKind::self_cross, false, {occs[0], occs[1]},
                                          {letter}));
    }
  }

  if (kinds.count(MoveKind::h1_insert)) {
    for (int c = 1; c <= p.component_count(); ++c) {
      for (int s = 1; s <= p.component_size(c) + 1; ++s) {
        MoveSite site;
        site.kind = MoveKind::h1_insert;
        site.slots = {{c, s}};
        sites.push_back(std::move(site));
      }
    }
  }

  if (kinds.count(MoveKind::h2_insert)) {
    std::vector<OccurrenceAddress> slots;
    for (int c = 1; c <= p.component_count(); ++c)
      for (int s = 1; s <= p.component_size(c) + 1; ++s)
        slots.push_back({c, s});
    for (std::size_t i = 0; i < slots.size(); ++i) {
      for (std::size_t j = i; j < slots.size(); ++j) {
        MoveSite site;
        site.kind = MoveKind::h2_insert;
        site.slots = {slots[i], slots[j]};
        sites.push_back(std::move(site));
      }
    }
  }

  return sites;
}

namespace detail {

inline void check_stale(bool ok, const std::string& what) {
  if (!ok)
    throw Error("stale move site: " + what);
}

inline void erase_positions(std::vector<std::vector<std::string>>& comps,
                            std::vector<OccurrenceAddress> addrs) {
  std::sort(addrs.begin(), addrs.end());
  for (auto it = addrs.rbegin(); it != addrs.rend(); ++it)
    comps[it->component - 1].erase(comps[it->component - 1].begin() + (it->position - 1));
}

inline void check_fresh(const Nanophrase& p, const std::string& name) {
  if (!valid_letter_name(name))
    throw Error("fresh letter name '" + name + "' is invalid");
  if (p.has_letter(name))
    throw Error("fresh letter name '" + name + "' collides with an existing letter");
}

}  // namespace detail

// Applies a site to the phrase it was enumerated from. Sites are first
// re-validated against the phrase, so a stale site is rejected rather than
// silently rewriting the wrong slots.
inline Nanophrase apply_move(const Nanophrase& p, const HomotopyData& h, const MoveSite& site) {
  auto comps = p.components();
  auto projection = p.projection();

  auto letter_is = [&](OccurrenceAddress a, const std::string& name) {
    return a.component >= 1 && a.component <= p.component_count() && a.position >= 1 &&
           a.position <= p.component_size(a.component) && p.letter_at(a) == name;
  };
  auto adjacent = [&](OccurrenceAddress a, OccurrenceAddress b) {
    return a.component == b.component && b.position == a.position + 1;
  };
  auto swap_pair = [&](OccurrenceAddress a) {
    std::swap(comps[a.component - 1][a.position - 1], comps[a.component - 1][a.position]);
  };

  switch (site.kind) {
    case MoveKind::h1_remove: {
      detail::check_stale(site.addresses.size() == 2 && site.letters.size() == 1 &&
                              adjacent(site.addresses[0], site.addresses[1]) &&
                              letter_is(site.addresses[0], site.letters[0]) &&
                              letter_is(site.addresses[1], site.letters[0]),
                          "H1 pattern not present");
      detail::erase_positions(comps, site.addresses);
      projection.erase(site.letters[0]);
      break;
    }
    case MoveKind::h2_remove: {
      detail::check_stale(site.addresses.size() == 4 && site.letters.size() == 2,
                          "malformed H2 site");
      const std::string& A = site.letters[0];
      const std::string& B = site.letters[1];
      detail::check_stale(adjacent(site.addresses[0], site.addresses[1]) &&
                              adjacent(site.addresses[2], site.addresses[3]) &&
                              letter_is(site.addresses[0], A) && letter_is(site.addresses[1], B) &&
                              letter_is(site.addresses[2], B) && letter_is(site.addresses[3], A) &&
                              h.tau(p.proj(A)) == p.proj(B),
                          "H2 pattern not present");
      detail::erase_positions(comps, site.addresses);
      projection.erase(A);
      projection.erase(B);
      break;
    }
    case MoveKind::h3: {
      detail::check_stale(site.addresses.size() == 6 && site.letters.size() == 3,
                          "malformed H3 site");
      const std::string& A = site.letters[0];
      const std::string& B = site.letters[1];
      const std::string& C = site.letters[2];
      bool shape = adjacent(site.addresses[0], site.addresses[1]) &&
                   adjacent(site.addresses[2], site.addresses[3]) &&
                   adjacent(site.addresses[4], site.addresses[5]);
      if (!site.backward) {
        shape = shape && letter_is(site.addresses[0], A) && letter_is(site.addresses[1], B) &&
                letter_is(site.addresses[2], A) && letter_is(site.addresses[3], C) &&
                letter_is(site.addresses[4], B) && letter_is(site.addresses[5], C);
      } else {
        shape = shape && letter_is(site.addresses[0], B) && letter_is(site.addresses[1], A) &&
                letter_is(site.addresses[2], C) && letter_is(site.addresses[3], A) &&
                letter_is(site.addresses[4], C) && letter_is(site.addresses[5], B);
      }
      detail::check_stale(shape && h.has_triple(p.proj(A), p.proj(B), p.proj(C)),
                          "H3 pattern not present");
      swap_pair(site.addresses[0]);
      swap_pair(site.addresses[2]);
      swap_pair(site.addresses[4]);
      break;
    }
    case MoveKind::h3ext: {
      detail::check_stale(site.addresses.size() == 4 && site.letters.size() == 3,
                          "malformed H3ext site");
      const Symbol empty = Symbol::empty();
      auto role_proj = [&](const std::string& name) {
        return name.empty() ? empty : p.proj(name);
      };
      const std::string& A = site.letters[0];
      const std::string& B = site.letters[1];
      const std::string& C = site.letters[2];
      detail::check_stale(A.empty() + B.empty() + C.empty() == 1, "malformed H3ext roles");
      OccurrenceAddress pair_a, single1, single2;
      std::string pa, pb, s1, s2;
      bool order_ok = false;
      if (C.empty()) {  // pair (A,B), then A, then B
        pair_a = site.addresses[0];
        single1 = site.addresses[2];
        single2 = site.addresses[3];
        pa = site.backward ? B : A;
        pb = site.backward ? A : B;
        s1 = A;
        s2 = B;
        order_ok = p.global_index(single1) > p.global_index(site.addresses[1]) &&
                   p.global_index(single2) > p.global_index(single1);
      } else if (B.empty()) {  // A, then pair (A,C), then C
        pair_a = site.addresses[1];
        single1 = site.addresses[0];
        single2 = site.addresses[3];
        pa = site.backward ? C : A;
        pb = site.backward ? A : C;
        s1 = A;
        s2 = C;
        order_ok = p.global_index(single1) < p.global_index(pair_a) &&
                   p.global_index(single2) > p.global_index(site.addresses[2]);
      } else {  // B, then C, then pair (B,C)
        pair_a = site.addresses[2];
        single1 = site.addresses[0];
        single2 = site.addresses[1];
        pa = site.backward ? C : B;
        pb = site.backward ? B : C;
        s1 = B;
        s2 = C;
        order_ok = p.global_index(single1) < p.global_index(single2) &&
                   p.global_index(single2) < p.global_index(pair_a);
      }
      OccurrenceAddress pair_b{pair_a.component, pair_a.position + 1};
      detail::check_stale(order_ok && letter_is(pair_a, pa) && letter_is(pair_b, pb) &&
                              letter_is(single1, s1) && letter_is(single2, s2) &&
                              h.has_triple(role_proj(A), role_proj(B), role_proj(C)),
                          "H3ext pattern not present");
      swap_pair(pair_a);
      break;
    }
    case MoveKind::shift: {
      int c = site.component;
      detail::check_stale(c >= 1 && c <= p.component_count(), "shift component out of range");
      auto& word = comps[c - 1];
      if (word.size() >= 2) {
        std::string front = word.front();
        word.erase(word.begin());
        word.push_back(front);
        auto occ = p.occurrences(front);
        if (occ[0].component == c && occ[1].component == c)
          projection[front] = h.nu(p.proj(front));
      }
      break;
    }
    case MoveKind::self_cross: {
      detail::check_stale(site.addresses.size() == 2 && site.letters.size() == 1 &&
                              letter_is(site.addresses[0], site.letters[0]) &&
                              letter_is(site.addresses[1], site.letters[0]) &&
                              site.addresses[0].component == site.addresses[1].component,
                          "self-crossing pattern not present");
      projection[site.letters[0]] = h.sigma(p.proj(site.letters[0]));
      break;
    }
    case MoveKind::h1_insert: {
      if (!site.projection)
        throw Error("H1 insert needs a projection choice");
      if (site.fresh.size() != 1)
        throw Error("H1 insert needs one fresh letter name");
      if (!h.contains(*site.projection))
        throw Error("projection '" + site.projection->name() + "' is outside alpha");
      detail::check_stale(
          site.slots.size() == 1 && site.slots[0].component >= 1 &&
              site.slots[0].component <= p.component_count() && site.slots[0].position >= 1 &&
              site.slots[0].position <= p.component_size(site.slots[0].component) + 1,
          "insert slot out of range");
      detail::check_fresh(p, site.fresh[0]);
      auto& word = comps[site.slots[0].component - 1];
      word.insert(word.begin() + (site.slots[0].position - 1), {site.fresh[0], site.fresh[0]});
      projection.emplace(site.fresh[0], *site.projection);
      break;
    }
    case MoveKind::h2_insert: {
      if (!site.projection)
        throw Error("H2 insert needs a projection choice");
      if (site.fresh.size() != 2 || site.fresh[0] == site.fresh[1])
        throw Error("H2 insert needs two distinct fresh letter names");
      if (!h.contains(*site.projection))
        throw Error("projection '" + site.projection->name() + "' is outside alpha");
      detail::check_stale(site.slots.size() == 2, "malformed H2 insert site");
      for (OccurrenceAddress s : site.slots)
        detail::check_stale(s.component >= 1 && s.component <= p.component_count() &&
                                s.position >= 1 && s.position <= p.component_size(s.component) + 1,
                            "insert slot out of range");
      OccurrenceAddress s1 = site.slots[0], s2 = site.slots[1];
      detail::check_stale(s1 <= s2, "H2 insert slots must be ordered");
      detail::check_fresh(p, site.fresh[0]);
      detail::check_fresh(p, site.fresh[1]);
      const std::string& A = site.fresh[0];
      const std::string& B = site.fresh[1];
      // later slot first so the earlier insertion does not shift it
      comps[s2.component - 1].insert(comps[s2.component - 1].begin() + (s2.position - 1), {B, A});
      comps[s1.component - 1].insert(comps[s1.component - 1].begin() + (s1.position - 1), {A, B});
      projection.emplace(A, *site.projection);
      projection.emplace(B, h.tau(*site.projection));
      break;
    }
  }

  return Nanophrase(std::move(projection), std::move(comps));
}

inline std::string describe(const MoveSite& site) {
  std::ostringstream out;
  out << to_string(site.kind);
  if (site.kind == MoveKind::h3 || site.kind == MoveKind::h3ext)
    out << (site.backward ? " backward" : " forward");
  if (!site.letters.empty()) {
    out << ' ';
    for (std::size_t i = 0; i < site.letters.size(); ++i)
      out << (i ? "," : "") << (site.letters[i].empty() ? "_" : site.letters[i]);
  }
  if (site.kind == MoveKind::shift)
    out << " component " << site.component;
  for (OccurrenceAddress a : site.addresses)
    out << " (" << a.component << ',' << a.position << ')';
  if (!site.slots.empty()) {
    out << " at";
    for (OccurrenceAddress a : site.slots)
      out << " (" << a.component << ',' << a.position << ')';
  }
  return out.str();
}

}  // namespace nanophrase
