#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nanophrase/phrase.hpp"
#include "nanophrase/symbols.hpp"

namespace nanophrase {

// Word over letters and their formal inverses. No free reduction is ever
// performed: A A^-1 stays a two-letter word.
struct SignedLetter {
  std::string letter;
  int exp = 1;  // +1 or -1

  bool operator==(const SignedLetter&) const = default;
};

using SignedWord = std::vector<SignedLetter>;

inline SignedWord inverse(const SignedWord& w) {
  SignedWord out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.push_back({it->letter, -it->exp});
  return out;
}

inline std::string render_signed_word(const SignedWord& w) {
  if (w.empty())
    return ".";
  std::ostringstream out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i)
      out << ' ';
    out << w[i].letter;
    if (w[i].exp < 0)
      out << "^-1";
  }
  return out.str();
}

// Word over the component symbols a_1..a_n (an eta-image).
struct ComponentSym {
  int index = 0;
  int exp = 1;

  bool operator==(const ComponentSym&) const = default;
};

using EtaWord = std::vector<ComponentSym>;

inline EtaWord inverse(const EtaWord& w) {
  EtaWord out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.push_back({it->index, -it->exp});
  return out;
}

inline std::string render_eta_word(const EtaWord& w) {
  if (w.empty())
    return ".";
  std::ostringstream out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i)
      out << ' ';
    out << "a_" << w[i].index;
    if (w[i].exp < 0)
      out << "^-1";
  }
  return out.str();
}

namespace detail {

enum class AlphaV { a_plus, a_minus, b_plus, b_minus };

inline AlphaV alpha_v_of(const Symbol& s) {
  const std::string& n = s.name();
  if (n == "a+")
    return AlphaV::a_plus;
  if (n == "a-")
    return AlphaV::a_minus;
  if (n == "b+")
    return AlphaV::b_plus;
  if (n == "b-")
    return AlphaV::b_minus;
  throw Error("projection '" + n + "' is outside alpha_v; signed components need a+/a-/b+/b-");
}

}  // namespace detail

// Sign of one occurrence. With the partner occurrence in component k:
//   i < k:  b+ -> +1,  a- -> -1,  else 0
//   i > k:  a+ -> +1,  b- -> -1,  else 0
//   i == k: 0
inline int occurrence_sign(const Nanophrase& p, OccurrenceAddress a) {
  const std::string& letter = p.letter_at(a);
  auto occ = p.occurrences(letter);
  OccurrenceAddress partner = (occ[0] == a) ? occ[1] : occ[0];
  int i = a.component, k = partner.component;
  if (i == k)
    return 0;
  switch (detail::alpha_v_of(p.proj(letter))) {
    case detail::AlphaV::b_plus:
      return i < k ? 1 : 0;
    case detail::AlphaV::a_minus:
      return i < k ? -1 : 0;
    case detail::AlphaV::a_plus:
      return i > k ? 1 : 0;
    case detail::AlphaV::b_minus:
      return i > k ? -1 : 0;
  }
  return 0;
}

// w_i^eps: the ith component with exponents, zero-sign occurrences dropped.
inline SignedWord signed_component(const Nanophrase& p, int i) {
  SignedWord out;
  for (int j = 1; j <= p.component_size(i); ++j) {
    OccurrenceAddress a{i, j};
    int s = occurrence_sign(p, a);
    if (s != 0)
      out.push_back({p.letter_at(a), s});
  }
  return out;
}

// Component index of the letter's zero-signed occurrence. Exactly one
// occurrence has sign 0 when the occurrences lie in different components;
// when both lie in one component that component is the index.
inline int eta_index(const Nanophrase& p, const std::string& letter) {
  auto occ = p.occurrences(letter);
  if (occ[0].component == occ[1].component)
    return occ[0].component;
  return occurrence_sign(p, occ[0]) == 0 ? occ[0].component : occ[1].component;
}

inline EtaWord eta_word(const Nanophrase& p, const SignedWord& w) {
  EtaWord out;
  out.reserve(w.size());
  for (const SignedLetter& sl : w)
    out.push_back({eta_index(p, sl.letter), sl.exp});
  return out;
}

namespace detail {

// Shared bookkeeping for the expansion maps: every nonzero-signed occurrence
// gets an id, its eta index, and its partner prefix (the nonzero-signed
// occurrences of the partner component strictly before the partner slot).
struct MagnusContext {
  struct Occ {
    std::string letter;
    int sign = 0;                              // natural sign in w_i^eps
    int eta = 0;
    std::vector<std::pair<int, int>> prefix;   // (occ id, its natural sign)
  };

  std::vector<Occ> occs;
  std::vector<std::vector<int>> component_words;  // per component: occ ids of w_i^eps

  explicit MagnusContext(const Nanophrase& p) {
    int n = p.component_count();
    std::map<std::pair<int, int>, int> id_at;  // (component, position) -> occ id
    component_words.assign(n, {});
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= p.component_size(i); ++j) {
        OccurrenceAddress a{i, j};
        int s = occurrence_sign(p, a);
        if (s == 0)
          continue;
        Occ o;
        o.letter = p.letter_at(a);
        o.sign = s;
        o.eta = eta_index(p, o.letter);
        int id = static_cast<int>(occs.size());
        occs.push_back(std::move(o));
        id_at[{i, j}] = id;
        component_words[i - 1].push_back(id);
      }
    }
    // resolve partner prefixes
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= p.component_size(i); ++j) {
        auto it = id_at.find({i, j});
        if (it == id_at.end())
          continue;
        const std::string& letter = p.letter_at({i, j});
        auto occ = p.occurrences(letter);
        OccurrenceAddress partner = (occ[0] == OccurrenceAddress{i, j}) ? occ[1] : occ[0];
        auto& prefix = occs[it->second].prefix;
        for (int l = 1; l < partner.position; ++l) {
          auto pit = id_at.find({partner.component, l});
          if (pit != id_at.end())
            prefix.emplace_back(pit->second, occs[pit->second].sign);
        }
      }
    }
  }
};

inline constexpr std::size_t kMaxExpansionLetters = 4'000'000;

// rho^q of a single occurrence with the given exponent, appended to out.
inline void expand_occurrence(const MagnusContext& ctx, int id, int exp, int q, SignedWord& out) {
  if (out.size() > kMaxExpansionLetters)
    throw Error("expansion exceeds the size guard; lower q");
  const auto& o = ctx.occs[id];
  if (q == 2) {
    out.push_back({o.letter, exp});
    return;
  }
  for (auto it = o.prefix.rbegin(); it != o.prefix.rend(); ++it)
    expand_occurrence(ctx, it->first, -it->second, q - 1, out);
  out.push_back({o.letter, exp});
  for (const auto& [pid, psign] : o.prefix)
    expand_occurrence(ctx, pid, psign, q - 1, out);
}

}  // namespace detail

// The literal expanding word rho^q(w_i^eps). Base case rho^2 is w_i^eps
// itself; each deeper stage conjugates every occurrence by the expansion of
// its partner prefix.
inline SignedWord rho_expand(const Nanophrase& p, int i, int q) {
  if (q < 2)
    throw Error("rho expansion needs q >= 2");
  if (i < 1 || i > p.component_count())
    throw Error("component index " + std::to_string(i) + " out of range");
  detail::MagnusContext ctx(p);
  SignedWord out;
  for (int id : ctx.component_words[i - 1])
    detail::expand_occurrence(ctx, id, ctx.occs[id].sign, q, out);
  return out;
}

}  // namespace nanophrase
