#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nanophrase/phrase.hpp"
#include "nanophrase/symbols.hpp"

namespace nanophrase {

// Element of the abelian group pi = <alpha | a + tau(a) = 0>, in canonical
// form: one integer coordinate per tau-orbit representative (the lex-least
// symbol of each 2-element orbit) and one Z/2 bit per tau-fixed symbol.
struct LinkingElement {
  std::vector<long long> coords;
  std::vector<int> torsion;

  bool is_zero() const {
    for (long long c : coords)
      if (c != 0)
        return false;
    for (int t : torsion)
      if (t != 0)
        return false;
    return true;
  }

  LinkingElement& operator+=(const LinkingElement& other) {
    for (std::size_t i = 0; i < coords.size(); ++i)
      coords[i] += other.coords[i];
    for (std::size_t i = 0; i < torsion.size(); ++i)
      torsion[i] = (torsion[i] + other.torsion[i]) & 1;
    return *this;
  }

  friend LinkingElement operator+(LinkingElement a, const LinkingElement& b) { return a += b; }

  bool operator==(const LinkingElement&) const = default;
};

// The basis derived from homotopy data: orbit representatives in symbol
// order, then tau-fixed symbols. Fixed once per data, so elements computed
// against the same data are directly comparable.
class LinkingBasis {
public:
  explicit LinkingBasis(const HomotopyData& h) {
    for (const Symbol& s : h.alpha()) {
      Symbol t = h.tau(s);
      if (t == s) {
        torsion_index_[s] = static_cast<int>(fixed_.size());
        fixed_.push_back(s);
      } else if (s < t) {
        rep_index_[s] = static_cast<int>(reps_.size());
        reps_.push_back(s);
      }
    }
  }

  const std::vector<Symbol>& representatives() const { return reps_; }
  const std::vector<Symbol>& fixed_symbols() const { return fixed_; }

  LinkingElement zero() const {
    return {std::vector<long long>(reps_.size(), 0), std::vector<int>(fixed_.size(), 0)};
  }

  // Adds coeff * s to e, rewriting tau(rep) as -rep.
  void accumulate(LinkingElement& e, const Symbol& s, long long coeff,
                  const HomotopyData& h) const {
    if (auto it = torsion_index_.find(s); it != torsion_index_.end()) {
      e.torsion[it->second] = static_cast<int>((e.torsion[it->second] + coeff) & 1);
      return;
    }
    if (auto it = rep_index_.find(s); it != rep_index_.end()) {
      e.coords[it->second] += coeff;
      return;
    }
    Symbol rep = h.tau(s);
    auto it = rep_index_.find(rep);
    if (it == rep_index_.end())
      throw Error("symbol '" + s.name() + "' is outside alpha");
    e.coords[it->second] -= coeff;
  }

private:
  std::vector<Symbol> reps_;
  std::vector<Symbol> fixed_;
  std::map<Symbol, int> rep_index_;
  std::map<Symbol, int> torsion_index_;
};

inline LinkingElement reduce_linking(const std::vector<std::pair<Symbol, long long>>& formal_sum,
                                     const HomotopyData& h) {
  LinkingBasis basis(h);
  LinkingElement e = basis.zero();
  for (const auto& [sym, coeff] : formal_sum) {
    if (!h.contains(sym))
      throw Error("symbol '" + sym.name() + "' is outside alpha");
    basis.accumulate(e, sym, coeff, h);
  }
  return e;
}

struct LinkingMatrix {
  int n = 0;
  std::vector<Symbol> basis_reps;
  std::vector<Symbol> basis_fixed;
  std::vector<std::vector<LinkingElement>> entries;  // n x n, symmetric, zero diagonal

  bool operator==(const LinkingMatrix&) const = default;
};

// l_ij = sum of |A| over letters with one occurrence in component i and the
// other in component j.
inline LinkingMatrix linking_matrix(const Nanophrase& p, const HomotopyData& h) {
  LinkingBasis basis(h);
  LinkingMatrix m;
  m.n = p.component_count();
  m.basis_reps = basis.representatives();
  m.basis_fixed = basis.fixed_symbols();
  m.entries.assign(m.n, std::vector<LinkingElement>(m.n, basis.zero()));
  for (const auto& [letter, sym] : p.projection()) {
    auto occ = p.occurrences(letter);
    int i = occ[0].component;
    int j = occ[1].component;
    if (i == j)
      continue;
    basis.accumulate(m.entries[i - 1][j - 1], sym, 1, h);
    basis.accumulate(m.entries[j - 1][i - 1], sym, 1, h);
  }
  return m;
}

inline std::string render_linking_element(const LinkingElement& e, const LinkingMatrix& m) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < e.coords.size(); ++i) {
    if (e.coords[i] == 0)
      continue;
    if (!first)
      out << (e.coords[i] > 0 ? " + " : " - ");
    else if (e.coords[i] < 0)
      out << '-';
    long long a = e.coords[i] < 0 ? -e.coords[i] : e.coords[i];
    if (a != 1)
      out << a << "*";
    out << m.basis_reps[i].name();
    first = false;
  }
  for (std::size_t i = 0; i < e.torsion.size(); ++i) {
    if (e.torsion[i] == 0)
      continue;
    if (!first)
      out << " + ";
    out << m.basis_fixed[i].name();
    first = false;
  }
  if (first)
    out << '0';
  return out.str();
}

// {n, basis: [symbol names], entries: [[coords...]]} where each entry vector
// lists the free coordinates followed by the torsion bits.
inline nlohmann::json linking_matrix_to_json(const LinkingMatrix& m) {
  nlohmann::json basis = nlohmann::json::array();
  for (const Symbol& s : m.basis_reps)
    basis.push_back(s.name());
  for (const Symbol& s : m.basis_fixed)
    basis.push_back(s.name());
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& row : m.entries) {
    nlohmann::json jrow = nlohmann::json::array();
    for (const auto& e : row) {
      nlohmann::json vec = nlohmann::json::array();
      for (long long c : e.coords)
        vec.push_back(c);
      for (int t : e.torsion)
        vec.push_back(t);
      jrow.push_back(vec);
    }
    entries.push_back(jrow);
  }
  return nlohmann::json{{"n", m.n}, {"basis", basis}, {"entries", entries}};
}

}  // namespace nanophrase
