#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "nanophrase/error.hpp"
#include "nanophrase/symbols.hpp"

namespace nanophrase {

// 1-based slot in a phrase: component 1..n, position 1..m_i. Insert moves
// reuse it with position 1..m_i+1 meaning "insert before this position".
struct OccurrenceAddress {
  int component = 0;
  int position = 0;

  auto operator<=>(const OccurrenceAddress&) const = default;
};

inline bool valid_letter_name(const std::string& name) {
  if (name.empty() || !std::isalnum(static_cast<unsigned char>(name.front())) ||
      std::isdigit(static_cast<unsigned char>(name.front())))
    return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// An alphabet with projection plus an ordered sequence of components. The
// constructor accepts structurally ill-formed data on purpose: the Gauss
// condition and projection totality are checked by validate(), which reports
// violations as data rather than throwing.
class Nanophrase {
public:
  Nanophrase() = default;

  Nanophrase(std::map<std::string, Symbol> projection,
             std::vector<std::vector<std::string>> components)
      : projection_(std::move(projection)), components_(std::move(components)) {
    for (const auto& [name, sym] : projection_) {
      if (!valid_letter_name(name))
        throw Error("invalid letter name '" + name + "'");
      if (sym.is_empty())
        throw Error("letter '" + name + "' projects to the empty marker");
    }
    for (const auto& comp : components_)
      for (const auto& name : comp)
        if (!valid_letter_name(name))
          throw Error("invalid letter name '" + name + "'");
    rebuild_index();
  }

  const std::map<std::string, Symbol>& projection() const { return projection_; }
  const std::vector<std::vector<std::string>>& components() const { return components_; }

  int component_count() const { return static_cast<int>(components_.size()); }

  int component_size(int i) const {
    check_component(i);
    return static_cast<int>(components_[i - 1].size());
  }

  int letter_count() const { return static_cast<int>(projection_.size()); }

  int total_size() const {
    int total = 0;
    for (const auto& comp : components_)
      total += static_cast<int>(comp.size());
    return total;
  }

  const std::string& letter_at(OccurrenceAddress a) const {
    check_address(a);
    return components_[a.component - 1][a.position - 1];
  }

  bool has_letter(const std::string& name) const { return projection_.count(name) > 0; }

  Symbol proj(const std::string& letter) const {
    auto it = projection_.find(letter);
    if (it == projection_.end())
      throw Error("unknown letter '" + letter + "'");
    return it->second;
  }

  // Both occurrence addresses of a letter, in phrase order. Requires the
  // phrase to satisfy the Gauss condition for that letter.
  std::array<OccurrenceAddress, 2> occurrences(const std::string& letter) const {
    auto it = occurrence_index_.find(letter);
    if (it == occurrence_index_.end() || it->second.size() != 2)
      throw Error("letter '" + letter + "' does not occur exactly twice");
    return {it->second[0], it->second[1]};
  }

  const std::map<std::string, std::vector<OccurrenceAddress>>& occurrence_index() const {
    return occurrence_index_;
  }

  // Global 0-based position of an address in the concatenation of components.
  int global_index(OccurrenceAddress a) const {
    check_address(a);
    int idx = a.position - 1;
    for (int c = 0; c + 1 < a.component; ++c)
      idx += static_cast<int>(components_[c].size());
    return idx;
  }

  bool operator==(const Nanophrase&) const = default;

private:
  void check_component(int i) const {
    if (i < 1 || i > component_count())
      throw Error("component index " + std::to_string(i) + " out of range");
  }

  void check_address(OccurrenceAddress a) const {
    check_component(a.component);
    if (a.position < 1 || a.position > static_cast<int>(components_[a.component - 1].size()))
      throw Error("position " + std::to_string(a.position) + " out of range in component " +
                  std::to_string(a.component));
  }

  void rebuild_index() {
    occurrence_index_.clear();
    for (int c = 0; c < static_cast<int>(components_.size()); ++c)
      for (int j = 0; j < static_cast<int>(components_[c].size()); ++j)
        occurrence_index_[components_[c][j]].push_back({c + 1, j + 1});
  }

  std::map<std::string, Symbol> projection_;
  std::vector<std::vector<std::string>> components_;
  std::map<std::string, std::vector<OccurrenceAddress>> occurrence_index_;
};

struct Violation {
  enum class Kind { gauss_count, missing_projection, unknown_symbol };

  Kind kind;
  std::string letter;
  int count = 0;  // gauss_count only

  std::string message() const {
    switch (kind) {
      case Kind::gauss_count:
        return "letter '" + letter + "' occurs " + std::to_string(count) + " times (expected 2)";
      case Kind::missing_projection:
        return "letter '" + letter + "' has no projection";
      case Kind::unknown_symbol:
        return "letter '" + letter + "' projects outside alpha";
    }
    return "unknown violation";
  }
};

// Structural validation: the Gauss condition and projection totality.
inline std::vector<Violation> validate(const Nanophrase& p) {
  std::vector<Violation> out;
  for (const auto& [letter, occs] : p.occurrence_index()) {
    if (occs.size() != 2)
      out.push_back({Violation::Kind::gauss_count, letter, static_cast<int>(occs.size())});
    if (!p.has_letter(letter))
      out.push_back({Violation::Kind::missing_projection, letter, 0});
  }
  for (const auto& [letter, sym] : p.projection())
    if (!p.occurrence_index().count(letter))
      out.push_back({Violation::Kind::gauss_count, letter, 0});
  return out;
}

// Validation against homotopy data: additionally every projection must land
// in h's alphabet.
inline std::vector<Violation> validate(const Nanophrase& p, const HomotopyData& h) {
  std::vector<Violation> out = validate(p);
  for (const auto& [letter, sym] : p.projection())
    if (!h.contains(sym))
      out.push_back({Violation::Kind::unknown_symbol, letter, 0});
  return out;
}

namespace detail {

// Canonical renaming key: letters numbered by first occurrence, projections
// carried along. Two valid phrases are isomorphic iff their keys coincide.
inline std::string canonical_key(const Nanophrase& p) {
  std::map<std::string, int> rank;
  for (const auto& comp : p.components())
    for (const auto& letter : comp)
      if (!rank.count(letter))
        rank[letter] = static_cast<int>(rank.size()) + 1;
  std::string key;
  for (const auto& comp : p.components()) {
    key += '|';
    for (const auto& letter : comp) {
      key += std::to_string(rank.at(letter));
      key += ':';
      key += p.has_letter(letter) ? p.proj(letter).name() : std::string("?");
      key += ' ';
    }
  }
  return key;
}

}  // namespace detail

inline bool isomorphic(const Nanophrase& p1, const Nanophrase& p2) {
  return detail::canonical_key(p1) == detail::canonical_key(p2);
}

}  // namespace nanophrase
