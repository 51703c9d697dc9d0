#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nanophrase/error.hpp"

namespace nanophrase {

// A projection symbol. The name "_" is reserved for the out-of-alphabet
// empty marker used in extended-move triples; it can never be a member of
// an alphabet.
class Symbol {
public:
  Symbol() : name_("_") {}
  explicit Symbol(std::string name) : name_(std::move(name)) {
    if (name_.empty())
      throw Error("symbol name must be nonempty");
    for (char c : name_) {
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '(' || c == ')' ||
          c == ':' || c == '|')
        throw Error("symbol name '" + name_ + "' contains a reserved character");
    }
  }

  static Symbol empty() { return Symbol(); }

  const std::string& name() const { return name_; }
  bool is_empty() const { return name_ == "_"; }

  auto operator<=>(const Symbol&) const = default;

private:
  std::string name_;
};

using Triple = std::array<Symbol, 3>;
using SymbolPair = std::pair<Symbol, Symbol>;

// Homotopy data: the alphabet with the three involutions and the triple set
// that licenses H3 moves. Triples may contain the empty marker in at most
// one slot (extended moves); anything else is rejected at construction.
class HomotopyData {
public:
  struct MoveFlags {
    bool allow_shift = true;
    bool allow_self_crossing = true;
  };

  static HomotopyData make(std::string name, std::vector<Symbol> alpha,
                           const std::vector<SymbolPair>& tau_pairs,
                           const std::vector<SymbolPair>& nu_pairs,
                           const std::vector<SymbolPair>& sigma_pairs,
                           const std::vector<Triple>& triples) {
    return make(std::move(name), std::move(alpha), tau_pairs, nu_pairs, sigma_pairs, triples,
                MoveFlags{});
  }

  static HomotopyData make(std::string name, std::vector<Symbol> alpha,
                           const std::vector<SymbolPair>& tau_pairs,
                           const std::vector<SymbolPair>& nu_pairs,
                           const std::vector<SymbolPair>& sigma_pairs,
                           const std::vector<Triple>& triples, MoveFlags flags) {
    HomotopyData h;
    h.name_ = std::move(name);
    h.flags_ = flags;
    std::sort(alpha.begin(), alpha.end());
    alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
    for (const Symbol& s : alpha)
      if (s.is_empty())
        throw Error("the empty marker '_' cannot be a member of alpha");
    h.alpha_ = std::move(alpha);
    h.tau_ = h.build_involution(tau_pairs, "tau");
    h.nu_ = h.build_involution(nu_pairs, "nu");
    h.sigma_ = h.build_involution(sigma_pairs, "sigma");
    for (const Triple& t : triples) {
      int empties = 0;
      for (const Symbol& s : t) {
        if (s.is_empty())
          ++empties;
        else if (!h.contains(s))
          throw Error("triple slot '" + s.name() + "' is not in alpha");
      }
      if (empties > 1)
        throw Error("a triple may contain at most one empty slot");
      h.triples_.insert(t);
    }
    return h;
  }

  const std::string& name() const { return name_; }
  const std::vector<Symbol>& alpha() const { return alpha_; }
  const std::set<Triple>& triples() const { return triples_; }
  const MoveFlags& flags() const { return flags_; }

  bool contains(const Symbol& s) const {
    return std::binary_search(alpha_.begin(), alpha_.end(), s);
  }

  Symbol tau(const Symbol& s) const { return apply(tau_, s, "tau"); }
  Symbol nu(const Symbol& s) const { return apply(nu_, s, "nu"); }
  Symbol sigma(const Symbol& s) const { return apply(sigma_, s, "sigma"); }

  bool has_triple(const Symbol& a, const Symbol& b, const Symbol& c) const {
    return triples_.count(Triple{a, b, c}) > 0;
  }

private:
  std::map<Symbol, Symbol> build_involution(const std::vector<SymbolPair>& pairs,
                                            const std::string& label) const {
    std::map<Symbol, Symbol> out;
    for (const Symbol& s : alpha_)
      out[s] = s;  // unspecified symbols are fixed points
    for (const auto& [a, b] : pairs) {
      if (!contains(a) || !contains(b))
        throw Error(label + " pair (" + a.name() + "," + b.name() + ") is not within alpha");
      out[a] = b;
      out[b] = a;
    }
    for (const auto& [a, b] : out)
      if (out.at(b) != a)
        throw Error(label + " is not an involution");
    return out;
  }

  Symbol apply(const std::map<Symbol, Symbol>& inv, const Symbol& s, const std::string& label) const {
    auto it = inv.find(s);
    if (it == inv.end())
      throw Error(label + " is undefined on symbol '" + s.name() + "'");
    return it->second;
  }

  std::string name_;
  std::vector<Symbol> alpha_;
  std::map<Symbol, Symbol> tau_, nu_, sigma_;
  std::set<Triple> triples_;
  MoveFlags flags_;
};

namespace detail {

inline std::vector<Triple> virtual_triples() {
  auto t = [](const char* a, const char* b, const char* c) {
    return Triple{Symbol(a), Symbol(b), Symbol(c)};
  };
  return {
      t("a+", "a+", "a+"), t("a+", "a+", "a-"), t("a+", "a-", "a-"),
      t("a-", "a-", "a-"), t("a-", "a-", "a+"), t("a-", "a+", "a+"),
      t("b+", "b+", "b+"), t("b+", "b+", "b-"), t("b+", "b-", "b-"),
      t("b-", "b-", "b-"), t("b-", "b-", "b+"), t("b-", "b+", "b+"),
  };
}

}  // namespace detail

// The virtual-link data (alpha_v, tau_v, S_v, nu_v, sigma_v).
inline const HomotopyData& builtin_virtual() {
  static const HomotopyData h = [] {
    std::vector<Symbol> alpha{Symbol("a+"), Symbol("a-"), Symbol("b+"), Symbol("b-")};
    std::vector<SymbolPair> tau{{Symbol("a+"), Symbol("b-")}, {Symbol("a-"), Symbol("b+")}};
    std::vector<SymbolPair> nu{{Symbol("a+"), Symbol("b+")}, {Symbol("a-"), Symbol("b-")}};
    std::vector<SymbolPair> sigma{{Symbol("a+"), Symbol("a-")}, {Symbol("b+"), Symbol("b-")}};
    return HomotopyData::make("virtual", alpha, tau, nu, sigma, detail::virtual_triples());
  }();
  return h;
}

// The welded-link data: same involutions, the triple set enlarged by the
// twelve empty-slot triples of the upper forbidden move.
inline const HomotopyData& builtin_welded() {
  static const HomotopyData h = [] {
    auto t = [](const char* a, const char* b, const char* c) {
      return Triple{Symbol(a), Symbol(b), Symbol(c)};
    };
    std::vector<Triple> triples = detail::virtual_triples();
    const std::vector<Triple> extended = {
        t("a+", "a+", "_"), t("a+", "b-", "_"), t("b-", "a+", "_"), t("b-", "b-", "_"),
        t("a-", "_", "b-"), t("b+", "_", "a+"), t("a-", "_", "a+"), t("b+", "_", "b-"),
        t("_", "a-", "a-"), t("_", "a-", "b+"), t("_", "b+", "a-"), t("_", "b+", "b+"),
    };
    triples.insert(triples.end(), extended.begin(), extended.end());
    std::vector<Symbol> alpha{Symbol("a+"), Symbol("a-"), Symbol("b+"), Symbol("b-")};
    std::vector<SymbolPair> tau{{Symbol("a+"), Symbol("b-")}, {Symbol("a-"), Symbol("b+")}};
    std::vector<SymbolPair> nu{{Symbol("a+"), Symbol("b+")}, {Symbol("a-"), Symbol("b-")}};
    std::vector<SymbolPair> sigma{{Symbol("a+"), Symbol("a-")}, {Symbol("b+"), Symbol("b-")}};
    return HomotopyData::make("welded", alpha, tau, nu, sigma, triples);
  }();
  return h;
}

// --- data file format -------------------------------------------------------
//
//   alpha: a+ a- b+ b-
//   tau: a+<->b- a-<->b+
//   nu: a+<->b+ a-<->b-
//   sigma: a+<->a- b+<->b-
//   S: (a+,a+,a+) (a+,a+,_) ...
//
// Unlisted symbols are fixed points of the involutions. '_' marks the empty
// slot in a triple.

inline HomotopyData parse_homotopy_data(const std::string& text, const std::string& name = "custom") {
  std::map<std::string, std::string> sections;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
      trimmed.pop_back();
    std::size_t start = trimmed.find_first_not_of(" \t");
    if (start == std::string::npos)
      continue;
    trimmed = trimmed.substr(start);
    auto colon = trimmed.find(':');
    if (colon == std::string::npos)
      throw Error("homotopy data line " + std::to_string(lineno) + ": expected 'key: ...'");
    std::string key = trimmed.substr(0, colon);
    if (sections.count(key))
      throw Error("homotopy data line " + std::to_string(lineno) + ": duplicate section '" + key + "'");
    sections[key] = trimmed.substr(colon + 1);
  }
  for (const auto& [key, _] : sections)
    if (key != "alpha" && key != "tau" && key != "nu" && key != "sigma" && key != "S")
      throw Error("homotopy data: unknown section '" + key + "'");
  if (!sections.count("alpha"))
    throw Error("homotopy data: missing 'alpha:' line");

  auto tokens = [](const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ts(s);
    std::string tok;
    while (ts >> tok)
      out.push_back(tok);
    return out;
  };

  std::vector<Symbol> alpha;
  for (const std::string& tok : tokens(sections["alpha"]))
    alpha.push_back(Symbol(tok));

  auto parse_pairs = [&](const std::string& key) {
    std::vector<SymbolPair> out;
    if (!sections.count(key))
      return out;
    for (const std::string& tok : tokens(sections[key])) {
      auto arrow = tok.find("<->");
      if (arrow == std::string::npos)
        throw Error("homotopy data: '" + key + "' entry '" + tok + "' must look like x<->y");
      out.emplace_back(Symbol(tok.substr(0, arrow)), Symbol(tok.substr(arrow + 3)));
    }
    return out;
  };

  std::vector<Triple> triples;
  if (sections.count("S")) {
    for (const std::string& tok : tokens(sections["S"])) {
      if (tok.size() < 2 || tok.front() != '(' || tok.back() != ')')
        throw Error("homotopy data: triple '" + tok + "' must look like (x,y,z)");
      std::string body = tok.substr(1, tok.size() - 2);
      std::vector<std::string> parts;
      std::size_t pos = 0;
      while (true) {
        auto comma = body.find(',', pos);
        if (comma == std::string::npos) {
          parts.push_back(body.substr(pos));
          break;
        }
        parts.push_back(body.substr(pos, comma - pos));
        pos = comma + 1;
      }
      if (parts.size() != 3)
        throw Error("homotopy data: triple '" + tok + "' must have three slots");
      Triple t;
      for (int i = 0; i < 3; ++i)
        t[i] = parts[i] == "_" ? Symbol::empty() : Symbol(parts[i]);
      triples.push_back(t);
    }
  }

  return HomotopyData::make(name, alpha, parse_pairs("tau"), parse_pairs("nu"),
                            parse_pairs("sigma"), triples);
}

inline std::string render_homotopy_data(const HomotopyData& h) {
  std::ostringstream out;
  out << "alpha:";
  for (const Symbol& s : h.alpha())
    out << ' ' << s.name();
  auto involution_line = [&](const char* key, auto&& f) {
    out << '\n' << key << ':';
    std::set<Symbol> done;
    for (const Symbol& s : h.alpha()) {
      if (done.count(s))
        continue;
      Symbol t = f(s);
      done.insert(s);
      done.insert(t);
      if (t != s)
        out << ' ' << s.name() << "<->" << t.name();
    }
  };
  involution_line("tau", [&](const Symbol& s) { return h.tau(s); });
  involution_line("nu", [&](const Symbol& s) { return h.nu(s); });
  involution_line("sigma", [&](const Symbol& s) { return h.sigma(s); });
  out << "\nS:";
  for (const Triple& t : h.triples())
    out << " (" << t[0].name() << ',' << t[1].name() << ',' << t[2].name() << ')';
  return out.str();
}

}  // namespace nanophrase
