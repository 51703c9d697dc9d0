#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nanophrase/phrase.hpp"

namespace nanophrase {

// Text format, two logical lines:
//
//   letters: A:b+ B:b+ C:b+ D:b- E:a- F:a-
//   phrase: A B | C D B | D E A | F F C E
//
// Components are separated by '|', an empty component is written '.', and
// a bare "phrase:" denotes the 0-component phrase. When every declared
// letter name is a single character, a component may be written without
// spaces (the compact notation "AB|CDB|DEA|FFCE").

namespace detail {

struct Line {
  std::string text;
  int number = 0;
};

inline std::vector<Line> significant_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    out.push_back({line, number});
  }
  return out;
}

}  // namespace detail

inline Nanophrase parse_nanophrase(const std::string& text) {
  auto lines = detail::significant_lines(text);
  if (lines.size() != 2)
    throw Error("syntax error: expected exactly two lines 'letters:' and 'phrase:', got " +
                std::to_string(lines.size()));
  auto expect_prefix = [](const detail::Line& line, const std::string& prefix) {
    if (line.text.rfind(prefix, 0) != 0)
      throw Error("syntax error at line " + std::to_string(line.number) + ": expected '" +
                  prefix + "'");
    return line.text.substr(prefix.size());
  };

  std::string letters_part = expect_prefix(lines[0], "letters:");
  std::string phrase_part = expect_prefix(lines[1], "phrase:");

  std::map<std::string, Symbol> projection;
  {
    std::istringstream ls(letters_part);
    std::string tok;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 >= tok.size())
        throw Error("syntax error at line " + std::to_string(lines[0].number) + ": token '" +
                    tok + "' must look like name:proj");
      std::string name = tok.substr(0, colon);
      std::string proj = tok.substr(colon + 1);
      if (!valid_letter_name(name))
        throw Error("syntax error at line " + std::to_string(lines[0].number) +
                    ": invalid letter name '" + name + "'");
      if (projection.count(name))
        throw Error("syntax error at line " + std::to_string(lines[0].number) +
                    ": duplicate letter '" + name + "'");
      if (proj == "_")
        throw Error("syntax error at line " + std::to_string(lines[0].number) + ": letter '" +
                    name + "' cannot project to the empty marker");
      projection.emplace(name, Symbol(proj));
    }
  }

  bool all_single = !projection.empty() &&
                    std::all_of(projection.begin(), projection.end(),
                                [](const auto& kv) { return kv.first.size() == 1; });

  std::vector<std::vector<std::string>> components;
  {
    // split on '|' first; tokens inside a component are whitespace-separated
    std::vector<std::string> pieces;
    std::string current;
    for (char c : phrase_part) {
      if (c == '|') {
        pieces.push_back(current);
        current.clear();
      } else {
        current += c;
      }
    }
    pieces.push_back(current);

    bool any_content =
        pieces.size() > 1 ||
        pieces[0].find_first_not_of(" \t") != std::string::npos;
    if (any_content) {
      for (std::size_t ci = 0; ci < pieces.size(); ++ci) {
        std::istringstream ps(pieces[ci]);
        std::vector<std::string> tokens;
        std::string tok;
        while (ps >> tok)
          tokens.push_back(tok);
        if (tokens.empty())
          throw Error("syntax error at line " + std::to_string(lines[1].number) + ": component " +
                      std::to_string(ci + 1) + " is blank (write '.' for an empty component)");
        std::vector<std::string> comp;
        if (tokens.size() == 1 && tokens[0] == ".") {
          components.push_back(comp);
          continue;
        }
        for (const std::string& t : tokens) {
          if (t == ".")
            throw Error("syntax error at line " + std::to_string(lines[1].number) +
                        ": '.' must be the only token of its component (component " +
                        std::to_string(ci + 1) + ")");
          if (projection.count(t)) {
            comp.push_back(t);
          } else if (all_single && t.size() > 1 &&
                     std::all_of(t.begin(), t.end(), [&](char ch) {
                       return projection.count(std::string(1, ch)) > 0;
                     })) {
            for (char ch : t)
              comp.push_back(std::string(1, ch));
          } else {
            throw Error("syntax error at line " + std::to_string(lines[1].number) + ", component " +
                        std::to_string(ci + 1) + ": unknown letter '" + t + "'");
          }
        }
        components.push_back(std::move(comp));
      }
    }
  }

  Nanophrase p(std::move(projection), std::move(components));
  auto violations = validate(p);
  if (!violations.empty())
    throw Error("invalid nanophrase: " + violations.front().message());
  return p;
}

// Canonical text: letters sorted by name, single spaces, '.' for empty
// components. parse_nanophrase(render_nanophrase(p)) == p for valid phrases.
inline std::string render_nanophrase(const Nanophrase& p) {
  std::ostringstream out;
  out << "letters:";
  for (const auto& [name, sym] : p.projection())
    out << ' ' << name << ':' << sym.name();
  out << "\nphrase:";
  const auto& comps = p.components();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (c > 0)
      out << " |";
    if (comps[c].empty()) {
      out << " .";
    } else {
      for (const auto& letter : comps[c])
        out << ' ' << letter;
    }
  }
  return out.str();
}

inline nlohmann::json phrase_to_json(const Nanophrase& p) {
  nlohmann::json letters = nlohmann::json::object();
  for (const auto& [name, sym] : p.projection())
    letters[name] = sym.name();
  return nlohmann::json{{"letters", letters}, {"components", p.components()}};
}

inline Nanophrase phrase_from_json(const nlohmann::json& j) {
  std::map<std::string, Symbol> projection;
  for (const auto& [name, proj] : j.at("letters").items())
    projection.emplace(name, Symbol(proj.get<std::string>()));
  std::vector<std::vector<std::string>> components =
      j.at("components").get<std::vector<std::vector<std::string>>>();
  Nanophrase p(std::move(projection), std::move(components));
  auto violations = validate(p);
  if (!violations.empty())
    throw Error("invalid nanophrase: " + violations.front().message());
  return p;
}

}  // namespace nanophrase
