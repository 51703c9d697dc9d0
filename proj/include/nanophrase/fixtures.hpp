#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "nanophrase/text.hpp"

namespace nanophrase {

// Built-in example phrases. The parameterized families accept "torus:n" and
// "vlink:n" names.

inline Nanophrase fixture_ex32() {
  return parse_nanophrase(
      "letters: A:b+ B:b+ C:b+ D:b- E:a- F:a-\n"
      "phrase: A B | C D B | D E A | F F C E");
}

inline Nanophrase fixture_borromean() {
  return parse_nanophrase(
      "letters: A:b+ B:b- C:a- D:a+ E:b+ F:a-\n"
      "phrase: A B C D | E C F A | D F B E");
}

inline Nanophrase fixture_ex4() {
  return parse_nanophrase(
      "letters: A:b+ B:b+ C:b- D:a- E:b+ F:a+\n"
      "phrase: A B | F B C D A E | D C | E F");
}

inline Nanophrase fixture_ex5() {
  return parse_nanophrase(
      "letters: A:a+ B:b+ C:a+ D:b+ E:b+ F:a+\n"
      "phrase: A B C D | D A E F B C | E F | .");
}

// The (2n,2)-torus phrase A1 B1 .. An Bn | A1 B1 .. An Bn with |Aj| = b+,
// |Bj| = a+.
inline Nanophrase fixture_torus(int n) {
  if (n < 1)
    throw Error("torus fixture needs n >= 1");
  std::ostringstream letters, word;
  letters << "letters:";
  for (int j = 1; j <= n; ++j) {
    letters << " A" << j << ":b+ B" << j << ":a+";
    word << " A" << j << " B" << j;
  }
  return parse_nanophrase(letters.str() + "\nphrase:" + word.str() + " |" + word.str());
}

// A1 .. An | A1 .. An with |Aj| = b+.
inline Nanophrase fixture_vlink(int n) {
  if (n < 1)
    throw Error("vlink fixture needs n >= 1");
  std::ostringstream letters, word;
  letters << "letters:";
  for (int j = 1; j <= n; ++j) {
    letters << " A" << j << ":b+";
    word << " A" << j;
  }
  return parse_nanophrase(letters.str() + "\nphrase:" + word.str() + " |" + word.str());
}

inline std::vector<std::string> fixture_names() {
  return {"ex32", "borromean", "torus:n", "vlink:n", "ex4", "ex5"};
}

inline Nanophrase fixture_by_name(const std::string& name) {
  if (name == "ex32")
    return fixture_ex32();
  if (name == "borromean")
    return fixture_borromean();
  if (name == "ex4")
    return fixture_ex4();
  if (name == "ex5")
    return fixture_ex5();
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    std::string family = name.substr(0, colon);
    int n = 0;
    try {
      n = std::stoi(name.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error("bad fixture parameter in '" + name + "'");
    }
    if (family == "torus")
      return fixture_torus(n);
    if (family == "vlink")
      return fixture_vlink(n);
  }
  throw Error("unknown fixture '" + name + "' (known: ex32, borromean, torus:n, vlink:n, ex4, ex5)");
}

}  // namespace nanophrase
