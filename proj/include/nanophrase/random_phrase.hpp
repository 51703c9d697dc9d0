#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "nanophrase/phrase.hpp"
#include "nanophrase/symbols.hpp"

namespace nanophrase {

struct RandomPhraseOptions {
  int min_components = 1;
  int max_components = 4;
  int max_letters = 8;  // letter count is drawn from 0..max_letters
};

// Uniformly sprinkles letter pairs over the components; every draw yields a
// valid Gauss phrase over the data's alphabet (projections drawn uniformly).
inline Nanophrase random_phrase(std::mt19937_64& rng, const HomotopyData& h,
                                const RandomPhraseOptions& options = {}) {
  auto below = [&](std::uint64_t n) { return n == 0 ? 0 : rng() % n; };

  int span = options.max_components - options.min_components + 1;
  int n = options.min_components + static_cast<int>(below(span));
  int letters = static_cast<int>(below(options.max_letters + 1));

  std::vector<std::vector<std::string>> comps(n);
  std::map<std::string, Symbol> projection;
  const auto& alpha = h.alpha();
  for (int l = 1; l <= letters; ++l) {
    std::string name = "L" + std::to_string(l);
    projection.emplace(name, alpha[below(alpha.size())]);
    for (int rep = 0; rep < 2; ++rep) {
      // pick an insertion slot uniformly over all current gaps
      int total_slots = 0;
      for (const auto& c : comps)
        total_slots += static_cast<int>(c.size()) + 1;
      int pick = static_cast<int>(below(total_slots));
      for (auto& c : comps) {
        int here = static_cast<int>(c.size()) + 1;
        if (pick < here) {
          c.insert(c.begin() + pick, name);
          break;
        }
        pick -= here;
      }
    }
  }
  return Nanophrase(std::move(projection), std::move(comps));
}

}  // namespace nanophrase
