#pragma once

#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nanophrase/series.hpp"

namespace nanophrase {

// A sequence c_1..c_u,i of component indices: prefix c_1..c_u and target i.
// mu extracts the coefficient of kappa_{c_1}..kappa_{c_u} in the series of
// component i.
struct IndexSequence {
  std::vector<int> prefix;
  int target = 0;

  IndexSequence() = default;
  IndexSequence(std::vector<int> prefix, int target) : prefix(std::move(prefix)), target(target) {
    if (this->prefix.empty())
      throw Error("index sequence needs at least one prefix entry");
  }

  static IndexSequence from_full(const std::vector<int>& full) {
    if (full.size() < 2)
      throw Error("index sequence needs at least two entries");
    return IndexSequence(std::vector<int>(full.begin(), full.end() - 1), full.back());
  }

  static IndexSequence parse(const std::string& text) {
    std::vector<int> full;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size())
          throw std::invalid_argument(tok);
        full.push_back(v);
      } catch (const std::exception&) {
        throw Error("cannot parse index '" + tok + "'");
      }
    }
    return from_full(full);
  }

  std::vector<int> full() const {
    std::vector<int> out = prefix;
    out.push_back(target);
    return out;
  }

  int u() const { return static_cast<int>(prefix.size()); }

  bool pairwise_distinct() const {
    std::set<int> seen(prefix.begin(), prefix.end());
    seen.insert(target);
    return seen.size() == prefix.size() + 1;
  }

  bool within(int n) const {
    if (target < 1 || target > n)
      return false;
    for (int c : prefix)
      if (c < 1 || c > n)
        return false;
    return true;
  }

  std::string str() const {
    std::ostringstream out;
    for (int c : prefix)
      out << c << ',';
    out << target;
    return out.str();
  }

  auto operator<=>(const IndexSequence&) const = default;
};

// mu modulo Delta, canonical: modulus 0 keeps the signed integer, modulus
// m >= 1 stores the representative in [0, m).
struct Residue {
  long long value = 0;
  long long modulus = 0;

  static Residue reduce(long long v, long long m) {
    if (m == 0)
      return {v, 0};
    long long r = v % m;
    if (r < 0)
      r += m;
    return {r, m};
  }

  bool operator==(const Residue&) const = default;
};

// Escalating stabilization: compare the coefficient at consecutive stages
// q, q+1 starting from q_start; accept the first agreeing pair. Exhausting
// q_cap raises StabilizationError carrying the last two values.
template <typename CoefficientAtQ>
std::pair<long long, int> stabilized_coefficient(CoefficientAtQ&& coefficient_at_q, int q_start,
                                                 int q_cap) {
  if (q_start < 2)
    throw Error("stabilization needs q >= 2");
  if (q_cap <= q_start)
    throw Error("stabilization cap must exceed the starting q");
  long long prev = coefficient_at_q(q_start);
  for (int q = q_start; q + 1 <= q_cap; ++q) {
    long long cur = coefficient_at_q(q + 1);
    if (cur == prev)
      return {prev, q};
    prev = cur;
  }
  std::ostringstream msg;
  msg << "coefficient did not stabilize by q=" << q_cap << ": value at q=" << (q_cap - 1)
      << " differs from value at q=" << q_cap << " (" << coefficient_at_q(q_cap - 1) << " vs "
      << prev << ")";
  throw StabilizationError(q_cap, coefficient_at_q(q_cap - 1), prev, msg.str());
}

struct MuOptions {
  int forced_q = 0;   // 0 = stabilization policy, otherwise evaluate at this q
  int cap_extra = 4;  // escalate up to q = u + cap_extra
};

struct MuValue {
  long long value = 0;
  int q_used = 0;
};

// Shares one series memo across many coefficient queries against the same
// phrase. The bound must dominate the prefix length of every queried
// sequence; lower-degree coefficients are unaffected by the extra slack.
class PhraseEvaluator {
public:
  PhraseEvaluator(const Nanophrase& p, int bound)
      : n_(p.component_count()), bound_(bound), ctx_(p), memo_(ctx_, bound) {}

  int component_count() const { return n_; }

  const MagnusSeries& series(int component, int q) {
    if (q < 2)
      throw Error("component series needs q >= 2");
    if (component < 1 || component > n_)
      throw Error("component index " + std::to_string(component) + " out of range");
    auto key = std::make_pair(component, q);
    auto it = cache_.find(key);
    if (it != cache_.end())
      return it->second;
    MagnusSeries out = MagnusSeries::one(bound_);
    for (int id : ctx_.component_words[component - 1])
      out = out * memo_.with_sign(id, ctx_.occs[id].sign, q);
    return cache_.emplace(key, std::move(out)).first->second;
  }

  long long coefficient(const IndexSequence& s, int q) {
    if (s.u() > bound_)
      throw Error("sequence " + s.str() + " exceeds the evaluator bound");
    return series(s.target, q).coefficient(s.prefix);
  }

  MuValue mu_with_info(const IndexSequence& s, MuOptions opts = {}) {
    if (!s.within(n_))
      throw Error("index sequence " + s.str() + " is out of range for " + std::to_string(n_) +
                  " components");
    int u = s.u();
    auto coefficient_at = [&](int q) { return coefficient(s, q); };
    if (opts.forced_q != 0) {
      if (opts.forced_q < 2)
        throw Error("q must be >= 2");
      return {coefficient_at(opts.forced_q), opts.forced_q};
    }
    auto [value, q_used] = stabilized_coefficient(coefficient_at, u + 1, u + opts.cap_extra);
    return {value, q_used};
  }

  long long mu(const IndexSequence& s, MuOptions opts = {}) { return mu_with_info(s, opts).value; }

private:
  int n_;
  int bound_;
  detail::MagnusContext ctx_;
  detail::SeriesMemo memo_;
  std::map<std::pair<int, int>, MagnusSeries> cache_;
};

inline MuValue mu_with_info(const Nanophrase& p, const IndexSequence& s, MuOptions opts = {}) {
  PhraseEvaluator eval(p, s.u());
  return eval.mu_with_info(s, opts);
}

inline long long mu(const Nanophrase& p, const IndexSequence& s, MuOptions opts = {}) {
  return mu_with_info(p, s, opts).value;
}

// All sequences obtained by deleting at least one entry of c_1..c_u,i
// (keeping order) and cyclically rotating what remains; every result keeps
// at least two entries. Duplicates are removed.
inline std::vector<IndexSequence> delta_subsequences(const IndexSequence& s) {
  std::vector<int> full = s.full();
  int len = static_cast<int>(full.size());
  std::set<std::vector<int>> seen;
  for (unsigned mask = 1; mask + 1 < (1u << len); ++mask) {
    std::vector<int> sub;
    for (int i = 0; i < len; ++i)
      if (mask & (1u << i))
        sub.push_back(full[i]);
    int t = static_cast<int>(sub.size());
    if (t < 2)
      continue;
    for (int r = 0; r < t; ++r) {
      std::vector<int> rotated;
      rotated.reserve(t);
      for (int i = 0; i < t; ++i)
        rotated.push_back(sub[(i + r) % t]);
      seen.insert(std::move(rotated));
    }
  }
  std::vector<IndexSequence> out;
  out.reserve(seen.size());
  for (const auto& v : seen)
    out.push_back(IndexSequence::from_full(v));
  return out;
}

// gcd of |mu| over the delta subsequences; zeros drop out, the empty set and
// the u = 1 case give 0.
inline long long delta(PhraseEvaluator& eval, const IndexSequence& s, MuOptions opts = {}) {
  if (s.u() <= 1)
    return 0;
  long long g = 0;
  for (const IndexSequence& d : delta_subsequences(s)) {
    long long v = eval.mu(d, opts);
    g = std::gcd(g, v < 0 ? -v : v);
  }
  return g;
}

inline long long delta(const Nanophrase& p, const IndexSequence& s, MuOptions opts = {}) {
  PhraseEvaluator eval(p, s.u());
  return delta(eval, s, opts);
}

inline Residue mu_bar(const Nanophrase& p, const IndexSequence& s, MuOptions opts = {}) {
  PhraseEvaluator eval(p, s.u());
  return Residue::reduce(eval.mu(s, opts), delta(eval, s, opts));
}

struct InvariantResult {
  IndexSequence sequence;
  long long mu = 0;
  long long delta = 0;
  Residue mubar;
  int q_used = 0;
};

inline InvariantResult compute_invariant(const Nanophrase& p, const IndexSequence& s,
                                         MuOptions opts = {}) {
  InvariantResult r;
  r.sequence = s;
  PhraseEvaluator eval(p, s.u());
  auto m = eval.mu_with_info(s, opts);
  r.mu = m.value;
  r.q_used = m.q_used;
  r.delta = delta(eval, s, opts);
  r.mubar = Residue::reduce(r.mu, r.delta);
  return r;
}

inline nlohmann::json invariant_to_json(const InvariantResult& r) {
  return nlohmann::json{{"sequence", r.sequence.full()},
                        {"mu", r.mu},
                        {"delta", r.delta},
                        {"mubar", {{"value", r.mubar.value}, {"modulus", r.mubar.modulus}}},
                        {"q_used", r.q_used}};
}

}  // namespace nanophrase
