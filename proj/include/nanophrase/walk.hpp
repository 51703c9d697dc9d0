#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "nanophrase/moves.hpp"
#include "nanophrase/text.hpp"

namespace nanophrase {

// FNV-1a of the canonical rendering; the stable digest recorded in traces.
inline std::uint64_t phrase_hash(const Nanophrase& p) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : render_nanophrase(p)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

enum class WalkVariant { open_m, m, welded_m };

inline std::string to_string(WalkVariant v) {
  switch (v) {
    case WalkVariant::open_m: return "open_M";
    case WalkVariant::m: return "M";
    case WalkVariant::welded_m: return "welded_M";
  }
  return "?";
}

inline WalkVariant walk_variant_from_string(const std::string& s) {
  for (WalkVariant v : {WalkVariant::open_m, WalkVariant::m, WalkVariant::welded_m})
    if (to_string(v) == s)
      return v;
  throw Error("unknown walk variant '" + s + "' (expected open_M, M or welded_M)");
}

inline KindSet kinds_for_variant(WalkVariant v) {
  KindSet kinds{MoveKind::h1_remove, MoveKind::h1_insert, MoveKind::h2_remove,
                MoveKind::h2_insert, MoveKind::h3,        MoveKind::self_cross};
  if (v != WalkVariant::open_m)
    kinds.insert(MoveKind::shift);
  if (v == WalkVariant::welded_m)
    kinds.insert(MoveKind::h3ext);
  return kinds;
}

// The built-in data matching a variant: welded walks need the extended
// triple set, the others use the virtual data.
inline const HomotopyData& data_for_variant(WalkVariant v) {
  return v == WalkVariant::welded_m ? builtin_welded() : builtin_virtual();
}

struct WalkStep {
  bool noop = false;
  MoveSite site;
  std::uint64_t result_hash = 0;
};

struct WalkTrace {
  std::uint64_t seed = 0;
  WalkVariant variant = WalkVariant::m;
  std::vector<WalkStep> steps;
};

struct WalkOptions {
  int max_letters = 48;            // growth cap; insert moves beyond it are skipped
  std::uint32_t insert_permille = 250;  // probability of attempting an insert move
};

// Seeded stepper over the move calculus. All randomness is drawn from one
// mt19937_64 through modulo reduction, so a seed fully determines the walk
// on any platform.
class WalkEngine {
public:
  WalkEngine(Nanophrase start, const HomotopyData& h, WalkVariant variant, std::uint64_t seed,
             WalkOptions options = {})
      : phrase_(std::move(start)), data_(&h), options_(options), rng_(seed) {
    trace_.seed = seed;
    trace_.variant = variant;
    kinds_ = kinds_for_variant(variant);
  }

  const Nanophrase& phrase() const { return phrase_; }
  const WalkTrace& trace() const { return trace_; }

  // One walk step; returns the applied site (nullopt for a recorded no-op).
  std::optional<MoveSite> step() {
    KindSet structural = kinds_;
    structural.erase(MoveKind::h1_insert);
    structural.erase(MoveKind::h2_insert);
    std::vector<MoveSite> pool = enumerate_sites(phrase_, *data_, structural);

    std::vector<MoveSite> inserts;
    bool may_grow = phrase_.letter_count() + 2 <= options_.max_letters;
    if (may_grow) {
      KindSet grow = kinds_;
      for (MoveKind k : structural)
        grow.erase(k);
      if (!grow.empty())
        inserts = enumerate_sites(phrase_, *data_, grow);
    }

    bool use_insert = false;
    if (!inserts.empty() && (pool.empty() || next_below(1000) < options_.insert_permille))
      use_insert = true;

    if (!use_insert && pool.empty()) {
      WalkStep s;
      s.noop = true;
      s.result_hash = phrase_hash(phrase_);
      trace_.steps.push_back(s);
      return std::nullopt;
    }

    MoveSite site;
    if (use_insert) {
      site = inserts[next_below(inserts.size())];
      const auto& alpha = data_->alpha();
      site.projection = alpha[next_below(alpha.size())];
      site.fresh.clear();
      site.fresh.push_back(fresh_name());
      if (site.kind == MoveKind::h2_insert)
        site.fresh.push_back(fresh_name());
    } else {
      site = pool[next_below(pool.size())];
    }

    phrase_ = apply_move(phrase_, *data_, site);
    WalkStep s;
    s.site = site;
    s.result_hash = phrase_hash(phrase_);
    trace_.steps.push_back(s);
    return site;
  }

private:
  std::uint64_t next_below(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }

  std::string fresh_name() {
    while (true) {
      std::string name = "w" + std::to_string(++fresh_counter_);
      if (!phrase_.has_letter(name))
        return name;
    }
  }

  Nanophrase phrase_;
  const HomotopyData* data_;
  WalkOptions options_;
  std::mt19937_64 rng_;
  KindSet kinds_;
  WalkTrace trace_;
  unsigned long fresh_counter_ = 0;
};

inline std::pair<Nanophrase, WalkTrace> random_walk(const Nanophrase& p, const HomotopyData& h,
                                                    WalkVariant variant, int steps,
                                                    std::uint64_t seed, WalkOptions options = {}) {
  if (steps < 0)
    throw Error("walk steps must be >= 0");
  WalkEngine engine(p, h, variant, seed, options);
  for (int i = 0; i < steps; ++i)
    engine.step();
  return {engine.phrase(), engine.trace()};
}

// Re-applies a trace from its start phrase, checking every recorded hash.
inline Nanophrase replay(const Nanophrase& start, const HomotopyData& h, const WalkTrace& trace) {
  Nanophrase p = start;
  int stepno = 0;
  for (const WalkStep& s : trace.steps) {
    ++stepno;
    if (!s.noop)
      p = apply_move(p, h, s.site);
    if (phrase_hash(p) != s.result_hash)
      throw Error("trace replay diverged at step " + std::to_string(stepno));
  }
  return p;
}

// --- JSON ---------------------------------------------------------------

inline nlohmann::json address_to_json(OccurrenceAddress a) {
  return nlohmann::json::array({a.component, a.position});
}

inline OccurrenceAddress address_from_json(const nlohmann::json& j) {
  return {j.at(0).get<int>(), j.at(1).get<int>()};
}

inline nlohmann::json site_to_json(const MoveSite& site) {
  nlohmann::json j;
  j["kind"] = to_string(site.kind);
  j["direction"] = site.backward ? "backward" : "forward";
  j["addresses"] = nlohmann::json::array();
  for (OccurrenceAddress a : site.addresses)
    j["addresses"].push_back(address_to_json(a));
  nlohmann::json params = nlohmann::json::object();
  if (!site.letters.empty())
    params["letters"] = site.letters;
  if (site.kind == MoveKind::shift)
    params["component"] = site.component;
  if (!site.slots.empty()) {
    params["slots"] = nlohmann::json::array();
    for (OccurrenceAddress a : site.slots)
      params["slots"].push_back(address_to_json(a));
  }
  if (!site.fresh.empty())
    params["fresh"] = site.fresh;
  if (site.projection)
    params["projection"] = site.projection->name();
  j["params"] = params;
  return j;
}

inline MoveSite site_from_json(const nlohmann::json& j) {
  MoveSite site;
  site.kind = move_kind_from_string(j.at("kind").get<std::string>());
  site.backward = j.at("direction").get<std::string>() == "backward";
  for (const auto& a : j.at("addresses"))
    site.addresses.push_back(address_from_json(a));
  const auto& params = j.at("params");
  if (params.contains("letters"))
    site.letters = params.at("letters").get<std::vector<std::string>>();
  if (params.contains("component"))
    site.component = params.at("component").get<int>();
  if (params.contains("slots"))
    for (const auto& a : params.at("slots"))
      site.slots.push_back(address_from_json(a));
  if (params.contains("fresh"))
    site.fresh = params.at("fresh").get<std::vector<std::string>>();
  if (params.contains("projection"))
    site.projection = Symbol(params.at("projection").get<std::string>());
  return site;
}

namespace detail {

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::uint64_t hash_from_hex(const std::string& s) {
  return std::stoull(s, nullptr, 16);
}

}  // namespace detail

inline nlohmann::json trace_to_json(const WalkTrace& trace) {
  nlohmann::json steps = nlohmann::json::array();
  for (const WalkStep& s : trace.steps) {
    nlohmann::json step = s.noop ? nlohmann::json{{"kind", "noop"}} : site_to_json(s.site);
    step["result_hash"] = detail::hash_hex(s.result_hash);
    steps.push_back(step);
  }
  return nlohmann::json{{"seed", trace.seed}, {"variant", to_string(trace.variant)},
                        {"steps", steps}};
}

inline WalkTrace trace_from_json(const nlohmann::json& j) {
  WalkTrace trace;
  trace.seed = j.at("seed").get<std::uint64_t>();
  trace.variant = walk_variant_from_string(j.at("variant").get<std::string>());
  for (const auto& step : j.at("steps")) {
    WalkStep s;
    if (step.at("kind").get<std::string>() == "noop")
      s.noop = true;
    else
      s.site = site_from_json(step);
    s.result_hash = detail::hash_from_hex(step.at("result_hash").get<std::string>());
    trace.steps.push_back(std::move(s));
  }
  return trace;
}

}  // namespace nanophrase
