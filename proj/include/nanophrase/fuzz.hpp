#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "nanophrase/invariants.hpp"
#include "nanophrase/linking.hpp"
#include "nanophrase/random_phrase.hpp"
#include "nanophrase/walk.hpp"

namespace nanophrase {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct FuzzConfig {
  int trials = 100;
  int steps = 20;
  WalkVariant variant = WalkVariant::m;
  std::uint64_t seed = 0;
  int min_components = 2;
  int max_components = 4;
  int max_start_letters = 8;
  int walk_cap = 24;    // letter-count cap during walks
  int max_seq_len = 3;  // total sequence length cap (prefix + target)
  int threads = 0;      // 0 = hardware concurrency
};

struct FuzzCounterexample {
  int trial = 0;
  int step = 0;
  std::string assertion;
  std::string phrase_text;  // start phrase of the failing walk
  std::string data_name;
  WalkVariant variant = WalkVariant::m;
  std::uint64_t trial_seed = 0;
  int max_seq_len = 3;
  WalkTrace trace;  // up to and including the failing step
};

struct FuzzReport {
  int trials = 0;
  int move_steps = 0;  // applied and checked moves (sweep + walk)
  std::map<std::string, int> kind_counts;
  std::vector<FuzzCounterexample> failures;

  bool ok() const { return failures.empty(); }
};

namespace detail {

struct TrialSequences {
  std::vector<IndexSequence> distinct;
  std::optional<IndexSequence> repeated;
  int bound = 1;
};

// All distinct sequences up to the cap, plus one repeated-index sequence.
// A shared evaluator makes the per-sequence cost a map lookup, so exhaustive
// coverage is affordable at fuzz scale (n <= 4). The repeated pick depends
// only on (trial seed, n), so a replay reconstructs the same checks.
inline TrialSequences choose_sequences(std::uint64_t trial_seed, int n, int max_seq_len) {
  std::mt19937_64 rng(splitmix64(trial_seed ^ 0x73657175656e6365ull));
  auto below = [&](std::uint64_t m) { return m == 0 ? 0 : rng() % m; };
  TrialSequences out;
  if (n < 2)
    return out;

  for (int c = 1; c <= n; ++c)
    for (int i = 1; i <= n; ++i)
      if (c != i)
        out.distinct.push_back(IndexSequence({c}, i));
  out.bound = 1;

  if (n >= 3 && max_seq_len >= 3) {
    for (int c1 = 1; c1 <= n; ++c1)
      for (int c2 = 1; c2 <= n; ++c2)
        for (int i = 1; i <= n; ++i)
          if (c1 != c2 && c1 != i && c2 != i)
            out.distinct.push_back(IndexSequence({c1, c2}, i));
    out.bound = 2;
  }

  int c = 1 + static_cast<int>(below(n));
  int i = 1 + static_cast<int>(below(n));
  while (i == c)
    i = 1 + static_cast<int>(below(n));
  if (max_seq_len >= 3) {
    out.repeated = IndexSequence({c, c}, i);
    out.bound = std::max(out.bound, 2);
  } else {
    out.repeated = IndexSequence({c}, c);
  }
  return out;
}

// Inserts three fresh-letter segments at random slots in increasing phrase
// order; used to plant move patterns that random phrases rarely contain.
inline Nanophrase plant_segments(std::mt19937_64& rng, const Nanophrase& p,
                                 const std::vector<std::vector<std::string>>& segments,
                                 const std::map<std::string, Symbol>& fresh_projections) {
  auto comps = p.components();
  auto projection = p.projection();
  for (const auto& [name, sym] : fresh_projections) {
    if (projection.count(name))
      return p;  // name collision; leave the phrase alone
    projection.emplace(name, sym);
  }
  if (comps.empty())
    return p;
  auto below = [&](std::uint64_t m) { return m == 0 ? 0 : rng() % m; };
  std::vector<std::pair<int, int>> slots;  // (component 0-based, offset)
  for (std::size_t k = 0; k < segments.size(); ++k) {
    int c = static_cast<int>(below(comps.size()));
    int pos = static_cast<int>(below(comps[c].size() + 1));
    slots.push_back({c, pos});
  }
  std::sort(slots.begin(), slots.end());
  for (int k = static_cast<int>(segments.size()) - 1; k >= 0; --k)
    comps[slots[k].first].insert(comps[slots[k].first].begin() + slots[k].second,
                                 segments[k].begin(), segments[k].end());
  return Nanophrase(std::move(projection), std::move(comps));
}

// Plants the full H3 footprint x AB y AC z BC t (or its mirror) with a
// random triple from the data, guaranteeing at least one H3 site.
inline Nanophrase plant_h3_pattern(std::mt19937_64& rng, const Nanophrase& p,
                                   const HomotopyData& h, bool backward) {
  std::vector<Triple> full;
  for (const Triple& t : h.triples())
    if (!t[0].is_empty() && !t[1].is_empty() && !t[2].is_empty())
      full.push_back(t);
  if (full.empty())
    return p;
  const Triple& t = full[rng() % full.size()];
  std::map<std::string, Symbol> fresh{{"Pa", t[0]}, {"Pb", t[1]}, {"Pc", t[2]}};
  std::vector<std::vector<std::string>> segments =
      backward ? std::vector<std::vector<std::string>>{{"Pb", "Pa"}, {"Pc", "Pa"}, {"Pc", "Pb"}}
               : std::vector<std::vector<std::string>>{{"Pa", "Pb"}, {"Pa", "Pc"}, {"Pb", "Pc"}};
  return plant_segments(rng, p, segments, fresh);
}

// Plants an extended-H3 footprint for a random empty-slot triple.
inline Nanophrase plant_h3ext_pattern(std::mt19937_64& rng, const Nanophrase& p,
                                      const HomotopyData& h, bool backward) {
  std::vector<Triple> ext;
  for (const Triple& t : h.triples())
    if (t[0].is_empty() || t[1].is_empty() || t[2].is_empty())
      ext.push_back(t);
  if (ext.empty())
    return p;
  const Triple& t = ext[rng() % ext.size()];
  std::map<std::string, Symbol> fresh;
  std::vector<std::vector<std::string>> segments;
  if (t[2].is_empty()) {  // pair (A,B), then A, then B
    fresh = {{"Pa", t[0]}, {"Pb", t[1]}};
    segments = {backward ? std::vector<std::string>{"Pb", "Pa"} : std::vector<std::string>{"Pa", "Pb"},
                {"Pa"},
                {"Pb"}};
  } else if (t[1].is_empty()) {  // A, then pair (A,C), then C
    fresh = {{"Pa", t[0]}, {"Pc", t[2]}};
    segments = {{"Pa"},
                backward ? std::vector<std::string>{"Pc", "Pa"} : std::vector<std::string>{"Pa", "Pc"},
                {"Pc"}};
  } else {  // B, then C, then pair (B,C)
    fresh = {{"Pb", t[1]}, {"Pc", t[2]}};
    segments = {{"Pb"},
                {"Pc"},
                backward ? std::vector<std::string>{"Pc", "Pb"} : std::vector<std::string>{"Pb", "Pc"}};
  }
  return plant_segments(rng, p, segments, fresh);
}

inline bool repeated_mu_kind(MoveKind k) {
  switch (k) {
    case MoveKind::h1_remove:
    case MoveKind::h1_insert:
    case MoveKind::h2_remove:
    case MoveKind::h2_insert:
    case MoveKind::self_cross:
      return true;
    default:
      return false;
  }
}

}  // namespace detail

// Step-by-step invariance checker for one walk: component count and linking
// matrix always; exact mu for distinct sequences on every non-shift move and
// for the repeated sequence on H1/H2/self-crossing moves; delta and mu-bar
// across every move including shifts, with mu allowed to drift only by
// multiples of delta.
class TrialChecker {
public:
  TrialChecker(const HomotopyData& h, detail::TrialSequences seqs)
      : data_(&h), seqs_(std::move(seqs)) {}

  void init(const Nanophrase& start) {
    baseline_linking_ = linking_matrix(start, *data_);
    n_ = start.component_count();
    PhraseEvaluator eval(start, seqs_.bound);
    mu_.clear();
    delta_.clear();
    mubar_.clear();
    for (const IndexSequence& s : seqs_.distinct) {
      mu_.push_back(eval.mu(s));
      delta_.push_back(delta(eval, s));
      mubar_.push_back(Residue::reduce(mu_.back(), delta_.back()));
    }
    repeated_mu_ = seqs_.repeated ? eval.mu(*seqs_.repeated) : 0;
  }

  // Returns a description of the first violated assertion, if any.
  std::optional<std::string> check_step(const MoveSite& site, const Nanophrase& after) {
    auto fail = [&](const std::string& what) {
      return std::optional<std::string>(describe(site) + ": " + what);
    };

    if (!validate(after, *data_).empty())
      return fail("result fails validation: " + validate(after, *data_).front().message());
    if (after.component_count() != n_)
      return fail("component count changed");
    if (!(linking_matrix(after, *data_) == baseline_linking_))
      return fail("linking matrix changed");

    PhraseEvaluator eval(after, seqs_.bound);
    bool is_shift = site.kind == MoveKind::shift;
    for (std::size_t k = 0; k < seqs_.distinct.size(); ++k) {
      const IndexSequence& s = seqs_.distinct[k];
      long long new_mu = eval.mu(s);
      if (!is_shift && new_mu != mu_[k])
        return fail("mu(" + s.str() + ") changed " + std::to_string(mu_[k]) + " -> " +
                    std::to_string(new_mu));
      long long new_delta = delta(eval, s);
      if (new_delta != delta_[k])
        return fail("delta(" + s.str() + ") changed " + std::to_string(delta_[k]) + " -> " +
                    std::to_string(new_delta));
      Residue new_mubar = Residue::reduce(new_mu, new_delta);
      if (!(new_mubar == mubar_[k]))
        return fail("mubar(" + s.str() + ") changed");
      if (is_shift && new_delta != 0 && (new_mu - mu_[k]) % new_delta != 0)
        return fail("mu(" + s.str() + ") drifted by a non-multiple of delta");
      mu_[k] = new_mu;
    }
    if (seqs_.repeated) {
      long long new_rep = eval.mu(*seqs_.repeated);
      if (detail::repeated_mu_kind(site.kind) && new_rep != repeated_mu_)
        return fail("repeated-index mu(" + seqs_.repeated->str() + ") changed " +
                    std::to_string(repeated_mu_) + " -> " + std::to_string(new_rep));
      repeated_mu_ = new_rep;
    }
    return std::nullopt;
  }

private:
  const HomotopyData* data_;
  detail::TrialSequences seqs_;
  int n_ = 0;
  LinkingMatrix baseline_linking_;
  std::vector<long long> mu_;
  std::vector<long long> delta_;
  std::vector<Residue> mubar_;
  long long repeated_mu_ = 0;
};

namespace detail {

inline std::optional<FuzzCounterexample> run_trial(const FuzzConfig& config, int trial,
                                                   int* move_steps,
                                                   std::map<std::string, int>* kind_counts) {
  const HomotopyData& data = data_for_variant(config.variant);
  std::uint64_t trial_seed = splitmix64(config.seed ^ (0x9e3779b97f4a7c15ull * (trial + 1)));

  std::mt19937_64 gen_rng(splitmix64(trial_seed ^ 0x70687261736547ull));
  RandomPhraseOptions popts;
  popts.min_components = config.min_components;
  popts.max_components = config.max_components;
  popts.max_letters = config.max_start_letters;
  Nanophrase start = random_phrase(gen_rng, data, popts);
  // most random phrases carry no H3 footprint, so plant one in most trials
  if (gen_rng() % 10 < 7)
    start = plant_h3_pattern(gen_rng, start, data, gen_rng() % 2 == 0);
  if (config.variant == WalkVariant::welded_m && gen_rng() % 2 == 0)
    start = plant_h3ext_pattern(gen_rng, start, data, gen_rng() % 2 == 0);

  TrialSequences seqs = choose_sequences(trial_seed, start.component_count(), config.max_seq_len);
  TrialChecker checker(data, seqs);
  checker.init(start);

  auto counterexample = [&](int step, const std::string& assertion, const WalkTrace& trace) {
    FuzzCounterexample ce;
    ce.trial = trial;
    ce.step = step;
    ce.assertion = assertion;
    ce.phrase_text = render_nanophrase(start);
    ce.data_name = data.name();
    ce.variant = config.variant;
    ce.trial_seed = trial_seed;
    ce.max_seq_len = config.max_seq_len;
    ce.trace = trace;
    return ce;
  };

  // single-move sweep: apply every enumerated structural site on the start
  // phrase and check it in isolation; this guarantees per-kind coverage
  // that a random walk does not
  {
    KindSet structural = kinds_for_variant(config.variant);
    structural.erase(MoveKind::h1_insert);
    structural.erase(MoveKind::h2_insert);
    std::vector<MoveSite> sweep = enumerate_sites(start, data, structural);
    std::mt19937_64 sweep_rng(splitmix64(trial_seed ^ 0x7377656570ull));
    std::vector<MoveSite> schemas =
        enumerate_sites(start, data, {MoveKind::h1_insert, MoveKind::h2_insert});
    const auto& alpha = data.alpha();
    for (int k = 0; k < 3 && !schemas.empty(); ++k) {
      MoveSite site = schemas[sweep_rng() % schemas.size()];
      site.projection = alpha[sweep_rng() % alpha.size()];
      site.fresh.push_back("q1");
      if (site.kind == MoveKind::h2_insert)
        site.fresh.push_back("q2");
      if (!start.has_letter("q1") && !start.has_letter("q2"))
        sweep.push_back(site);
    }
    for (const MoveSite& site : sweep) {
      Nanophrase after = apply_move(start, data, site);
      TrialChecker single = checker;  // fresh baselines for a one-move check
      auto failure = single.check_step(site, after);
      ++*move_steps;
      ++(*kind_counts)[to_string(site.kind)];
      if (failure) {
        WalkTrace trace;
        trace.seed = trial_seed;
        trace.variant = config.variant;
        trace.steps.push_back({false, site, phrase_hash(after)});
        return counterexample(0, *failure, trace);
      }
    }
  }

  WalkOptions wopts;
  wopts.max_letters = config.walk_cap;
  WalkEngine engine(start, data, config.variant, splitmix64(trial_seed ^ 0x77616c6bull), wopts);

  for (int step = 1; step <= config.steps; ++step) {
    auto site = engine.step();
    if (!site)
      continue;
    ++*move_steps;
    ++(*kind_counts)[to_string(site->kind)];
    auto failure = checker.check_step(*site, engine.phrase());
    if (failure)
      return counterexample(step, *failure, engine.trace());
  }
  return std::nullopt;
}

}  // namespace detail

// Runs the whole campaign; trials are independent and seeded from the master
// seed, so results do not depend on the thread count.
inline FuzzReport run_fuzz(const FuzzConfig& config) {
  FuzzReport report;
  report.trials = config.trials;

  int threads = config.threads;
  if (threads <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    threads = hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
  }
  threads = std::max(1, std::min(threads, config.trials == 0 ? 1 : config.trials));

  struct WorkerResult {
    std::vector<FuzzCounterexample> failures;
    int moves = 0;
    std::map<std::string, int> kind_counts;
  };
  std::vector<std::future<WorkerResult>> futures;
  for (int w = 0; w < threads; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      WorkerResult result;
      for (int trial = w; trial < config.trials; trial += threads) {
        auto ce = detail::run_trial(config, trial, &result.moves, &result.kind_counts);
        if (ce)
          result.failures.push_back(std::move(*ce));
      }
      return result;
    }));
  }
  for (auto& f : futures) {
    WorkerResult result = f.get();
    report.move_steps += result.moves;
    for (const auto& [kind, count] : result.kind_counts)
      report.kind_counts[kind] += count;
    for (auto& ce : result.failures)
      report.failures.push_back(std::move(ce));
  }
  std::sort(report.failures.begin(), report.failures.end(),
            [](const FuzzCounterexample& a, const FuzzCounterexample& b) { return a.trial < b.trial; });
  return report;
}

inline nlohmann::json bundle_to_json(const FuzzCounterexample& ce) {
  return nlohmann::json{{"trial", ce.trial},
                        {"step", ce.step},
                        {"assertion", ce.assertion},
                        {"phrase", ce.phrase_text},
                        {"data", ce.data_name},
                        {"variant", to_string(ce.variant)},
                        {"trial_seed", ce.trial_seed},
                        {"seq_cap", ce.max_seq_len},
                        {"trace", trace_to_json(ce.trace)}};
}

// Replays a persisted counterexample: re-applies the recorded trace to the
// recorded start phrase and re-runs the same assertions step by step.
// Returns the failure it reproduces (normally the recorded one).
inline std::optional<FuzzCounterexample> replay_fuzz_bundle(const nlohmann::json& bundle) {
  Nanophrase p = parse_nanophrase(bundle.at("phrase").get<std::string>());
  WalkVariant variant = walk_variant_from_string(bundle.at("variant").get<std::string>());
  const HomotopyData& data = data_for_variant(variant);
  std::uint64_t trial_seed = bundle.at("trial_seed").get<std::uint64_t>();
  WalkTrace trace = trace_from_json(bundle.at("trace"));
  int seq_cap = bundle.value("seq_cap", 3);

  detail::TrialSequences seqs =
      detail::choose_sequences(trial_seed, p.component_count(), seq_cap);
  TrialChecker checker(data, seqs);
  checker.init(p);

  int step = 0;
  for (const WalkStep& ws : trace.steps) {
    ++step;
    if (ws.noop)
      continue;
    p = apply_move(p, data, ws.site);
    if (phrase_hash(p) != ws.result_hash)
      throw Error("bundle replay diverged from the recorded hashes at step " +
                  std::to_string(step));
    auto failure = checker.check_step(ws.site, p);
    if (failure) {
      FuzzCounterexample ce;
      ce.trial = bundle.at("trial").get<int>();
      ce.step = step;
      ce.assertion = *failure;
      ce.phrase_text = bundle.at("phrase").get<std::string>();
      ce.data_name = data.name();
      ce.variant = variant;
      ce.trial_seed = trial_seed;
      ce.trace = trace;
      return ce;
    }
  }
  return std::nullopt;
}

}  // namespace nanophrase
