// Command-line front end: compute invariants, expand words, enumerate and
// apply moves, run fuzz campaigns, emit the built-in example phrases.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nanophrase/nanophrase.hpp"

namespace {

using namespace nanophrase;

struct GlobalOptions {
  bool json = false;
  std::string data = "virtual";
  std::uint64_t seed = 0;
};

HomotopyData load_data(const std::string& spec) {
  if (spec == "virtual")
    return builtin_virtual();
  if (spec == "welded")
    return builtin_welded();
  std::ifstream in(spec);
  if (!in)
    throw Error("cannot open homotopy data file '" + spec + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_homotopy_data(buf.str(), spec);
}

// A phrase source is "examples:<name>", "-" for stdin, or a file path.
Nanophrase load_phrase(const std::string& source) {
  if (source.rfind("examples:", 0) == 0)
    return fixture_by_name(source.substr(9));
  std::stringstream buf;
  if (source == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(source);
    if (!in)
      throw Error("cannot open phrase file '" + source + "'");
    buf << in.rdbuf();
  }
  return parse_nanophrase(buf.str());
}

int emit_error(const GlobalOptions& global, const std::string& message) {
  if (global.json)
    std::cout << nlohmann::json{{"error", message}}.dump(2) << '\n';
  std::cerr << "error: " << message << '\n';
  return 1;
}

int cmd_compute(const GlobalOptions& global, const std::string& source,
                const std::string& indices, int forced_q) {
  Nanophrase p = load_phrase(source);
  HomotopyData data = load_data(global.data);
  auto violations = validate(p, data);
  if (!violations.empty())
    throw Error("invalid phrase: " + violations.front().message());
  IndexSequence s = IndexSequence::parse(indices);
  if (!s.pairwise_distinct())
    std::cerr << "warning: indices repeat; the invariance theorem does not apply to "
              << s.str() << '\n';
  MuOptions opts;
  opts.forced_q = forced_q;
  InvariantResult r = compute_invariant(p, s, opts);
  if (global.json) {
    std::cout << invariant_to_json(r).dump(2) << '\n';
  } else {
    std::cout << "mu=" << r.mu << " delta=" << r.delta << " mubar=" << r.mubar.value << " (mod "
              << r.mubar.modulus << ") q_used=" << r.q_used << '\n';
  }
  return 0;
}

int cmd_expand(const GlobalOptions& global, const std::string& source, int i, int q, int bound) {
  Nanophrase p = load_phrase(source);
  if (!validate(p).empty())
    throw Error("invalid phrase: " + validate(p).front().message());
  if (bound < 0)
    bound = std::min(q - 1, 4);  // series past degree 4 are unreadable; ask via --bound
  SignedWord w = signed_component(p, i);
  SignedWord rho = rho_expand(p, i, q);
  EtaWord eta = eta_word(p, rho);
  MagnusSeries series = component_series(p, i, q, bound);
  if (global.json) {
    nlohmann::json jseries = nlohmann::json::object();
    for (const auto& [m, c] : series.terms()) {
      std::string key = "1";
      if (!m.empty()) {
        std::ostringstream k;
        for (std::size_t idx = 0; idx < m.size(); ++idx)
          k << (idx ? " " : "") << "k_" << m[idx];
        key = k.str();
      }
      jseries[key] = c;
    }
    std::cout << nlohmann::json{{"component", i},
                                {"q", q},
                                {"bound", bound},
                                {"w_eps", render_signed_word(w)},
                                {"rho", render_signed_word(rho)},
                                {"eta", render_eta_word(eta)},
                                {"series", jseries}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "w_" << i << "^eps: " << render_signed_word(w) << '\n';
    std::cout << "rho^" << q << ": " << render_signed_word(rho) << '\n';
    std::cout << "eta: " << render_eta_word(eta) << '\n';
    std::cout << "series (bound " << bound << "):\n" << render_series(series);
  }
  return 0;
}

int cmd_moves_list(const GlobalOptions& global, const std::string& source,
                   const std::string& kinds_csv) {
  Nanophrase p = load_phrase(source);
  HomotopyData data = load_data(global.data);
  KindSet kinds = all_move_kinds();
  if (!kinds_csv.empty()) {
    kinds.clear();
    std::istringstream in(kinds_csv);
    std::string tok;
    while (std::getline(in, tok, ','))
      kinds.insert(move_kind_from_string(tok));
  }
  auto sites = enumerate_sites(p, data, kinds);
  if (global.json) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t id = 0; id < sites.size(); ++id) {
      nlohmann::json j = site_to_json(sites[id]);
      j["id"] = id;
      out.push_back(j);
    }
    std::cout << out.dump(2) << '\n';
  } else {
    for (std::size_t id = 0; id < sites.size(); ++id)
      std::cout << id << ": " << describe(sites[id]) << '\n';
  }
  return 0;
}

int cmd_moves_apply(const GlobalOptions& global, const std::string& source, int site_id,
                    const std::string& projection) {
  Nanophrase p = load_phrase(source);
  HomotopyData data = load_data(global.data);
  auto sites = enumerate_sites(p, data, all_move_kinds());
  if (site_id < 0 || site_id >= static_cast<int>(sites.size()))
    throw Error("stale site id " + std::to_string(site_id) + " (" + std::to_string(sites.size()) +
                " sites enumerated)");
  MoveSite site = sites[site_id];
  if (site.kind == MoveKind::h1_insert || site.kind == MoveKind::h2_insert) {
    if (projection.empty())
      throw Error("insert sites need --projection");
    site.projection = Symbol(projection);
    unsigned long counter = 0;
    auto fresh = [&] {
      while (true) {
        std::string name = "w" + std::to_string(++counter);
        if (!p.has_letter(name))
          return name;
      }
    };
    site.fresh.push_back(fresh());
    if (site.kind == MoveKind::h2_insert)
      site.fresh.push_back(fresh());
  }
  Nanophrase q = apply_move(p, data, site);
  if (global.json)
    std::cout << phrase_to_json(q).dump(2) << '\n';
  else
    std::cout << render_nanophrase(q) << '\n';
  return 0;
}

int cmd_moves_walk(const GlobalOptions& global, const std::string& source,
                   const std::string& variant_name, int steps, int cap) {
  Nanophrase p = load_phrase(source);
  WalkVariant variant = walk_variant_from_string(variant_name);
  HomotopyData data = global.data == "virtual" && variant == WalkVariant::welded_m
                          ? builtin_welded()
                          : load_data(global.data);
  WalkOptions opts;
  if (cap > 0)
    opts.max_letters = cap;
  auto [q, trace] = random_walk(p, data, variant, steps, global.seed, opts);
  if (global.json) {
    nlohmann::json j = trace_to_json(trace);
    j["result"] = render_nanophrase(q);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << trace_to_json(trace).dump(2) << '\n';
    std::cout << render_nanophrase(q) << '\n';
  }
  return 0;
}

int cmd_fuzz(const GlobalOptions& global, int trials, int steps, const std::string& variant_name,
             int seq_cap, int cap, int threads, const std::string& out_path,
             const std::string& replay_path) {
  if (!replay_path.empty()) {
    std::ifstream in(replay_path);
    if (!in)
      throw Error("cannot open bundle '" + replay_path + "'");
    nlohmann::json bundle = nlohmann::json::parse(in);
    auto failure = replay_fuzz_bundle(bundle);
    if (failure) {
      std::cout << "reproduced: trial " << failure->trial << " step " << failure->step << ": "
                << failure->assertion << '\n';
      return 1;
    }
    std::cout << "bundle replayed clean: no assertion fails on this trace\n";
    return 0;
  }

  FuzzConfig config;
  config.trials = trials;
  config.steps = steps;
  config.variant = walk_variant_from_string(variant_name);
  config.seed = global.seed;
  config.max_seq_len = seq_cap;
  if (cap > 0)
    config.walk_cap = cap;
  config.threads = threads;
  FuzzReport report = run_fuzz(config);

  if (global.json) {
    nlohmann::json j{{"trials", report.trials},
                     {"move_steps", report.move_steps},
                     {"kinds", report.kind_counts},
                     {"violations", report.failures.size()}};
    if (!report.failures.empty())
      j["first_failure"] = bundle_to_json(report.failures.front());
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "fuzz: " << report.trials << " trials (" << to_string(config.variant) << "), "
              << report.move_steps << " applied moves, " << report.failures.size()
              << " violations\n";
    for (const auto& [kind, count] : report.kind_counts)
      std::cout << "  " << kind << ": " << count << '\n';
  }
  if (!report.failures.empty()) {
    std::ofstream out(out_path);
    out << bundle_to_json(report.failures.front()).dump(2) << '\n';
    std::cerr << "error: invariance violated; counterexample bundle written to " << out_path
              << " (replay with: nanophrase fuzz --replay " << out_path << ")\n";
    return 1;
  }
  return 0;
}

int cmd_examples(const GlobalOptions& global, const std::string& name) {
  Nanophrase p = fixture_by_name(name);
  if (global.json)
    std::cout << phrase_to_json(p).dump(2) << '\n';
  else
    std::cout << render_nanophrase(p) << '\n';
  return 0;
}

int cmd_validate(const GlobalOptions& global, const std::string& source) {
  // reports violations as data; a syntactically broken file still throws
  std::stringstream buf;
  if (source.rfind("examples:", 0) == 0) {
    buf << render_nanophrase(fixture_by_name(source.substr(9)));
  } else if (source == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(source);
    if (!in)
      throw Error("cannot open phrase file '" + source + "'");
    buf << in.rdbuf();
  }
  HomotopyData data = load_data(global.data);
  Nanophrase p = parse_nanophrase(buf.str());
  auto violations = validate(p, data);
  if (global.json) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : violations)
      out.push_back(v.message());
    std::cout << nlohmann::json{{"violations", out}}.dump(2) << '\n';
  } else {
    for (const auto& v : violations)
      std::cout << v.message() << '\n';
    if (violations.empty())
      std::cout << "ok\n";
  }
  return violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nanophrase move calculus and invariants"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOptions global;
  app.add_flag("--json", global.json, "machine-readable output");
  app.add_option("--data", global.data, "homotopy data: virtual, welded, or a file path");
  app.add_option("--seed", global.seed, "random seed");

  std::string source, indices, kinds_csv, projection, variant = "M";
  std::string fixture_name, out_path = "fuzz-counterexample.json", replay_path;
  int forced_q = 0, component = 1, q = 3, bound = -1, site_id = -1;
  int steps = 20, trials = 100, seq_cap = 3, cap = 0, threads = 0;

  auto* compute = app.add_subcommand("compute", "mu, delta and mu-bar for an index sequence");
  compute->add_option("phrase", source, "phrase file, '-', or examples:<name>")->required();
  compute->add_option("--indices", indices, "comma-separated indices, target last")->required();
  compute->add_option("--q", forced_q, "force the expansion stage (0 = stabilization policy)");

  auto* expand = app.add_subcommand("expand", "signed component, expanding word, eta image, series");
  expand->add_option("phrase", source)->required();
  expand->add_option("-i,--component", component, "component index")->required();
  expand->add_option("-q,--stage", q, "expansion stage (>= 2)");
  expand->add_option("--bound", bound, "series degree bound (default q-1)");

  auto* moves = app.add_subcommand("moves", "enumerate and apply rewriting moves");
  moves->require_subcommand(1);
  auto* mlist = moves->add_subcommand("list", "enumerate applicable sites");
  mlist->add_option("phrase", source)->required();
  mlist->add_option("--kinds", kinds_csv, "comma-separated move kinds");
  auto* mapply = moves->add_subcommand("apply", "apply a site by id");
  mapply->add_option("phrase", source)->required();
  mapply->add_option("--site", site_id, "site id from 'moves list'")->required();
  mapply->add_option("--projection", projection, "projection for insert sites");
  auto* mwalk = moves->add_subcommand("walk", "seeded random walk");
  mwalk->add_option("phrase", source)->required();
  mwalk->add_option("--steps", steps, "number of steps");
  mwalk->add_option("--variant", variant, "open_M, M or welded_M");
  mwalk->add_option("--cap", cap, "letter-count growth cap");

  auto* fuzz = app.add_subcommand("fuzz", "randomized move-invariance campaign");
  fuzz->add_option("--trials", trials, "number of trials");
  fuzz->add_option("--steps", steps, "walk steps per trial");
  fuzz->add_option("--variant", variant, "open_M, M or welded_M");
  fuzz->add_option("--seq-cap", seq_cap, "max index-sequence length");
  fuzz->add_option("--cap", cap, "letter-count growth cap");
  fuzz->add_option("--threads", threads, "worker threads (0 = auto)");
  fuzz->add_option("--out", out_path, "counterexample bundle path");
  fuzz->add_option("--replay", replay_path, "replay a counterexample bundle");

  auto* examples = app.add_subcommand("examples", "emit a built-in example phrase");
  examples->add_option("name", fixture_name, "ex32, borromean, torus:n, vlink:n, ex4, ex5")
      ->required();

  auto* validate_cmd = app.add_subcommand("validate", "check a phrase against the data");
  validate_cmd->add_option("phrase", source)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits 0, every parse failure is a usage error
  }

  try {
    if (compute->parsed())
      return cmd_compute(global, source, indices, forced_q);
    if (expand->parsed())
      return cmd_expand(global, source, component, q, bound);
    if (moves->parsed()) {
      if (mlist->parsed())
        return cmd_moves_list(global, source, kinds_csv);
      if (mapply->parsed())
        return cmd_moves_apply(global, source, site_id, projection);
      if (mwalk->parsed())
        return cmd_moves_walk(global, source, variant, steps, cap);
    }
    if (fuzz->parsed())
      return cmd_fuzz(global, trials, steps, variant, seq_cap, cap, threads, out_path,
                      replay_path);
    if (examples->parsed())
      return cmd_examples(global, fixture_name);
    if (validate_cmd->parsed())
      return cmd_validate(global, source);
  } catch (const Error& e) {
    return emit_error(global, e.what());
  } catch (const std::exception& e) {
    return emit_error(global, e.what());
  }
  return 2;
}
