#pragma once

// Command-line front end: sample, oracle, verify and correlate.
//
// Exit codes: 0 success, 1 an identity check failed, 2 usage or configuration error.
// Every output embeds (or has a sidecar with) the configuration echo and seed. A run
// manifest with wall-clock timing is written next to the main output.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bigibbs/analysis.hpp"
#include "bigibbs/experiment.hpp"
#include "bigibbs/identities.hpp"
#include "bigibbs/io.hpp"
#include "bigibbs/oracle.hpp"
#include "bigibbs/sampler.hpp"

namespace bigibbs {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitIdentityFailed = 1, kExitUsage = 2 };

// Streams for the command-level random draws, kept apart from chain streams.
inline constexpr std::uint64_t kVerifyStream = 0x7e51;
inline constexpr std::uint64_t kOracleStream = 0x0a11;
inline constexpr std::uint64_t kEtaCatalogueStream = 0xe7a;

namespace detail {

struct CliOptions {
  std::string config_path;
  std::string out;
  std::string samples_path;
  std::string outside_samples_path;
  std::string h;
  std::optional<std::uint64_t> seed, steps, burnin, thin, chains;
  std::optional<std::uint64_t> n_max, mc_per_term, count, sigma_points, draws, instances;
  std::vector<std::string> eta_plus, eta_minus;
};

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgument("cannot open config file " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ExperimentConfig load_config(const CliOptions& o) {
  ExperimentConfig c = parse_config(read_text_file(o.config_path));
  bool changed = false;
  auto set = [&](const std::optional<std::uint64_t>& v, auto& slot) {
    if (v) {
      slot = static_cast<std::remove_reference_t<decltype(slot)>>(*v);
      changed = true;
    }
  };
  set(o.seed, c.seed);
  set(o.steps, c.sampler.steps);
  if (o.burnin) {
    c.sampler.burnin = *o.burnin;
    changed = true;
  }
  set(o.thin, c.sampler.thin);
  set(o.chains, c.sampler.chains);
  if (o.n_max) {
    c.oracle.n_max = static_cast<int>(*o.n_max);
    changed = true;
  }
  set(o.mc_per_term, c.oracle.mc_per_term);
  set(o.count, c.oracle.samples);
  set(o.sigma_points, c.verify.sigma_points);
  set(o.draws, c.verify.ruelle_draws);
  set(o.instances, c.verify.identity_instances);
  if (!o.h.empty()) {
    c.verify.h = o.h;
    changed = true;
  }
  // Overrides go through the same validation as the file.
  return changed ? parse_config(echo_config(c)) : c;
}

inline Json header(const std::string& command, const ExperimentConfig& c) {
  return Json{{"command", command}, {"tool_version", kToolVersion}, {"seed", c.seed},
              {"config", echo_config(c)}};
}

struct Outputs {
  std::vector<std::string> files;
};

inline void write_json(const std::string& path, const Json& j, Outputs& outs) {
  write_file_atomic(path, j.dump(2) + "\n");
  outs.files.push_back(path);
}

inline void write_manifest(const std::string& out, const std::string& command,
                           const ExperimentConfig& c, const Outputs& outs, double seconds,
                           int exit_code) {
  Json m = header(command, c);
  m["wall_clock_seconds"] = seconds;
  m["exit_code"] = exit_code;
  m["outputs"] = outs.files;
  write_file_atomic(out + ".manifest.json", m.dump(2) + "\n");
}

inline Configuration parse_eta(const std::string& text, std::size_t dim) {
  std::vector<Point> pts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (trim(item).empty()) {
      continue;
    }
    std::vector<double> coords;
    std::stringstream cs(item);
    std::string c;
    while (std::getline(cs, c, ',')) {
      const auto v = FieldReader::parse_real(c);
      if (!v || !std::isfinite(*v)) {
        throw InvalidArgument("bad coordinate '" + trim(c) + "' in eta '" + text + "'");
      }
      coords.push_back(*v);
    }
    if (coords.size() != dim) {
      throw InvalidArgument("eta point '" + trim(item) + "' does not have " + std::to_string(dim) +
                            " coordinates");
    }
    pts.emplace_back(std::move(coords));
  }
  try {
    return Configuration(std::move(pts));
  } catch (const DuplicatePoint& e) {
    throw CoincidentPoint(std::string("eta contains a repeated point: ") + e.what());
  }
}

inline std::vector<TwoComponentConfiguration> load_samples(const std::string& path) {
  if (path.empty()) {
    throw InvalidArgument("--samples is required");
  }
  return read_jsonl_file(path);
}

inline int cmd_sample(const CliOptions& o, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig c = load_config(o);
  const ChainSpec spec = c.chain_spec();
  const RunResult result = run_chains(spec, c.sampler.chains);
  Outputs outs;
  {
    std::ostringstream body;
    write_jsonl(body, result.samples);
    write_file_atomic(o.out, body.str());
    outs.files.push_back(o.out);
  }
  Json stats = header("sample", c);
  stats["burnin"] = spec.burnin;
  stats["samples"] = result.samples.size();
  Json per_chain = Json::array();
  for (const auto& s : result.chain_stats) {
    per_chain.push_back(to_json(s));
  }
  stats["chains"] = per_chain;
  stats["total"] = to_json(result.total_stats());
  write_json(o.out + ".stats.json", stats, outs);
  log << "wrote " << result.samples.size() << " samples to " << o.out << "\n";
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(o.out, "sample", c, outs, secs, kExitOk);
  return kExitOk;
}

inline int cmd_oracle(const std::string& sub, const CliOptions& o, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig c = load_config(o);
  const PotentialModel model = c.model();
  const RngState rng(c.seed, kOracleStream);
  const SeriesTruncation t{c.oracle.n_max, c.oracle.mc_per_term};
  Outputs outs;
  Json j = header("oracle " + sub, c);
  j["settings"] = Json{{"nmax", c.oracle.n_max}, {"mc_per_term", c.oracle.mc_per_term}};
  if (sub == "partition") {
    const PartitionResult r = partition_function(model, c.window, t, rng);
    j["result"] = to_json(static_cast<const OracleResult&>(r));
    write_json(o.out, j, outs);
    log << "Z = " << r.value << " +- " << r.mc_stderr << "\n";
  } else if (sub == "correlate") {
    const Configuration ep = parse_eta(o.eta_plus.empty() ? "" : o.eta_plus.front(), c.dimension);
    const Configuration em = parse_eta(o.eta_minus.empty() ? "" : o.eta_minus.front(), c.dimension);
    const OracleResult r = exact_correlation(model, c.window, ep, em, t, rng);
    j["eta_plus"] = to_json(ep);
    j["eta_minus"] = to_json(em);
    j["result"] = to_json(r);
    write_json(o.out, j, outs);
    log << "k = " << r.value << " +- " << r.mc_stderr << "\n";
  } else {
    const RejectionBatch b = rejection_batch(model, c.window, c.oracle.samples, rng);
    std::ostringstream body;
    write_jsonl(body, b.samples);
    write_file_atomic(o.out, body.str());
    outs.files.push_back(o.out);
    j["samples"] = b.samples.size();
    j["attempts"] = b.attempts;
    j["acceptance_rate"] = b.acceptance_rate();
    j["acceptance_stderr"] = b.acceptance_stderr();
    write_json(o.out + ".stats.json", j, outs);
    log << "wrote " << b.samples.size() << " exact samples to " << o.out << "\n";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(o.out, "oracle " + sub, c, outs, secs, kExitOk);
  return kExitOk;
}

inline Json identity_tallies(const IdentitySuiteResult& r, const std::vector<std::string>& names) {
  Json a = Json::array();
  for (const auto& n : names) {
    const IdentityTally* t = r.find(n);
    a.push_back(Json{{"identity", t->name},
                     {"checked", t->checked},
                     {"failed", t->failed},
                     {"both_zero", t->both_zero},
                     {"max_log_diff", t->max_log_diff},
                     {"pass", t->failed == 0 && t->checked > 0}});
  }
  return a;
}

inline int cmd_verify(const std::string& sub, const CliOptions& o, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig c = load_config(o);
  const PotentialModel model = c.model();
  const RngState rng(c.seed, kVerifyStream);
  Outputs outs;
  Json j = header("verify " + sub, c);
  bool pass = true;

  if (sub == "cocycle" || sub == "balance" || sub == "r-product") {
    IdentitySuiteOptions opt;
    opt.instances = c.verify.identity_instances;
    opt.model = model;
    opt.window = c.window;
    const IdentitySuiteResult r = run_identity_suite(opt, rng);
    std::vector<std::string> names;
    if (sub == "cocycle") {
      names = {"cocycle-plus", "cocycle-minus", "r-cocycle"};
    } else if (sub == "balance") {
      names = {"balance", "R-balance", "r-factorization"};
    } else {
      names = {"r-product", "order-independence", "composition"};
    }
    j["report"] = identity_tallies(r, names);
    for (const auto& e : j["report"]) {
      pass = pass && e["pass"].get<bool>();
    }
  } else {
    const auto samples = load_samples(o.samples_path);
    const SampleSet set{samples, model, c.window, c.boundary};
    if (sub == "ruelle-bound") {
      const auto catalogue =
          random_eta_catalogue(c.window, 10, 2, RngState(c.seed, kEtaCatalogueStream));
      const RuelleBoundReport r = check_ruelle_bound(set, catalogue);
      Json entries = Json::array();
      for (const auto& e : r.entries) {
        entries.push_back(Json{{"eta_id", e.eta_id},
                               {"eta_plus", to_json(catalogue[e.eta_id].plus)},
                               {"eta_minus", to_json(catalogue[e.eta_id].minus)},
                               {"k", to_json(e.k)},
                               {"bound", e.bound},
                               {"pass", e.pass}});
      }
      j["report"] = Json{{"entries", entries}, {"pass", r.pass}};
      pass = r.pass;
    } else {
      IdentityReport report;
      const TestFunctionParams params = c.test_params();
      if (sub == "ruelle") {
        std::vector<TwoComponentConfiguration> outside;
        if (!o.outside_samples_path.empty()) {
          outside = read_jsonl_file(o.outside_samples_path);
        }
        const Window sp = c.verify.ruelle_plus.value_or(default_subwindow(c.window));
        const Window sm = c.verify.ruelle_minus.value_or(default_subwindow(c.window));
        const TestFunction f = make_test_function(c.verify.h, Arity::configuration, c.window, params);
        report = with_reseeded_retry(
            [&](const RngState& r) {
              return verify_ruelle(set, outside, sp, sm, f, c.verify.ruelle_draws, r);
            },
            rng);
      } else if (sub == "cm-full") {
        const TestFunction h = make_test_function(c.verify.h, Arity::pair_marked, c.window, params);
        report = with_reseeded_retry(
            [&](const RngState& r) { return verify_cm_full(set, h, c.verify.sigma_points, r); },
            rng);
      } else {
        const Species s = sub == "cm-plus" ? Species::plus : Species::minus;
        const TestFunction h = make_test_function(c.verify.h, Arity::point_marked, c.window, params);
        report = with_reseeded_retry(
            [&](const RngState& r) { return verify_cm(set, s, h, c.verify.sigma_points, r); },
            rng);
      }
      j["h"] = c.verify.h;
      j["report"] = to_json(report);
      pass = report.pass;
      log << report.identity << ": lhs " << report.lhs.estimate << " rhs " << report.rhs.estimate
          << " z " << report.z_score << (report.pass ? " PASS" : " FAIL") << "\n";
    }
  }
  j["pass"] = pass;
  write_json(o.out, j, outs);
  const int code = pass ? kExitOk : kExitIdentityFailed;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(o.out, "verify " + sub, c, outs, secs, code);
  return code;
}

inline int cmd_correlate(const CliOptions& o, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig c = load_config(o);
  const PotentialModel model = c.model();
  const std::size_t n = std::max(o.eta_plus.size(), o.eta_minus.size());
  if (n == 0) {
    throw InvalidArgument("give at least one --eta-plus or --eta-minus");
  }
  std::vector<EtaPair> etas;
  for (std::size_t i = 0; i < n; ++i) {
    etas.push_back({parse_eta(i < o.eta_plus.size() ? o.eta_plus[i] : "", c.dimension),
                    parse_eta(i < o.eta_minus.size() ? o.eta_minus[i] : "", c.dimension)});
  }
  const auto samples = load_samples(o.samples_path);
  const SampleSet set{samples, model, c.window, c.boundary};
  std::ostringstream csv;
  csv.precision(17);
  csv << "eta_id,estimate,std_err,n_samples\n";
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const EstimateWithError e = estimate_correlation(set, etas[i].plus, etas[i].minus);
    csv << i << ',' << e.estimate << ',' << e.std_err << ',' << e.n_samples << '\n';
  }
  Outputs outs;
  write_file_atomic(o.out, csv.str());
  outs.files.push_back(o.out);
  Json meta = header("correlate", c);
  Json list = Json::array();
  for (std::size_t i = 0; i < etas.size(); ++i) {
    list.push_back(Json{{"eta_id", i}, {"eta_plus", to_json(etas[i].plus)},
                        {"eta_minus", to_json(etas[i].minus)}});
  }
  meta["etas"] = list;
  write_json(o.out + ".meta.json", meta, outs);
  log << "wrote " << etas.size() << " correlation estimates to " << o.out << "\n";
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(o.out, "correlate", c, outs, secs, kExitOk);
  return kExitOk;
}

inline void add_common(CLI::App* app, CliOptions& o) {
  app->add_option("--config", o.config_path, "experiment configuration file")->required();
  app->add_option("--out", o.out, "output file")->required();
  app->add_option("--seed", o.seed, "override the configured seed");
}

inline std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) {
    return "ConfigError";
  }
  if (dynamic_cast<const CoincidentPoint*>(&e)) {
    return "CoincidentPoint";
  }
  if (dynamic_cast<const DuplicatePoint*>(&e)) {
    return "DuplicatePoint";
  }
  if (dynamic_cast<const NotNonnegativeModel*>(&e)) {
    return "NotNonnegativeModel";
  }
  if (dynamic_cast<const WrongArity*>(&e)) {
    return "WrongArity";
  }
  if (dynamic_cast<const SubwindowNotContained*>(&e)) {
    return "SubwindowNotContained";
  }
  if (dynamic_cast<const InfeasibleBoundary*>(&e)) {
    return "InfeasibleBoundary";
  }
  if (dynamic_cast<const IdentityViolation*>(&e)) {
    return "IdentityViolation";
  }
  return "Error";
}

} // namespace detail

// Runs one command. Human-readable progress and errors go to `log`.
inline int run_command(const std::vector<std::string>& args, std::ostream& log = std::cerr) {
  CLI::App app{"Two-species Gibbs point process sampler and identity checker", "bigibbs"};
  app.require_subcommand(1);
  // Long form only: "--h" selects the test function.
  app.set_help_flag("--help", "print help");
  app.set_version_flag("--version", kToolVersion);
  detail::CliOptions o;

  auto* sample = app.add_subcommand("sample", "run the birth-death chain and write JSONL samples");
  detail::add_common(sample, o);
  sample->add_option("--steps", o.steps);
  sample->add_option("--burnin", o.burnin);
  sample->add_option("--thin", o.thin);
  sample->add_option("--chains", o.chains);

  auto* oracle = app.add_subcommand("oracle", "exact reference computations");
  oracle->require_subcommand(1);
  std::vector<CLI::App*> oracle_subs;
  for (const char* name : {"partition", "correlate", "sample"}) {
    auto* s = oracle->add_subcommand(name);
    detail::add_common(s, o);
    s->add_option("--nmax", o.n_max);
    s->add_option("--mc-per-term", o.mc_per_term);
    s->add_option("--count", o.count, "number of exact samples");
    s->add_option("--eta-plus", o.eta_plus, "points 'x,y;x,y'");
    s->add_option("--eta-minus", o.eta_minus, "points 'x,y;x,y'");
    oracle_subs.push_back(s);
  }

  auto* verify = app.add_subcommand("verify", "check an identity against samples");
  verify->require_subcommand(1);
  std::vector<CLI::App*> verify_subs;
  for (const char* name : {"cm-plus", "cm-minus", "cm-full", "ruelle", "ruelle-bound", "cocycle",
                           "balance", "r-product"}) {
    auto* s = verify->add_subcommand(name);
    detail::add_common(s, o);
    s->add_option("--samples", o.samples_path, "JSONL samples");
    s->add_option("--outside-samples", o.outside_samples_path, "JSONL samples for the right side");
    s->add_option("--h", o.h, "test function id");
    s->add_option("--sigma-points", o.sigma_points);
    s->add_option("--draws", o.draws);
    s->add_option("--instances", o.instances);
    verify_subs.push_back(s);
  }

  auto* correlate = app.add_subcommand("correlate", "estimate correlation functions from samples");
  detail::add_common(correlate, o);
  correlate->add_option("--samples", o.samples_path)->required();
  correlate->add_option("--eta-plus", o.eta_plus, "points 'x,y;x,y' (repeatable)");
  correlate->add_option("--eta-minus", o.eta_minus, "points 'x,y;x,y' (repeatable)");

  std::vector<const char*> argv;
  argv.push_back("bigibbs");
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    log << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    log << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    log << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*sample) {
      return detail::cmd_sample(o, log);
    }
    for (auto* s : oracle_subs) {
      if (*s) {
        return detail::cmd_oracle(s->get_name(), o, log);
      }
    }
    for (auto* s : verify_subs) {
      if (*s) {
        return detail::cmd_verify(s->get_name(), o, log);
      }
    }
    return detail::cmd_correlate(o, log);
  } catch (const std::exception& e) {
    const std::string kind = detail::error_kind(e);
    log << kind << ": " << e.what() << "\n";
    const int code = kind == "IdentityViolation" ? kExitIdentityFailed : kExitUsage;
    if (!o.out.empty() && o.out.size() > 5 && o.out.substr(o.out.size() - 5) == ".json") {
      try {
        write_file_atomic(o.out, Json{{"error", kind}, {"message", e.what()}}.dump(2) + "\n");
      } catch (const std::exception&) {
        // The error was already reported on the log stream.
      }
    }
    return code;
  }
}

} // namespace bigibbs
