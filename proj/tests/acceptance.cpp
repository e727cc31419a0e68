// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bigibbs/analysis.hpp"
#include "bigibbs/cli.hpp"
#include "bigibbs/identities.hpp"
#include "bigibbs/models.hpp"
#include "bigibbs/oracle.hpp"
#include "bigibbs/sampler.hpp"
#include "bigibbs/stats.hpp"

using namespace bigibbs;
namespace fs = std::filesystem;

namespace {

const Window kUnit = Window::unit(2);

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every configuration produced by any criterion, with the model it was drawn from.
struct SupportLedger {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;

  void add(const PotentialModel& m, std::span<const TwoComponentConfiguration> samples) {
    for (const auto& g : samples) {
      ++checked;
      if (!check_disjoint(g) || !hardcore_feasible(m, g)) {
        ++violations;
      }
    }
  }
};

SupportLedger g_support;

std::vector<TwoComponentConfiguration> chain(const PotentialModel& m, std::size_t n,
                                             std::uint64_t thin, std::uint64_t seed) {
  const std::uint64_t burnin = ChainSpec::default_burnin(m, kUnit) * 5;
  auto s = run(ChainSpec{m, kUnit, burnin + n * thin, burnin, thin, {}, seed});
  g_support.add(m, s);
  return s;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double a, double b, double sigma) { return std::fabs(a - b) < kZThreshold * sigma; }

Outcome identity_suite() {
  IdentitySuiteOptions opt;
  const IdentitySuiteResult r = run_identity_suite(opt, RngState(1001));
  std::uint64_t checked = 0, failed = 0, both_zero = 0;
  double worst = 0.0;
  for (const auto& t : r.tallies) {
    checked += t.checked;
    failed += t.failed;
    both_zero += t.both_zero;
    worst = std::max(worst, t.max_scaled_diff);
  }
  std::string missing;
  for (const auto& name : identity_names()) {
    const IdentityTally* t = r.find(name);
    if (t == nullptr || t->checked == 0) {
      missing += " " + name;
    }
  }
  Outcome o;
  o.pass = r.pass() && missing.empty() && both_zero > 0;
  o.detail = fmt("%zu instances, %llu comparisons, %llu failed, %llu both-zero, max scaled log diff %.2e (tolerance %.0e)",
                 opt.instances, static_cast<unsigned long long>(checked),
                 static_cast<unsigned long long>(failed),
                 static_cast<unsigned long long>(both_zero), worst, opt.tolerance);
  if (!missing.empty()) {
    o.detail += "; unchecked:" + missing;
  }
  return o;
}

Outcome free_case() {
  const PotentialModel m = regression_model("free").model;
  const std::uint64_t steps = 100000, burnin = 1000, thin = 10;
  const auto samples = run(ChainSpec{m, kUnit, steps, burnin, thin, {}, 2002});
  g_support.add(m, samples);
  Outcome o{true, ""};
  for (Species s : {Species::plus, Species::minus}) {
    std::vector<double> n, sq;
    for (const auto& g : samples) {
      n.push_back(static_cast<double>(g.of(s).size()));
    }
    const EstimateWithError mean = batch_means(n);
    for (double v : n) {
      sq.push_back((v - mean.estimate) * (v - mean.estimate));
    }
    // Dispersion index var/mean; its error from batch means of the squared deviations.
    const EstimateWithError var = batch_means(sq);
    const double dispersion = var.estimate / mean.estimate;
    const double dispersion_err = std::hypot(var.std_err / mean.estimate,
                                             var.estimate * mean.std_err / (mean.estimate * mean.estimate));
    const bool ok = within(mean.estimate, 1.0, mean.std_err) &&
                    within(dispersion, 1.0, dispersion_err);
    o.pass = o.pass && ok;
    o.detail += fmt("%s mean %.4f+-%.4f dispersion %.4f+-%.4f; ", to_string(s), mean.estimate,
                    mean.std_err, dispersion, dispersion_err);
  }
  const SampleSet set{samples, m, kUnit};
  const auto catalogue = random_eta_catalogue(kUnit, 10, 3, RngState(2003));
  double worst = 0.0;
  for (const auto& e : catalogue) {
    const EstimateWithError k = estimate_correlation(set, e.plus, e.minus);
    const bool ok = std::fabs(k.estimate - 1.0) <= kZThreshold * k.std_err;
    o.pass = o.pass && ok;
    worst = std::max(worst, std::fabs(k.estimate - 1.0));
  }
  o.detail += fmt("%zu samples; k over %zu etas max |k-1| %.1e", samples.size(), catalogue.size(),
                  worst);
  return o;
}

Outcome oracle_cross_validation() {
  const PotentialModel m = regression_model("cross-step").model;
  const double rho = 0.3;
  const std::size_t n = 10000;
  const RejectionBatch exact = rejection_batch(m, kUnit, n, RngState(3001));
  g_support.add(m, exact.samples);
  const auto mcmc = chain(m, n, 100, 3002);

  auto stats = [rho](const std::vector<TwoComponentConfiguration>& s) {
    std::vector<std::vector<double>> v(3);
    for (const auto& g : s) {
      double pairs = 0.0;
      for (const Point& x : g.plus) {
        for (const Point& y : g.minus) {
          pairs += distance_squared(x, y) <= rho * rho ? 1.0 : 0.0;
        }
      }
      v[0].push_back(static_cast<double>(g.plus.size()));
      v[1].push_back(static_cast<double>(g.minus.size()));
      v[2].push_back(pairs);
    }
    return v;
  };
  const auto a = stats(exact.samples);
  const auto b = stats(mcmc);
  const char* names[] = {"plus count", "minus count", "cross pairs"};
  Outcome o{true, ""};
  for (int i = 0; i < 3; ++i) {
    const auto ea = EstimateWithError::from_values(a[i]);
    const auto eb = batch_means(b[i]);
    const double z = z_score(ea, eb);
    o.pass = o.pass && std::fabs(z) < kZThreshold;
    o.detail += fmt("%s %.4f vs %.4f (z %.2f); ", names[i], ea.estimate, eb.estimate, z);
  }
  const PartitionResult zr = partition_function(m, kUnit, SeriesTruncation{6, 100000},
                                                RngState(3003));
  const double err = std::hypot(zr.mc_stderr, exact.acceptance_stderr());
  const double diff = zr.value - exact.acceptance_rate();
  const bool z_ok = std::fabs(diff) < kZThreshold * err + zr.truncation_bound;
  o.pass = o.pass && z_ok;
  o.detail += fmt("Z %.5f+-%.5f vs acceptance %.5f+-%.5f", zr.value, zr.mc_stderr,
                  exact.acceptance_rate(), exact.acceptance_stderr());
  return o;
}

Outcome campbell_mecke() {
  const std::vector<std::string> ids{"one", "indicator-subwindow", "cross-neighbors",
                                     "exp-linear"};
  Outcome o{true, ""};
  std::size_t reports = 0, retried = 0;
  double worst = 0.0;
  std::uint64_t seed = 4000;
  for (const auto& rm : regression_models()) {
    const auto samples = chain(rm.model, 10000, 100, ++seed);
    const SampleSet set{samples, rm.model, kUnit};
    for (const auto& id : ids) {
      const TestFunction point = make_test_function(id, Arity::point_marked, kUnit);
      const TestFunction pair = make_test_function(id, Arity::pair_marked, kUnit);
      const std::vector<std::function<IdentityReport(const RngState&)>> checks{
          [&](const RngState& r) { return verify_cm_plus(set, point, 16, r); },
          [&](const RngState& r) { return verify_cm_minus(set, point, 16, r); },
          [&](const RngState& r) { return verify_cm_full(set, pair, 16, r); }};
      for (const auto& check : checks) {
        const IdentityReport r = with_reseeded_retry(check, RngState(++seed));
        ++reports;
        retried += r.note == "retried" ? 1 : 0;
        worst = std::max(worst, std::fabs(r.z_score));
        if (!r.pass) {
          o.pass = false;
          o.detail += fmt("%s/%s/%s z %.2f %s; ", rm.name.c_str(), id.c_str(), r.identity.c_str(),
                          r.z_score, r.note.c_str());
        }
      }
    }
  }
  o.detail += fmt("%zu reports (3 models x 4 functions x 3 identities), max |z| %.2f, %zu retried",
                  reports, worst, retried);
  return o;
}

Outcome ruelle() {
  const PotentialModel m = regression_model("cross-step").model;
  const auto samples = chain(m, 10000, 100, 5001);
  const SampleSet set{samples, m, kUnit};
  const Window left = default_subwindow(kUnit);
  const TestFunction one = make_test_function("one", Arity::configuration, kUnit);
  const TestFunction count = make_test_function("count-subwindow", Arity::configuration, kUnit);
  const IdentityReport r1 = with_reseeded_retry(
      [&](const RngState& r) { return verify_ruelle(set, {}, left, left, one, 16, r); },
      RngState(5002));
  const IdentityReport rc = with_reseeded_retry(
      [&](const RngState& r) { return verify_ruelle(set, {}, left, left, count, 16, r); },
      RngState(5003));
  Outcome o;
  const bool one_ok = r1.pass && r1.lhs.estimate == 1.0 &&
                      within(r1.rhs.estimate, 1.0, r1.rhs.std_err);
  o.pass = one_ok && rc.pass;
  o.detail = fmt("F=1: lhs %.1f rhs %.4f+-%.4f z %.2f; F=count: lhs %.4f rhs %.4f z %.2f",
                 r1.lhs.estimate, r1.rhs.estimate, r1.rhs.std_err, r1.z_score, rc.lhs.estimate,
                 rc.rhs.estimate, rc.z_score);
  return o;
}

Outcome correlation_consistency() {
  Outcome o{true, ""};
  std::uint64_t compared = 0;
  double worst = 0.0;
  std::size_t bound_checks = 0;
  std::uint64_t seed = 7000;
  for (const auto& rm : regression_models()) {
    const auto samples = chain(rm.model, 2000, 50, ++seed);
    const SampleSet set{samples, rm.model, kUnit};
    const auto catalogue = random_eta_catalogue(kUnit, 10, 3, RngState(++seed));
    for (const auto& e : catalogue) {
      const auto a = marginal_correlation_summands(set, e.plus);
      const auto b = correlation_summands(set, e.plus, {});
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::fabs(a[i] - b[i]);
        worst = std::max(worst, d);
        o.pass = o.pass && d <= 1e-12;
        ++compared;
      }
    }
    const EstimateWithError k0 = estimate_correlation(set, {}, {});
    o.pass = o.pass && k0.estimate == 1.0 && k0.std_err == 0.0;
    const RuelleBoundReport bound = check_ruelle_bound(set, catalogue);
    o.pass = o.pass && bound.pass;
    bound_checks += bound.entries.size();
    if (!bound.pass) {
      o.detail += rm.name + " Ruelle bound failed; ";
    }
  }
  o.detail += fmt("%llu per-sample comparisons, max diff %.1e; k(0,0) = 1; %zu bound checks",
                  static_cast<unsigned long long>(compared), worst, bound_checks);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "bigibbs-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path conf = dir / "model.conf";
  std::ofstream(conf) << "dimension = 2\nseed = 8080\n[window]\nlower = 0, 0\nupper = 1, 1\n"
                         "[intensity]\nz = 0.5\n[potential.cross]\nkind = step\namplitude = 1\n"
                         "range = 0.3\n[sampler]\nsteps = 60000\nburnin = 2000\nthin = 20\n"
                         "chains = 2\n[verify]\nh = cross-neighbors\n";
  std::ostringstream log;
  bool ok = true;
  std::vector<std::string> compared;
  auto run_pair = [&](const std::vector<std::string>& base, const std::string& out,
                      const std::vector<std::string>& files) {
    for (const char* tag : {"a", "b"}) {
      std::vector<std::string> args = base;
      args.insert(args.end(), {"--config", conf.string(), "--out", (dir / (tag + out)).string()});
      const int code = run_command(args, log);
      ok = ok && code == kExitOk;
    }
    for (const auto& suffix : files) {
      const std::string a = slurp(dir / ("a" + out + suffix));
      const std::string b = slurp(dir / ("b" + out + suffix));
      ok = ok && !a.empty() && a == b;
      compared.push_back(out + suffix);
    }
  };
  run_pair({"sample"}, "samples.jsonl", {"", ".stats.json"});
  const std::string samples = (dir / "asamples.jsonl").string();
  run_pair({"verify", "cm-plus", "--samples", samples}, "cm.json", {""});
  run_pair({"verify", "ruelle", "--samples", samples, "--h", "count-subwindow"}, "ruelle.json",
           {""});
  run_pair({"correlate", "--samples", samples, "--eta-plus", "0.5,0.5", "--eta-minus", "0.6,0.5"},
           "k.csv", {"", ".meta.json"});
  run_pair({"oracle", "partition", "--nmax", "4", "--mc-per-term", "20000"}, "z.json", {""});

  const auto loaded = read_jsonl_file(samples);
  g_support.add(regression_model("cross-step").model, loaded);
  fs::remove_all(dir);
  Outcome o;
  o.pass = ok;
  o.detail = fmt("%zu output files byte-identical across repeated runs", compared.size());
  return o;
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "algebraic identity suite", 10.0, identity_suite},
      {2, "free-case reduction", 30.0, free_case},
      {3, "oracle cross-validation", 120.0, oracle_cross_validation},
      {4, "Campbell-Mecke verification", 120.0, campbell_mecke},
      {5, "Ruelle-type identity", 120.0, ruelle},
      {7, "correlation consistency", 0.0, correlation_consistency},
      {8, "determinism", 0.0, determinism},
  };
  bool all = true;
  std::vector<std::string> lines(9);
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string limit;
    if (c.limit_seconds > 0.0) {
      limit = fmt(" (%.1fs, limit %.0fs)", secs, c.limit_seconds);
      o.pass = o.pass && secs < c.limit_seconds;
    } else {
      limit = fmt(" (%.1fs)", secs);
    }
    lines[c.id] = fmt("%s %d %s: ", o.pass ? "PASS" : "FAIL", c.id, c.name) + o.detail + limit;
    all = all && o.pass;
    std::fprintf(stderr, "criterion %d done in %.1fs\n", c.id, secs);
  }
  // Support is checked over every configuration the other criteria produced.
  const bool support_ok = g_support.violations == 0 && g_support.checked > 0;
  lines[6] = fmt("%s 6 support properties: %llu configurations checked, %llu violations",
                 support_ok ? "PASS" : "FAIL", static_cast<unsigned long long>(g_support.checked),
                 static_cast<unsigned long long>(g_support.violations));
  all = all && support_ok;
  for (int i = 1; i <= 8; ++i) {
    std::printf("%s\n", lines[i].c_str());
  }
  return all ? 0 : 1;
}
