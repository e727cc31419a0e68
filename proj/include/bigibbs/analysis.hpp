#pragma once

// Monte Carlo checks of the integral identities that define a two-species Gibbs law,
// and correlation-function estimators built on samples of that law.
//
// Every check returns an IdentityReport comparing two sample means. The sigma-integrals
// on the right-hand sides use fresh importance draws per sample, with the draws for
// sample i taken from its own stream so reports are reproducible under any threading.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bigibbs/config.hpp"
#include "bigibbs/energy.hpp"
#include "bigibbs/error.hpp"
#include "bigibbs/intensity.hpp"
#include "bigibbs/parallel.hpp"
#include "bigibbs/random.hpp"
#include "bigibbs/stats.hpp"

namespace bigibbs {

inline constexpr std::uint64_t kAnalysisStreamBase = std::uint64_t{3} << 40;

enum class Arity { point_marked, pair_marked, configuration };

inline const char* to_string(Arity a) {
  switch (a) {
  case Arity::point_marked:
    return "point-marked";
  case Arity::pair_marked:
    return "pair-marked";
  case Arity::configuration:
    return "configuration";
  }
  return "?";
}

// Nonnegative test function from the fixed catalogue. Exactly one of the callables is
// set, matching arity(). Point-marked functions also receive the species of the marked
// point.
class TestFunction {
public:
  using PointFn = std::function<double(const TwoComponentConfiguration&, Species, const Point&)>;
  using PairFn =
      std::function<double(const TwoComponentConfiguration&, const Point&, const Point&)>;
  using ConfigFn = std::function<double(const TwoComponentConfiguration&)>;

  TestFunction(std::string id, PointFn f) : id_(std::move(id)), arity_(Arity::point_marked), point_(std::move(f)) {}
  TestFunction(std::string id, PairFn f) : id_(std::move(id)), arity_(Arity::pair_marked), pair_(std::move(f)) {}
  TestFunction(std::string id, ConfigFn f) : id_(std::move(id)), arity_(Arity::configuration), config_(std::move(f)) {}

  const std::string& id() const noexcept { return id_; }
  Arity arity() const noexcept { return arity_; }

  double operator()(const TwoComponentConfiguration& g, Species s, const Point& x) const {
    require(Arity::point_marked);
    return point_(g, s, x);
  }
  double operator()(const TwoComponentConfiguration& g, const Point& x, const Point& y) const {
    require(Arity::pair_marked);
    return pair_(g, x, y);
  }
  double operator()(const TwoComponentConfiguration& g) const {
    require(Arity::configuration);
    return config_(g);
  }

  void require(Arity a) const {
    if (a != arity_) {
      throw WrongArity("test function '" + id_ + "' is " + to_string(arity_) + ", need " +
                       to_string(a));
    }
  }

private:
  std::string id_;
  Arity arity_;
  PointFn point_;
  PairFn pair_;
  ConfigFn config_;
};

struct TestFunctionParams {
  // Defaults to the half of the window with x_1 below its midpoint.
  std::optional<Window> subwindow;
  // Interaction radius of the cross-neighbour kernels.
  double radius = 0.2;
  // Coefficient of the exponential of the linear statistic sum of x_1 coordinates.
  double slope = 0.5;
};

inline Window default_subwindow(const Window& w) {
  std::vector<double> upper = w.upper();
  upper[0] = 0.5 * (w.lower()[0] + w.upper()[0]);
  return Window(w.lower(), std::move(upper));
}

inline const std::vector<std::string>& test_function_ids() {
  static const std::vector<std::string> ids{"one", "indicator-subwindow", "cross-neighbors",
                                            "exp-linear", "count-subwindow"};
  return ids;
}

namespace detail {

inline double linear_statistic(const TwoComponentConfiguration& g) {
  double s = 0.0;
  for (const Point& p : g.plus) {
    s += p[0];
  }
  for (const Point& p : g.minus) {
    s += p[0];
  }
  return s;
}

inline std::size_t count_in(const Configuration& c, const Window& w) {
  std::size_t n = 0;
  for (const Point& p : c) {
    n += w.contains(p) ? 1 : 0;
  }
  return n;
}

} // namespace detail

// Catalogue:
//   one                  h = 1 (all arities)
//   indicator-subwindow  point: 1{x in W'}; pair: 1{x in W'} 1{y in W'}
//   cross-neighbors      point: #{opposite-species points within radius of x};
//                        pair: 1{|x - y| <= radius}
//   exp-linear           exp(-slope * sum of x_1 over all points) (all arities)
//   count-subwindow      configuration: |gamma+ ∩ W'|
inline TestFunction make_test_function(const std::string& id, Arity arity, const Window& window,
                                       const TestFunctionParams& params = {}) {
  const Window sub = params.subwindow.value_or(default_subwindow(window));
  const double radius2 = params.radius * params.radius;
  const double slope = params.slope;
  auto unsupported = [&]() -> TestFunction {
    throw WrongArity("test function '" + id + "' has no " + to_string(arity) + " form");
  };
  if (id == "one") {
    switch (arity) {
    case Arity::point_marked:
      return {id, TestFunction::PointFn([](auto&, Species, auto&) { return 1.0; })};
    case Arity::pair_marked:
      return {id, TestFunction::PairFn([](auto&, auto&, auto&) { return 1.0; })};
    case Arity::configuration:
      return {id, TestFunction::ConfigFn([](auto&) { return 1.0; })};
    }
  }
  if (id == "indicator-subwindow") {
    if (arity == Arity::point_marked) {
      return {id, TestFunction::PointFn([sub](auto&, Species, const Point& x) {
                return sub.contains(x) ? 1.0 : 0.0;
              })};
    }
    if (arity == Arity::pair_marked) {
      return {id, TestFunction::PairFn([sub](auto&, const Point& x, const Point& y) {
                return sub.contains(x) && sub.contains(y) ? 1.0 : 0.0;
              })};
    }
    return unsupported();
  }
  if (id == "cross-neighbors") {
    if (arity == Arity::point_marked) {
      return {id, TestFunction::PointFn(
                      [radius2](const TwoComponentConfiguration& g, Species s, const Point& x) {
                        double n = 0.0;
                        for (const Point& y : g.of(other(s))) {
                          n += distance_squared(x, y) <= radius2 ? 1.0 : 0.0;
                        }
                        return n;
                      })};
    }
    if (arity == Arity::pair_marked) {
      return {id, TestFunction::PairFn([radius2](auto&, const Point& x, const Point& y) {
                return distance_squared(x, y) <= radius2 ? 1.0 : 0.0;
              })};
    }
    return unsupported();
  }
  if (id == "exp-linear") {
    auto f = [slope](const TwoComponentConfiguration& g) {
      return std::exp(-slope * detail::linear_statistic(g));
    };
    switch (arity) {
    case Arity::point_marked:
      return {id, TestFunction::PointFn(
                      [f](const TwoComponentConfiguration& g, Species, auto&) { return f(g); })};
    case Arity::pair_marked:
      return {id, TestFunction::PairFn(
                      [f](const TwoComponentConfiguration& g, auto&, auto&) { return f(g); })};
    case Arity::configuration:
      return {id, TestFunction::ConfigFn(f)};
    }
  }
  if (id == "count-subwindow") {
    if (arity == Arity::configuration) {
      return {id, TestFunction::ConfigFn([sub](const TwoComponentConfiguration& g) {
                return static_cast<double>(detail::count_in(g.plus, sub));
              })};
    }
    return unsupported();
  }
  throw InvalidArgument("unknown test function '" + id + "'");
}

// Samples together with the law they were drawn from.
struct SampleSet {
  std::span<const TwoComponentConfiguration> samples;
  const PotentialModel& model;
  Window window;
  // Frozen configuration outside the window (empty for free boundary).
  TwoComponentConfiguration boundary = {};
};

namespace detail {

inline RngState sample_stream(const RngState& rng, std::size_t i) {
  return rng.fork(kAnalysisStreamBase + rng.stream() * (std::uint64_t{1} << 32) + i);
}

inline TwoComponentConfiguration with_boundary(const TwoComponentConfiguration& g,
                                               const TwoComponentConfiguration& boundary) {
  if (boundary.plus.empty() && boundary.minus.empty()) {
    return g;
  }
  return {union_disjoint(g.plus, boundary.plus), union_disjoint(g.minus, boundary.minus)};
}

// sigma-point in the window avoiding every point of g.
inline SigmaPoint fresh_sigma_point(const IntensityMeasure& m, const Window& w,
                                    const TwoComponentConfiguration& g, RngState& rng) {
  while (true) {
    SigmaPoint sp = draw_sigma_point(m, w, rng);
    if (!g.plus.contains(sp.point) && !g.minus.contains(sp.point)) {
      return sp;
    }
  }
}

inline const char* cm_name(Species s) { return s == Species::plus ? "cm-plus" : "cm-minus"; }

} // namespace detail

// Partial Campbell-Mecke identity for species s:
//   E sum_{x in gamma_s} h(gamma, x) = E ∫ h(gamma ∪_s x, x) r_s(gamma, x) dsigma(x).
inline IdentityReport verify_cm(const SampleSet& set, Species s, const TestFunction& h,
                                std::size_t n_sigma_points, const RngState& rng) {
  h.require(Arity::point_marked);
  if (n_sigma_points == 0) {
    throw InvalidArgument("need at least one sigma point per sample");
  }
  const std::size_t n = set.samples.size();
  std::vector<double> lhs(n), rhs(n);
  parallel_for(n, [&](std::size_t i) {
    const TwoComponentConfiguration& g = set.samples[i];
    const TwoComponentConfiguration full = detail::with_boundary(g, set.boundary);
    RngState local = detail::sample_stream(rng, i);
    double l = 0.0;
    for (const Point& x : g.of(s)) {
      l += h(g, s, x);
    }
    double r = 0.0;
    for (std::size_t k = 0; k < n_sigma_points; ++k) {
      const SigmaPoint sp = detail::fresh_sigma_point(set.model.intensity, set.window, full, local);
      const LogDensity dens = r_species(set.model, full, s, sp.point);
      if (dens.is_zero()) {
        continue;
      }
      r += sp.weight * h(with_point(g, s, sp.point), s, sp.point) * dens.value();
    }
    lhs[i] = l;
    rhs[i] = r / static_cast<double>(n_sigma_points);
  });
  return make_report(detail::cm_name(s), EstimateWithError::from_values(lhs),
                     EstimateWithError::from_values(rhs));
}

inline IdentityReport verify_cm_plus(const SampleSet& set, const TestFunction& h,
                                     std::size_t n_sigma_points, const RngState& rng) {
  return verify_cm(set, Species::plus, h, n_sigma_points, rng);
}

inline IdentityReport verify_cm_minus(const SampleSet& set, const TestFunction& h,
                                      std::size_t n_sigma_points, const RngState& rng) {
  return verify_cm(set, Species::minus, h, n_sigma_points, rng);
}

// Joint Campbell-Mecke identity:
//   E sum_{x in gamma+} sum_{y in gamma-} h = E ∫∫ h(gamma+ ∪ x, gamma- ∪ y, x, y) r dsigma dsigma.
inline IdentityReport verify_cm_full(const SampleSet& set, const TestFunction& h,
                                     std::size_t n_sigma_points, const RngState& rng) {
  h.require(Arity::pair_marked);
  if (n_sigma_points == 0) {
    throw InvalidArgument("need at least one sigma point per sample");
  }
  const std::size_t n = set.samples.size();
  std::vector<double> lhs(n), rhs(n);
  parallel_for(n, [&](std::size_t i) {
    const TwoComponentConfiguration& g = set.samples[i];
    const TwoComponentConfiguration full = detail::with_boundary(g, set.boundary);
    RngState local = detail::sample_stream(rng, i);
    double l = 0.0;
    for (const Point& x : g.plus) {
      for (const Point& y : g.minus) {
        l += h(g, x, y);
      }
    }
    double r = 0.0;
    for (std::size_t k = 0; k < n_sigma_points; ++k) {
      const SigmaPoint sx = detail::fresh_sigma_point(set.model.intensity, set.window, full, local);
      SigmaPoint sy = detail::fresh_sigma_point(set.model.intensity, set.window, full, local);
      if (sx.point == sy.point) {
        --k;
        continue;
      }
      const LogDensity dens = r_full(set.model, full, sx.point, sy.point);
      if (dens.is_zero()) {
        continue;
      }
      const TwoComponentConfiguration shifted{union_disjoint(g.plus, sx.point),
                                              union_disjoint(g.minus, sy.point)};
      r += sx.weight * sy.weight * h(shifted, sx.point, sy.point) * dens.value();
    }
    lhs[i] = l;
    rhs[i] = r / static_cast<double>(n_sigma_points);
  });
  return make_report("cm-full", EstimateWithError::from_values(lhs),
                     EstimateWithError::from_values(rhs));
}

// Ruelle-type decomposition over subwindows sub_plus, sub_minus of the window:
//   E F(gamma) = E[ 1{gamma+ ∩ sub_plus = ∅, gamma- ∩ sub_minus = ∅}
//                   ∫∫ F(gamma ∪ eta) R(gamma, eta+, eta-) dlambda(eta+) dlambda(eta-) ],
// with eta± drawn from the Poisson law on sub± and weighted by e^{sigma(sub+) + sigma(sub-)}.
// The right side averages over `outside` samples (the main samples when empty).
inline IdentityReport verify_ruelle(const SampleSet& set,
                                    std::span<const TwoComponentConfiguration> outside,
                                    const Window& sub_plus, const Window& sub_minus,
                                    const TestFunction& f, std::size_t n_draws,
                                    const RngState& rng) {
  f.require(Arity::configuration);
  if (!set.window.contains(sub_plus) || !set.window.contains(sub_minus)) {
    throw SubwindowNotContained("Ruelle subwindows must lie inside the sampling window");
  }
  if (n_draws == 0) {
    throw InvalidArgument("need at least one Lebesgue-Poisson draw per sample");
  }
  if (outside.empty()) {
    outside = set.samples;
  }
  std::vector<double> lhs(set.samples.size());
  for (std::size_t i = 0; i < set.samples.size(); ++i) {
    lhs[i] = f(set.samples[i]);
  }
  const double log_lambda_mass =
      mass(set.model.intensity, sub_plus) + mass(set.model.intensity, sub_minus);
  std::vector<double> rhs(outside.size());
  parallel_for(outside.size(), [&](std::size_t i) {
    const TwoComponentConfiguration& g = outside[i];
    if (detail::count_in(g.plus, sub_plus) != 0 || detail::count_in(g.minus, sub_minus) != 0) {
      rhs[i] = 0.0;
      return;
    }
    const TwoComponentConfiguration full = detail::with_boundary(g, set.boundary);
    RngState local = detail::sample_stream(rng, i);
    double acc = 0.0;
    for (std::size_t d = 0; d < n_draws; ++d) {
      const Configuration eta_plus = sample_poisson(set.model.intensity, sub_plus, local);
      const Configuration eta_minus = sample_poisson(set.model.intensity, sub_minus, local);
      TwoComponentConfiguration joined;
      try {
        joined = {union_disjoint(g.plus, eta_plus), union_disjoint(g.minus, eta_minus)};
        if (!check_disjoint(joined)) {
          throw DuplicatePoint("cross coincidence");
        }
      } catch (const DuplicatePoint&) {
        --d; // probability zero: redraw
        continue;
      }
      const LogDensity dens = R_full(set.model, full, eta_plus, eta_minus, Postcondition::skip);
      if (dens.is_zero()) {
        continue;
      }
      acc += f(joined) * std::exp(dens.log_value() + log_lambda_mass);
    }
    rhs[i] = acc / static_cast<double>(n_draws);
  });
  return make_report("ruelle", EstimateWithError::from_values(lhs),
                     EstimateWithError::from_values(rhs));
}

// Per-sample summands R(gamma, eta+, eta-) of the correlation estimator.
inline std::vector<double> correlation_summands(const SampleSet& set,
                                                const Configuration& eta_plus,
                                                const Configuration& eta_minus) {
  for (const Point& p : eta_plus) {
    if (eta_minus.contains(p)) {
      throw CoincidentPoint("point " + p.str() + " appears in both eta+ and eta-");
    }
  }
  std::vector<double> v(set.samples.size());
  parallel_for(v.size(), [&](std::size_t i) {
    const TwoComponentConfiguration full = detail::with_boundary(set.samples[i], set.boundary);
    v[i] = R_full(set.model, full, eta_plus, eta_minus, Postcondition::skip).value();
  });
  return v;
}

// Per-sample summands R+(gamma, eta+) of the marginal correlation estimator.
inline std::vector<double> marginal_correlation_summands(const SampleSet& set,
                                                         const Configuration& eta_plus) {
  std::vector<double> v(set.samples.size());
  parallel_for(v.size(), [&](std::size_t i) {
    const TwoComponentConfiguration full = detail::with_boundary(set.samples[i], set.boundary);
    v[i] = R_plus(set.model, full, eta_plus).value();
  });
  return v;
}

// k(eta+, eta-) = E R(gamma, eta+, eta-); k(∅, ∅) = 1 with zero error.
inline EstimateWithError estimate_correlation(const SampleSet& set, const Configuration& eta_plus,
                                              const Configuration& eta_minus) {
  if (eta_plus.empty() && eta_minus.empty()) {
    return {1.0, 0.0, set.samples.size()};
  }
  const auto v = correlation_summands(set, eta_plus, eta_minus);
  return EstimateWithError::from_values(v);
}

// k+(eta+) = E R+(gamma, eta+).
inline EstimateWithError estimate_marginal_correlation(const SampleSet& set,
                                                       const Configuration& eta_plus) {
  if (eta_plus.empty()) {
    return {1.0, 0.0, set.samples.size()};
  }
  const auto v = marginal_correlation_summands(set, eta_plus);
  return EstimateWithError::from_values(v);
}

struct EtaPair {
  Configuration plus;
  Configuration minus;
};

// `count` eta pairs in the window with 0..max_points points per species, the first
// always (∅, ∅).
inline std::vector<EtaPair> random_eta_catalogue(const Window& w, std::size_t count,
                                                 std::size_t max_points, RngState rng) {
  std::vector<EtaPair> out;
  if (count == 0) {
    return out;
  }
  out.push_back({});
  while (out.size() < count) {
    EtaPair e;
    const std::size_t np = rng.below(max_points + 1);
    const std::size_t nm = rng.below(max_points + 1);
    std::vector<Point> pp, pm;
    for (std::size_t i = 0; i < np; ++i) {
      pp.push_back(uniform_point(w, rng));
    }
    for (std::size_t i = 0; i < nm; ++i) {
      pm.push_back(uniform_point(w, rng));
    }
    e.plus = Configuration(std::move(pp));
    e.minus = Configuration(std::move(pm));
    out.push_back(std::move(e));
  }
  return out;
}

struct RuelleBoundEntry {
  std::size_t eta_id = 0;
  EstimateWithError k;
  double bound = 0.0;
  bool pass = false;
};

struct RuelleBoundReport {
  std::vector<RuelleBoundEntry> entries;
  bool pass = true;
};

// k(eta+, eta-) <= e^{sigma(W)} e^{sigma(W)} (+ 3 stderr) for every catalogue entry;
// the constant-1 local bound holds for nonnegative potentials.
inline RuelleBoundReport check_ruelle_bound(const SampleSet& set,
                                            std::span<const EtaPair> catalogue) {
  if (!set.model.nonnegative()) {
    throw NotNonnegativeModel("Ruelle bound check needs a nonnegative model");
  }
  const double s = mass(set.model.intensity, set.window);
  const double bound = std::exp(2.0 * s);
  RuelleBoundReport out;
  for (std::size_t i = 0; i < catalogue.size(); ++i) {
    RuelleBoundEntry e;
    e.eta_id = i;
    e.k = estimate_correlation(set, catalogue[i].plus, catalogue[i].minus);
    e.bound = bound;
    e.pass = e.k.estimate <= bound + kZThreshold * e.k.std_err;
    out.pass = out.pass && e.pass;
    out.entries.push_back(std::move(e));
  }
  return out;
}

// Runs check(rng); on a non-degenerate failure reruns once on a fresh stream and
// returns the second report with a note.
template <typename Check>
IdentityReport with_reseeded_retry(Check&& check, const RngState& rng) {
  IdentityReport first = check(rng);
  if (first.pass || !first.note.empty()) {
    return first;
  }
  IdentityReport second = check(rng.fork(rng.stream() + (std::uint64_t{1} << 20)));
  second.note = "retried";
  return second;
}

} // namespace bigibbs
