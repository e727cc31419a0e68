#pragma once

// Randomized checks of the exact algebraic identities satisfied by r±, r and R±, R.
// Each identity is compared in the log domain; hard-core zeros must appear on both
// sides together.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bigibbs/config.hpp"
#include "bigibbs/energy.hpp"
#include "bigibbs/intensity.hpp"
#include "bigibbs/random.hpp"

namespace bigibbs {

struct IdentitySuiteOptions {
  std::size_t instances = 500;
  std::size_t max_points = 8;
  std::size_t max_eta = 3;
  double tolerance = kProductTolerance;
  double factor_tolerance = kFactorTolerance;
  // Fixed model; a random step/hardcore/soft-core model per instance when unset.
  std::optional<PotentialModel> model;
  Window window = Window::unit(2);
};

struct IdentityTally {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  // Comparisons where both sides were zero (hard-core).
  std::uint64_t both_zero = 0;
  double max_log_diff = 0.0;
  // Largest |a - b| / max(1, |a|, |b|), the quantity held to the tolerance.
  double max_scaled_diff = 0.0;
};

struct IdentitySuiteResult {
  std::vector<IdentityTally> tallies;

  bool pass() const {
    return std::all_of(tallies.begin(), tallies.end(),
                       [](const IdentityTally& t) { return t.failed == 0 && t.checked > 0; });
  }
  const IdentityTally* find(const std::string& name) const {
    for (const auto& t : tallies) {
      if (t.name == name) {
        return &t;
      }
    }
    return nullptr;
  }
};

inline const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names{
      "cocycle-plus", "cocycle-minus",      "balance",          "r-cocycle",
      "r-factorization", "order-independence", "composition", "R-balance",
      "r-product",    "hardcore-consistency"};
  return names;
}

// Random potential with kind none, step (either sign), hardcore or soft-core; ranges are
// fractions of the shortest window side.
inline PairPotential random_potential(RngState& rng, double scale) {
  switch (rng.below(4)) {
  case 0:
    return PairPotential::none();
  case 1:
    return PairPotential::step(-1.0 + 3.0 * rng.uniform(), scale * (0.05 + 0.45 * rng.uniform()));
  case 2:
    return PairPotential::hardcore(scale * (0.02 + 0.13 * rng.uniform()));
  default:
    return PairPotential::soft_core(0.1 + 1.9 * rng.uniform(), scale * (0.05 + 0.35 * rng.uniform()),
                                    1.0 + 5.0 * rng.uniform());
  }
}

inline PotentialModel random_model(RngState& rng, const Window& w) {
  double scale = w.side(0);
  for (std::size_t i = 1; i < w.dim(); ++i) {
    scale = std::min(scale, w.side(i));
  }
  PotentialModel m{random_potential(rng, scale), random_potential(rng, scale),
                   random_potential(rng, scale), IntensityMeasure(1.0)};
  return m;
}

namespace detail {

inline Configuration random_points(const Window& w, std::size_t n, RngState& rng) {
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(uniform_point(w, rng));
  }
  return Configuration(std::move(pts));
}

struct Instance {
  PotentialModel model;
  TwoComponentConfiguration g;
  Point x1, x2, y1, y2;
  Configuration eta1_plus, eta2_plus, eta1_minus, eta2_minus;
  // Equal-size pair for the r-product decomposition.
  Configuration eq_plus, eq_minus;
};

inline Instance random_instance(const IdentitySuiteOptions& o, RngState& rng) {
  const Window& w = o.window;
  PotentialModel model = o.model ? *o.model : random_model(rng, w);
  TwoComponentConfiguration g{random_points(w, rng.below(o.max_points + 1), rng),
                              random_points(w, rng.below(o.max_points + 1), rng)};
  Point x1 = uniform_point(w, rng), x2 = uniform_point(w, rng);
  Point y1 = uniform_point(w, rng), y2 = uniform_point(w, rng);
  Configuration e1p = random_points(w, rng.below(o.max_eta + 1), rng);
  Configuration e2p = random_points(w, rng.below(o.max_eta + 1), rng);
  Configuration e1m = random_points(w, rng.below(o.max_eta + 1), rng);
  Configuration e2m = random_points(w, rng.below(o.max_eta + 1), rng);
  const std::size_t k = rng.below(o.max_eta + 2);
  Configuration eqp = random_points(w, k, rng);
  Configuration eqm = random_points(w, k, rng);
  return {std::move(model), std::move(g), std::move(x1), std::move(x2), std::move(y1),
          std::move(y2), std::move(e1p), std::move(e2p), std::move(e1m), std::move(e2m),
          std::move(eqp), std::move(eqm)};
}

inline Configuration permuted(const Configuration& c, const std::vector<std::size_t>& order) {
  std::vector<Point> pts;
  pts.reserve(order.size());
  for (std::size_t i : order) {
    pts.push_back(c[i]);
  }
  return Configuration(std::move(pts));
}

// Up to `limit` orderings of c: all of them for small c, random shuffles otherwise.
inline std::vector<Configuration> orderings(const Configuration& c, std::size_t limit,
                                            RngState& rng) {
  std::vector<std::size_t> idx(c.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Configuration> out;
  if (c.size() <= 4) {
    do {
      out.push_back(permuted(c, idx));
    } while (std::next_permutation(idx.begin(), idx.end()) && out.size() < limit);
    return out;
  }
  for (std::size_t k = 0; k < limit; ++k) {
    std::shuffle(idx.begin(), idx.end(), rng);
    out.push_back(permuted(c, idx));
  }
  return out;
}

class Recorder {
public:
  explicit Recorder(const IdentitySuiteOptions& o) : o_(o) {
    for (const auto& n : identity_names()) {
      tallies_.push_back({n});
    }
  }

  void compare(std::size_t id, LogDensity a, LogDensity b, bool factor = false) {
    IdentityTally& t = tallies_[id];
    ++t.checked;
    if (a.is_zero() && b.is_zero()) {
      ++t.both_zero;
      return;
    }
    const double tol = factor ? o_.factor_tolerance : o_.tolerance;
    if (!log_equal(a, b, tol)) {
      ++t.failed;
    }
    const double d = std::fabs(a.log_value() - b.log_value());
    if (!(d <= t.max_log_diff)) {
      t.max_log_diff = std::isnan(d) ? kInf : d;
    }
    if (!a.is_zero() && !b.is_zero()) {
      const double scaled =
          d / std::max({1.0, std::fabs(a.log_value()), std::fabs(b.log_value())});
      t.max_scaled_diff = std::max(t.max_scaled_diff, scaled);
    }
  }

  void expect(std::size_t id, bool ok) {
    ++tallies_[id].checked;
    tallies_[id].failed += ok ? 0 : 1;
  }

  std::vector<IdentityTally> take() { return std::move(tallies_); }

private:
  const IdentitySuiteOptions& o_;
  std::vector<IdentityTally> tallies_;
};

// Whether any pair involving a point of eta is within a hard-core range.
inline bool eta_hits_hardcore(const PotentialModel& m, const TwoComponentConfiguration& g,
                              const Configuration& ep, const Configuration& em) {
  auto bad = [](const PairPotential& p, const Point& a, const Point& b) {
    return !std::isfinite(p(a, b));
  };
  for (std::size_t i = 0; i < ep.size(); ++i) {
    for (std::size_t j = i + 1; j < ep.size(); ++j) {
      if (bad(m.self_plus, ep[i], ep[j])) {
        return true;
      }
    }
    for (const Point& q : g.plus) {
      if (bad(m.self_plus, ep[i], q)) {
        return true;
      }
    }
    for (const Point& q : g.minus) {
      if (bad(m.cross, ep[i], q)) {
        return true;
      }
    }
    for (const Point& q : em) {
      if (bad(m.cross, ep[i], q)) {
        return true;
      }
    }
  }
  for (std::size_t i = 0; i < em.size(); ++i) {
    for (std::size_t j = i + 1; j < em.size(); ++j) {
      if (bad(m.self_minus, em[i], em[j])) {
        return true;
      }
    }
    for (const Point& q : g.minus) {
      if (bad(m.self_minus, em[i], q)) {
        return true;
      }
    }
    for (const Point& q : g.plus) {
      if (bad(m.cross, em[i], q)) {
        return true;
      }
    }
  }
  return false;
}

inline TwoComponentConfiguration add(const TwoComponentConfiguration& g, const Configuration& ep,
                                     const Configuration& em) {
  return {union_disjoint(g.plus, ep), union_disjoint(g.minus, em)};
}

inline void check_instance(const Instance& in, Recorder& rec, RngState& rng) {
  enum : std::size_t {
    kCciPlus, kCciMinus, kBalance, kRCocycle, kRFactor, kOrder, kComposition, kRBalance,
    kRProduct, kHardcore
  };
  const PotentialModel& m = in.model;
  const TwoComponentConfiguration& g = in.g;
  const Configuration none;

  // Partial cocycles: adding two points of one species in either order.
  rec.compare(kCciPlus,
              r_plus(m, g, in.x1) * r_plus(m, with_point(g, Species::plus, in.x1), in.x2),
              r_plus(m, g, in.x2) * r_plus(m, with_point(g, Species::plus, in.x2), in.x1), true);
  rec.compare(kCciMinus,
              r_minus(m, g, in.y1) * r_minus(m, with_point(g, Species::minus, in.y1), in.y2),
              r_minus(m, g, in.y2) * r_minus(m, with_point(g, Species::minus, in.y2), in.y1), true);

  // Balance: x then y versus y then x.
  rec.compare(kBalance, r_full_via_plus(m, g, in.x1, in.y1), r_full_via_minus(m, g, in.x1, in.y1),
              true);

  // r-cocycle over two (x, y) pairs.
  {
    const auto g1 = add(g, Configuration{in.x1}, Configuration{in.y1});
    const auto g2 = add(g, Configuration{in.x2}, Configuration{in.y2});
    rec.compare(kRCocycle,
                r_full_via_plus(m, g, in.x1, in.y1) * r_full_via_plus(m, g1, in.x2, in.y2),
                r_full_via_plus(m, g, in.x2, in.y2) * r_full_via_plus(m, g2, in.x1, in.y1));
  }

  // r against the direct pair energy.
  rec.compare(kRFactor, r_full_via_plus(m, g, in.x1, in.y1),
              log_density_by_pairs(m, g, Configuration{in.x1}, Configuration{in.y1}), true);
  rec.compare(kRFactor, r_full_via_minus(m, g, in.x1, in.y1),
              log_density_by_pairs(m, g, Configuration{in.x1}, Configuration{in.y1}), true);

  // Independence of the telescoping order.
  {
    const LogDensity rp = R_plus(m, g, in.eta1_plus);
    for (const auto& perm : orderings(in.eta1_plus, 24, rng)) {
      rec.compare(kOrder, rp, R_plus(m, g, perm));
    }
    const LogDensity rm = R_minus(m, g, in.eta1_minus);
    for (const auto& perm : orderings(in.eta1_minus, 24, rng)) {
      rec.compare(kOrder, rm, R_minus(m, g, perm));
    }
    const LogDensity rf = R_full_via_plus(m, g, in.eta1_plus, in.eta1_minus);
    const auto pp = orderings(in.eta1_plus, 6, rng);
    const auto pm = orderings(in.eta1_minus, 6, rng);
    for (std::size_t i = 0; i < std::max(pp.size(), pm.size()); ++i) {
      rec.compare(kOrder, rf,
                  R_full_via_plus(m, g, pp[i % pp.size()], pm[i % pm.size()]));
    }
  }

  // Composition over disjoint unions.
  {
    const Configuration up = union_disjoint(in.eta1_plus, in.eta2_plus);
    const Configuration um = union_disjoint(in.eta1_minus, in.eta2_minus);
    rec.compare(kComposition, R_plus(m, g, up),
                R_plus(m, g, in.eta1_plus) *
                    R_plus(m, add(g, in.eta1_plus, none), in.eta2_plus));
    rec.compare(kComposition, R_minus(m, g, um),
                R_minus(m, g, in.eta1_minus) *
                    R_minus(m, add(g, none, in.eta1_minus), in.eta2_minus));
    rec.compare(kComposition, R_full_via_plus(m, g, up, in.eta1_minus),
                R_full_via_plus(m, add(g, in.eta2_plus, none), in.eta1_plus, in.eta1_minus) *
                    R_plus(m, g, in.eta2_plus));
    rec.compare(kComposition, R_full_via_plus(m, g, in.eta1_plus, um),
                R_full_via_plus(m, add(g, none, in.eta2_minus), in.eta1_plus, in.eta1_minus) *
                    R_minus(m, g, in.eta2_minus));
    rec.compare(kComposition, R_full_via_plus(m, g, up, um),
                R_full_via_plus(m, add(g, in.eta2_plus, in.eta2_minus), in.eta1_plus,
                                in.eta1_minus) *
                    R_full_via_plus(m, g, in.eta2_plus, in.eta2_minus));
  }

  // R-balance: both factorization orders of the joint density.
  rec.compare(kRBalance, R_full_via_plus(m, g, in.eta1_plus, in.eta1_minus),
              R_full_via_minus(m, g, in.eta1_plus, in.eta1_minus));
  rec.compare(kRBalance, R_full_via_plus(m, g, in.eta1_plus, in.eta1_minus),
              log_density_by_pairs(m, g, in.eta1_plus, in.eta1_minus));

  // Product of r over paired points.
  rec.compare(kRProduct, R_full_via_plus(m, g, in.eq_plus, in.eq_minus),
              r_product(m, g, in.eq_plus, in.eq_minus));

  // R vanishes exactly when eta meets a hard-core constraint.
  rec.expect(kHardcore, R_full_via_plus(m, g, in.eta1_plus, in.eta1_minus).is_zero() ==
                            eta_hits_hardcore(m, g, in.eta1_plus, in.eta1_minus));
  rec.expect(kHardcore, R_full_via_minus(m, g, in.eq_plus, in.eq_minus).is_zero() ==
                            eta_hits_hardcore(m, g, in.eq_plus, in.eq_minus));
}

} // namespace detail

inline IdentitySuiteResult run_identity_suite(const IdentitySuiteOptions& o, RngState rng) {
  detail::Recorder rec(o);
  for (std::size_t i = 0; i < o.instances; ++i) {
    const detail::Instance in = detail::random_instance(o, rng);
    detail::check_instance(in, rec, rng);
  }
  return {rec.take()};
}

} // namespace bigibbs
