#pragma once

// Pair-potential models and the two-species density calculus: the partial relative
// energy densities r+/r-, the joint density r, and their telescoped products R+/R-/R.
// Everything is carried in the log domain; -inf encodes a hard-core zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bigibbs/config.hpp"
#include "bigibbs/error.hpp"
#include "bigibbs/intensity.hpp"

namespace bigibbs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Isotropic symmetric pair potential; the value depends on |x - y| only.
class PairPotential {
public:
  enum class Kind { none, step, hardcore, soft_core_power };

  PairPotential() = default;

  static PairPotential none() { return PairPotential(); }

  // a * 1{|x-y| <= range}; a may be +inf.
  static PairPotential step(double amplitude, double range) {
    return PairPotential(Kind::step, amplitude, range, 0.0);
  }

  // +inf * 1{|x-y| <= range}.
  static PairPotential hardcore(double range) {
    return PairPotential(Kind::hardcore, kInf, range, 0.0);
  }

  // a * (range/|x-y|)^exponent for |x-y| <= range, 0 beyond.
  static PairPotential soft_core(double amplitude, double range, double exponent) {
    return PairPotential(Kind::soft_core_power, amplitude, range, exponent);
  }

  Kind kind() const noexcept { return kind_; }
  double amplitude() const noexcept { return amplitude_; }
  double range() const noexcept { return range_; }
  double exponent() const noexcept { return exponent_; }

  bool nonnegative() const noexcept { return kind_ == Kind::none || amplitude_ >= 0.0; }

  // Interaction range; 0 for the free potential.
  double reach() const noexcept { return kind_ == Kind::none ? 0.0 : range_; }

  double value_at_squared_distance(double d2) const {
    if (kind_ == Kind::none || d2 > range_ * range_) {
      return 0.0;
    }
    switch (kind_) {
    case Kind::step:
      return amplitude_;
    case Kind::hardcore:
      return kInf;
    case Kind::soft_core_power:
      return amplitude_ * std::pow(range_ * range_ / d2, 0.5 * exponent_);
    case Kind::none:
      break;
    }
    return 0.0;
  }

  double operator()(const Point& x, const Point& y) const {
    return value_at_squared_distance(distance_squared(x, y));
  }

  friend bool operator==(const PairPotential&, const PairPotential&) = default;

private:
  PairPotential(Kind kind, double amplitude, double range, double exponent)
      : kind_(kind), amplitude_(amplitude), range_(range), exponent_(exponent) {
    if (!(range_ > 0.0) || !std::isfinite(range_)) {
      throw InvalidArgument("potential range must be positive and finite");
    }
    if (std::isnan(amplitude_) || amplitude_ == -kInf) {
      throw InvalidArgument("potential amplitude must be a real number or +inf");
    }
    if (kind_ == Kind::soft_core_power) {
      if (!std::isfinite(amplitude_)) {
        throw InvalidArgument("soft-core amplitude must be finite");
      }
      if (!(exponent_ > 0.0) || !std::isfinite(exponent_)) {
        throw InvalidArgument("soft-core exponent must be positive");
      }
    }
  }

  Kind kind_ = Kind::none;
  double amplitude_ = 0.0;
  double range_ = 1.0;
  double exponent_ = 0.0;
};

inline const char* to_string(PairPotential::Kind k) {
  switch (k) {
  case PairPotential::Kind::none:
    return "none";
  case PairPotential::Kind::step:
    return "step";
  case PairPotential::Kind::hardcore:
    return "hardcore";
  case PairPotential::Kind::soft_core_power:
    return "soft-core-power";
  }
  return "none";
}

// Cross potential phi between species, self potentials phi+/phi-, and sigma.
struct PotentialModel {
  PairPotential cross;
  PairPotential self_plus;
  PairPotential self_minus;
  IntensityMeasure intensity;

  const PairPotential& self(Species s) const {
    return s == Species::plus ? self_plus : self_minus;
  }

  // Every amplitude >= 0, so exp(-U) <= 1 and rejection from the Poisson law is exact.
  bool nonnegative() const {
    return cross.nonnegative() && self_plus.nonnegative() && self_minus.nonnegative();
  }

  // Same model with the two species relabelled.
  PotentialModel swapped() const { return {cross, self_minus, self_plus, intensity}; }
};

class LogDensity {
public:
  constexpr LogDensity() = default;
  constexpr explicit LogDensity(double log_value) : log_value_(log_value) {}

  static constexpr LogDensity one() { return LogDensity(0.0); }
  static constexpr LogDensity zero() { return LogDensity(-kInf); }

  constexpr double log_value() const noexcept { return log_value_; }
  double value() const { return std::exp(log_value_); }
  constexpr bool is_zero() const noexcept { return log_value_ == -kInf; }

  // Product of densities.
  friend constexpr LogDensity operator*(LogDensity a, LogDensity b) {
    return LogDensity(a.log_value_ + b.log_value_);
  }
  LogDensity& operator*=(LogDensity b) {
    log_value_ += b.log_value_;
    return *this;
  }

  friend constexpr bool operator==(LogDensity, LogDensity) = default;

private:
  double log_value_ = 0.0;
};

// Identity comparison in the log domain: both zero densities, or
// |a - b| <= tol * max(1, |a|, |b|).
inline bool log_equal(LogDensity a, LogDensity b, double tol) {
  if (a.is_zero() || b.is_zero()) {
    return a.is_zero() && b.is_zero();
  }
  const double scale = std::max({1.0, std::fabs(a.log_value()), std::fabs(b.log_value())});
  return std::fabs(a.log_value() - b.log_value()) <= tol * scale;
}

// Union of disjoint point ranges, viewed without copying. Used to evaluate densities
// at augmented configurations such as gamma ∪ {x_1, ..., x_k}.
class PointsView {
public:
  PointsView() = default;
  PointsView(const Configuration& c) { add(c); } // NOLINT(google-explicit-constructor)

  PointsView& add(const Configuration& c) { return add(std::span<const Point>(c.points())); }
  PointsView& add(std::span<const Point> pts) {
    if (!pts.empty()) {
      parts_.push_back(pts);
    }
    return *this;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (auto p : parts_) {
      n += p.size();
    }
    return n;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (auto part : parts_) {
      for (const Point& p : part) {
        f(p);
      }
    }
  }

private:
  std::vector<std::span<const Point>> parts_;
};

// Sum of p(x, y) over y in c; +inf on a hard-core violation.
inline double phi_sum(const PairPotential& p, const Point& x, const PointsView& c) {
  double sum = 0.0;
  c.for_each([&](const Point& y) {
    const double d2 = distance_squared(x, y);
    if (d2 == 0.0 && x == y) {
      throw CoincidentPoint("point " + x.str() + " coincides with a configuration point");
    }
    sum += p.value_at_squared_distance(d2);
  });
  return sum;
}

inline double phi_sum(const PairPotential& p, const Point& x, const Configuration& c) {
  return phi_sum(p, x, PointsView(c));
}

// Uniform grid of cell side >= the potential's reach; neighbours of x are found among
// the 3^d cells around it.
class CellIndex {
public:
  CellIndex(const Configuration& c, double cell_side) : points_(c.points()), side_(cell_side) {
    if (!(side_ > 0.0)) {
      throw InvalidArgument("cell side must be positive");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      cells_[key(cell_of(points_[i]))].push_back(i);
    }
  }

  double cell_side() const noexcept { return side_; }

  template <typename F>
  void for_each_near(const Point& x, F&& f) const {
    const std::vector<long> centre = cell_of(x);
    const std::size_t d = centre.size();
    std::vector<long> offset(d, -1);
    std::vector<long> cell(d);
    while (true) {
      for (std::size_t i = 0; i < d; ++i) {
        cell[i] = centre[i] + offset[i];
      }
      if (auto it = cells_.find(key(cell)); it != cells_.end()) {
        for (std::size_t idx : it->second) {
          f(points_[idx]);
        }
      }
      std::size_t i = 0;
      while (i < d && ++offset[i] == 2) {
        offset[i] = -1;
        ++i;
      }
      if (i == d) {
        break;
      }
    }
  }

  const std::vector<Point>& points() const noexcept { return points_; }

private:
  std::vector<long> cell_of(const Point& p) const {
    std::vector<long> c(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) {
      c[i] = static_cast<long>(std::floor(p[i] / side_));
    }
    return c;
  }

  static std::string key(const std::vector<long>& cell) {
    return std::string(reinterpret_cast<const char*>(cell.data()), cell.size() * sizeof(long));
  }

  std::vector<Point> points_;
  double side_;
  std::unordered_map<std::string, std::vector<std::size_t>> cells_;
};

// Cell-list route for phi_sum. Requires index.cell_side() >= p.reach(). Coincidence
// is detected among the neighbour cells, which always contain an exact duplicate.
inline double phi_sum(const PairPotential& p, const Point& x, const CellIndex& index) {
  if (index.cell_side() < p.reach()) {
    throw InvalidArgument("cell side smaller than potential range");
  }
  double sum = 0.0;
  index.for_each_near(x, [&](const Point& y) {
    const double d2 = distance_squared(x, y);
    if (d2 == 0.0 && x == y) {
      throw CoincidentPoint("point " + x.str() + " coincides with a configuration point");
    }
    sum += p.value_at_squared_distance(d2);
  });
  return sum;
}

// r0(c, x) = exp(-sum_{y in c} p(x, y)).
inline LogDensity r0(const PairPotential& p, const Configuration& c, const Point& x) {
  return LogDensity(-phi_sum(p, x, c));
}

// Whether to re-evaluate a density through its alternative factorization and throw
// IdentityViolation on mismatch.
enum class Postcondition { skip, verify };

inline constexpr double kFactorTolerance = 1e-12;
inline constexpr double kProductTolerance = 1e-11;

namespace detail {

struct SpeciesViews {
  PointsView plus;
  PointsView minus;
  const PointsView& of(Species s) const { return s == Species::plus ? plus : minus; }
  PointsView& of(Species s) { return s == Species::plus ? plus : minus; }
};

inline SpeciesViews views_of(const TwoComponentConfiguration& g) { return {g.plus, g.minus}; }

// log r_s(gamma, x) = -sum_{other species} phi(x, .) - sum_{own species} phi_s(x, .)
inline LogDensity r_species(const PotentialModel& m, const SpeciesViews& g, Species s,
                            const Point& x) {
  const double cross = phi_sum(m.cross, x, g.of(other(s)));
  const double self = phi_sum(m.self(s), x, g.of(s));
  return LogDensity(-(cross + self));
}

// R_s(gamma, eta) = prod_i r_s(gamma ∪_s {eta_1..eta_{i-1}}, eta_i), order as stored.
inline LogDensity R_species(const PotentialModel& m, const SpeciesViews& g, Species s,
                            std::span<const Point> eta) {
  LogDensity total = LogDensity::one();
  for (std::size_t i = 0; i < eta.size(); ++i) {
    SpeciesViews aug = g;
    aug.of(s).add(eta.first(i));
    total *= r_species(m, aug, s, eta[i]);
  }
  return total;
}

inline void require_distinct(const Point& x, const Point& y) {
  if (x == y) {
    throw CoincidentPoint("points " + x.str() + " and " + y.str() + " coincide");
  }
}

inline std::span<const Point> as_span(const Configuration& c) { return c.points(); }

inline std::span<const Point> as_span(const Point& p) { return {&p, 1}; }

} // namespace detail

inline LogDensity r_species(const PotentialModel& m, const TwoComponentConfiguration& g,
                            Species s, const Point& x) {
  return detail::r_species(m, detail::views_of(g), s, x);
}

inline LogDensity r_plus(const PotentialModel& m, const TwoComponentConfiguration& g,
                         const Point& x) {
  return r_species(m, g, Species::plus, x);
}

inline LogDensity r_minus(const PotentialModel& m, const TwoComponentConfiguration& g,
                          const Point& y) {
  return r_species(m, g, Species::minus, y);
}

// r+(g+, g- ∪ y, x) r-(g+, g-, y)
inline LogDensity r_full_via_plus(const PotentialModel& m, const TwoComponentConfiguration& g,
                                  const Point& x, const Point& y) {
  detail::require_distinct(x, y);
  const detail::SpeciesViews base = detail::views_of(g);
  detail::SpeciesViews with_y = base;
  with_y.minus.add(detail::as_span(y));
  return detail::r_species(m, with_y, Species::plus, x) *
         detail::r_species(m, base, Species::minus, y);
}

// r-(g+ ∪ x, g-, y) r+(g+, g-, x)
inline LogDensity r_full_via_minus(const PotentialModel& m, const TwoComponentConfiguration& g,
                                   const Point& x, const Point& y) {
  detail::require_distinct(x, y);
  const detail::SpeciesViews base = detail::views_of(g);
  detail::SpeciesViews with_x = base;
  with_x.plus.add(detail::as_span(x));
  return detail::r_species(m, with_x, Species::minus, y) *
         detail::r_species(m, base, Species::plus, x);
}

// Relative energy density of adding x to the plus and y to the minus species.
inline LogDensity r_full(const PotentialModel& m, const TwoComponentConfiguration& g,
                         const Point& x, const Point& y,
                         Postcondition check = Postcondition::verify) {
  const LogDensity value = r_full_via_plus(m, g, x, y);
  if (check == Postcondition::verify) {
    const LogDensity alt = r_full_via_minus(m, g, x, y);
    if (!log_equal(value, alt, kFactorTolerance)) {
      throw IdentityViolation("r factorizations disagree");
    }
  }
  return value;
}

inline LogDensity R_species(const PotentialModel& m, const TwoComponentConfiguration& g,
                            Species s, const Configuration& eta) {
  return detail::R_species(m, detail::views_of(g), s, eta.points());
}

inline LogDensity R_plus(const PotentialModel& m, const TwoComponentConfiguration& g,
                         const Configuration& eta) {
  return R_species(m, g, Species::plus, eta);
}

inline LogDensity R_minus(const PotentialModel& m, const TwoComponentConfiguration& g,
                          const Configuration& eta) {
  return R_species(m, g, Species::minus, eta);
}

// R+(g+, g- ∪ eta-, eta+) R-(g+, g-, eta-)
inline LogDensity R_full_via_plus(const PotentialModel& m, const TwoComponentConfiguration& g,
                                  const Configuration& eta_plus, const Configuration& eta_minus) {
  const detail::SpeciesViews base = detail::views_of(g);
  detail::SpeciesViews with_minus = base;
  with_minus.minus.add(eta_minus);
  return detail::R_species(m, with_minus, Species::plus, eta_plus.points()) *
         detail::R_species(m, base, Species::minus, eta_minus.points());
}

// R-(g+ ∪ eta+, g-, eta-) R+(g+, g-, eta+)
inline LogDensity R_full_via_minus(const PotentialModel& m, const TwoComponentConfiguration& g,
                                   const Configuration& eta_plus,
                                   const Configuration& eta_minus) {
  const detail::SpeciesViews base = detail::views_of(g);
  detail::SpeciesViews with_plus = base;
  with_plus.plus.add(eta_plus);
  return detail::R_species(m, with_plus, Species::minus, eta_minus.points()) *
         detail::R_species(m, base, Species::plus, eta_plus.points());
}

// prod_i r(g+ ∪ {x_<i}, g- ∪ {y_<i}, x_i, y_i) for |eta+| = |eta-|, stored orders.
inline LogDensity r_product(const PotentialModel& m, const TwoComponentConfiguration& g,
                            const Configuration& eta_plus, const Configuration& eta_minus) {
  if (eta_plus.size() != eta_minus.size()) {
    throw InvalidArgument("r-product decomposition needs |eta+| == |eta-|");
  }
  const std::span<const Point> xs = eta_plus.points();
  const std::span<const Point> ys = eta_minus.points();
  LogDensity total = LogDensity::one();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    detail::require_distinct(xs[i], ys[i]);
    detail::SpeciesViews aug = detail::views_of(g);
    aug.plus.add(xs.first(i));
    aug.minus.add(ys.first(i));
    detail::SpeciesViews aug_y = aug;
    aug_y.minus.add(ys.subspan(i, 1));
    total *= detail::r_species(m, aug_y, Species::plus, xs[i]) *
             detail::r_species(m, aug, Species::minus, ys[i]);
  }
  return total;
}

// Relative density of adding eta+ and eta- to g. With Postcondition::verify, the
// alternative factorization and (for |eta+| = |eta-|) the r-product must agree.
inline LogDensity R_full(const PotentialModel& m, const TwoComponentConfiguration& g,
                         const Configuration& eta_plus, const Configuration& eta_minus,
                         Postcondition check = Postcondition::verify) {
  const LogDensity value = R_full_via_plus(m, g, eta_plus, eta_minus);
  if (check == Postcondition::verify) {
    if (!log_equal(value, R_full_via_minus(m, g, eta_plus, eta_minus), kProductTolerance)) {
      throw IdentityViolation("R factorizations disagree");
    }
    if (eta_plus.size() == eta_minus.size() &&
        !log_equal(value, r_product(m, g, eta_plus, eta_minus), kProductTolerance)) {
      throw IdentityViolation("R disagrees with its r-product decomposition");
    }
  }
  return value;
}

// -(energy of eta within itself and against g), summed pair by pair with no
// telescoping. Equal to log R_full; kept as an independent evaluation route.
inline LogDensity log_density_by_pairs(const PotentialModel& m, const TwoComponentConfiguration& g,
                                       const Configuration& eta_plus,
                                       const Configuration& eta_minus) {
  double energy = 0.0;
  const auto& xs = eta_plus.points();
  const auto& ys = eta_minus.points();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      energy += m.self_plus(xs[i], xs[j]);
    }
    for (const Point& y : ys) {
      energy += m.cross(xs[i], y);
    }
    for (const Point& gp : g.plus) {
      energy += m.self_plus(xs[i], gp);
    }
    for (const Point& gm : g.minus) {
      energy += m.cross(xs[i], gm);
    }
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = i + 1; j < ys.size(); ++j) {
      energy += m.self_minus(ys[i], ys[j]);
    }
    for (const Point& gm : g.minus) {
      energy += m.self_minus(ys[i], gm);
    }
    for (const Point& gp : g.plus) {
      energy += m.cross(ys[i], gp);
    }
  }
  return LogDensity(-energy);
}

// Whether some pair within or between configurations is closer than a hard-core range
// (a potential with value +inf at that distance).
inline bool hardcore_feasible(const PotentialModel& m, const TwoComponentConfiguration& g) {
  auto ok = [](const PairPotential& p, const Point& a, const Point& b) {
    return std::isfinite(p(a, b));
  };
  const auto& xs = g.plus.points();
  const auto& ys = g.minus.points();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      if (!ok(m.self_plus, xs[i], xs[j])) {
        return false;
      }
    }
    for (const Point& y : ys) {
      if (!ok(m.cross, xs[i], y)) {
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = i + 1; j < ys.size(); ++j) {
      if (!ok(m.self_minus, ys[i], ys[j])) {
        return false;
      }
    }
  }
  return true;
}

} // namespace bigibbs
