#pragma once

// Points, windows and finite (two-component) configurations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bigibbs/error.hpp"

namespace bigibbs {

enum class Species { plus, minus };

inline constexpr Species other(Species s) noexcept {
  return s == Species::plus ? Species::minus : Species::plus;
}

inline const char* to_string(Species s) noexcept {
  return s == Species::plus ? "plus" : "minus";
}

class Point {
public:
  Point() = default;

  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {
    for (double c : coords_) {
      if (!std::isfinite(c)) {
        throw InvalidArgument("point coordinate is not finite");
      }
    }
  }

  Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  // Exact coordinate equality; no tolerance.
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

  std::string str() const {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      os << (i ? "," : "") << coords_[i];
    }
    os << ')';
    return os.str();
  }

private:
  std::vector<double> coords_;
};

inline double distance_squared(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument("points of different dimension");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double distance(const Point& a, const Point& b) {
  return std::sqrt(distance_squared(a, b));
}

// Axis-aligned box with lower[i] < upper[i] in every coordinate.
class Window {
public:
  Window() = default;

  Window(std::vector<double> lower, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size()) {
      throw InvalidArgument("window bounds must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i])) {
        throw InvalidArgument("window requires finite lower[i] < upper[i]");
      }
    }
  }

  static Window unit(std::size_t dim) {
    return Window(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
  }

  std::size_t dim() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double side(std::size_t i) const { return upper_[i] - lower_[i]; }

  double volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) {
      v *= side(i);
    }
    return v;
  }

  double diameter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
      s += side(i) * side(i);
    }
    return std::sqrt(s);
  }

  // Closed-box membership.
  bool contains(const Point& p) const {
    if (p.dim() != dim()) {
      return false;
    }
    for (std::size_t i = 0; i < dim(); ++i) {
      if (p[i] < lower_[i] || p[i] > upper_[i]) {
        return false;
      }
    }
    return true;
  }

  bool contains(const Window& w) const {
    if (w.dim() != dim()) {
      return false;
    }
    for (std::size_t i = 0; i < dim(); ++i) {
      if (w.lower_[i] < lower_[i] || w.upper_[i] > upper_[i]) {
        return false;
      }
    }
    return true;
  }

  // Maps u in [0,1)^d onto the box.
  Point at_unit(std::span<const double> u) const {
    std::vector<double> c(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      c[i] = lower_[i] + u[i] * side(i);
    }
    return Point(std::move(c));
  }

  friend bool operator==(const Window&, const Window&) = default;

private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// Finite set of distinct points. Insertion order is kept; equality is set equality.
class Configuration {
public:
  using const_iterator = std::vector<Point>::const_iterator;

  Configuration() = default;

  explicit Configuration(std::vector<Point> points) : points_(std::move(points)) {
    std::vector<Point> sorted = points_;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
      throw DuplicatePoint("duplicate point " + dup->str() + " in configuration");
    }
  }

  Configuration(std::initializer_list<Point> points)
      : Configuration(std::vector<Point>(points)) {}

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const_iterator begin() const noexcept { return points_.begin(); }
  const_iterator end() const noexcept { return points_.end(); }
  const std::vector<Point>& points() const noexcept { return points_; }

  bool contains(const Point& p) const {
    return std::find(points_.begin(), points_.end(), p) != points_.end();
  }

  void insert(Point p) {
    if (contains(p)) {
      throw DuplicatePoint("point " + p.str() + " already in configuration");
    }
    points_.push_back(std::move(p));
  }

  // Removes the i-th point, moving the last point into its slot.
  Point remove_at(std::size_t i) {
    Point removed = std::move(points_[i]);
    if (i + 1 != points_.size()) {
      points_[i] = std::move(points_.back());
    }
    points_.pop_back();
    return removed;
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    if (a.size() != b.size()) {
      return false;
    }
    std::vector<Point> sa = a.points_;
    std::vector<Point> sb = b.points_;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa == sb;
  }

private:
  std::vector<Point> points_;
};

// Pair (plus, minus) with no point shared between the two species.
struct TwoComponentConfiguration {
  Configuration plus;
  Configuration minus;

  const Configuration& of(Species s) const { return s == Species::plus ? plus : minus; }
  Configuration& of(Species s) { return s == Species::plus ? plus : minus; }

  std::size_t total() const noexcept { return plus.size() + minus.size(); }

  friend bool operator==(const TwoComponentConfiguration&,
                         const TwoComponentConfiguration&) = default;
};

inline Configuration project(const Configuration& c, const Window& w) {
  std::vector<Point> kept;
  for (const Point& p : c) {
    if (w.contains(p)) {
      kept.push_back(p);
    }
  }
  return Configuration(std::move(kept));
}

inline TwoComponentConfiguration project(const TwoComponentConfiguration& t,
                                         const Window& plus_window,
                                         const Window& minus_window) {
  return {project(t.plus, plus_window), project(t.minus, minus_window)};
}

inline Configuration union_disjoint(const Configuration& c, const Point& p) {
  Configuration out = c;
  out.insert(p);
  return out;
}

inline Configuration union_disjoint(const Configuration& a, const Configuration& b) {
  Configuration out = a;
  for (const Point& p : b) {
    out.insert(p);
  }
  return out;
}

inline bool check_disjoint(const TwoComponentConfiguration& t) {
  for (const Point& p : t.plus) {
    if (t.minus.contains(p)) {
      return false;
    }
  }
  return true;
}

// Adds a point to one species, enforcing disjointness across both.
inline TwoComponentConfiguration with_point(const TwoComponentConfiguration& t, Species s,
                                            const Point& p) {
  if (t.of(other(s)).contains(p)) {
    throw DuplicatePoint("point " + p.str() + " already present in the other species");
  }
  TwoComponentConfiguration out = t;
  out.of(s).insert(p);
  return out;
}

} // namespace bigibbs
