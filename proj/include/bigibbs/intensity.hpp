#pragma once

// Reference intensity measure sigma(dx) = z * density(x) dx on a window, Poisson
// sampling under it, and importance points for sigma-integrals.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bigibbs/config.hpp"
#include "bigibbs/error.hpp"
#include "bigibbs/random.hpp"

namespace bigibbs {

class IntensityMeasure {
public:
  using Density = std::function<double(const Point&)>;

  static constexpr std::size_t kDefaultGrid = 256;

  IntensityMeasure() : IntensityMeasure(1.0) {}

  // Homogeneous measure z * Lebesgue.
  explicit IntensityMeasure(double z) : z_(z) { validate(); }

  // Modulated measure. density_max must bound the density from above; grid is the
  // per-axis resolution of the midpoint rule used by mass().
  IntensityMeasure(double z, std::string name, Density density, double density_max,
                   std::size_t grid = kDefaultGrid)
      : z_(z), name_(std::move(name)), density_(std::move(density)), density_max_(density_max),
        grid_(grid) {
    validate();
  }

  // Named presets accepted by experiment configs: "constant" and "linear-x1".
  // linear-x1 is clamp(x_1, 0, 1), which equals x_1 on the unit box.
  static IntensityMeasure preset(const std::string& name, double z,
                                 std::size_t grid = kDefaultGrid) {
    if (name == "constant") {
      return IntensityMeasure(z);
    }
    if (name == "linear-x1") {
      return IntensityMeasure(
          z, name, [](const Point& p) { return std::clamp(p[0], 0.0, 1.0); }, 1.0, grid);
    }
    throw InvalidArgument("unknown intensity density preset '" + name + "'");
  }

  double z() const noexcept { return z_; }
  const std::string& density_name() const noexcept { return name_; }
  bool homogeneous() const noexcept { return !density_; }
  double density_max() const noexcept { return density_max_; }
  std::size_t grid() const noexcept { return grid_; }

  double density(const Point& p) const { return density_ ? density_(p) : 1.0; }

  // Radon-Nikodym derivative of sigma w.r.t. Lebesgue at p.
  double rate(const Point& p) const { return z_ * density(p); }

private:
  void validate() const {
    if (!(z_ > 0.0) || !std::isfinite(z_)) {
      throw InvalidArgument("intensity z must be positive and finite");
    }
    if (!(density_max_ > 0.0) || !std::isfinite(density_max_)) {
      throw InvalidArgument("density_max must be positive and finite");
    }
    if (grid_ == 0) {
      throw InvalidArgument("quadrature grid must be positive");
    }
  }

  double z_ = 1.0;
  std::string name_ = "constant";
  Density density_;
  double density_max_ = 1.0;
  std::size_t grid_ = kDefaultGrid;
};

// sigma(w). Exact for constant density, midpoint rule on grid^d cells otherwise.
inline double mass(const IntensityMeasure& m, const Window& w) {
  if (m.homogeneous()) {
    return m.z() * w.volume();
  }
  const std::size_t d = w.dim();
  const std::size_t n = m.grid();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> u(d);
  double total = 0.0;
  while (true) {
    for (std::size_t i = 0; i < d; ++i) {
      u[i] = (static_cast<double>(idx[i]) + 0.5) / static_cast<double>(n);
    }
    total += m.density(w.at_unit(u));
    std::size_t i = 0;
    while (i < d && ++idx[i] == n) {
      idx[i] = 0;
      ++i;
    }
    if (i == d) {
      break;
    }
  }
  double cells = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    cells *= static_cast<double>(n);
  }
  return m.z() * w.volume() * total / cells;
}

inline Point uniform_point(const Window& w, RngState& rng) {
  std::vector<double> u(w.dim());
  for (double& ui : u) {
    ui = rng.uniform();
  }
  return w.at_unit(u);
}

// Poisson process with intensity sigma restricted to w: homogeneous draw at rate
// z * density_max, then independent thinning by density / density_max.
inline Configuration sample_poisson(const IntensityMeasure& m, const Window& w, RngState& rng) {
  const double dominating = m.z() * m.density_max() * w.volume();
  const std::uint64_t n = draw_poisson(rng, dominating);
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Point p = uniform_point(w, rng);
    if (!m.homogeneous() && !rng.bernoulli(m.density(p) / m.density_max())) {
      continue;
    }
    pts.push_back(std::move(p));
  }
  return Configuration(std::move(pts));
}

struct SigmaPoint {
  Point point;
  double weight = 0.0;
};

// x uniform on w with weight z * vol(w) * density(x): E[f(x) weight] = int_w f dsigma.
inline SigmaPoint draw_sigma_point(const IntensityMeasure& m, const Window& w, RngState& rng) {
  Point x = uniform_point(w, rng);
  const double weight = m.z() * w.volume() * m.density(x);
  return {std::move(x), weight};
}

} // namespace bigibbs
