#pragma once

// Finite-volume reference values for nonnegative pair-potential models.
//
// Two routes, independent of the Markov chain and of each other:
//  * exact rejection sampling from the product Poisson law with acceptance R(∅, eta+, eta-);
//  * the truncated Lebesgue-Poisson series
//      Z = e^{-2 sigma(W)} sum_{n,m <= nMax} 1/(n! m!) ∫ R(∅, xi+, xi-) dsigma^n dsigma^m
//    with each inner integral estimated by plain Monte Carlo.
// With the e^{-2 sigma(W)} prefactor, Z equals the rejection acceptance probability.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bigibbs/config.hpp"
#include "bigibbs/energy.hpp"
#include "bigibbs/error.hpp"
#include "bigibbs/intensity.hpp"
#include "bigibbs/parallel.hpp"
#include "bigibbs/random.hpp"

namespace bigibbs {

// Stream ids reserved for oracle work; chains use small ids.
inline constexpr std::uint64_t kOracleStreamBase = std::uint64_t{1} << 40;

struct SeriesTruncation {
  int n_max = 6;
  std::uint64_t mc_points_per_term = 100000;

  void validate() const {
    if (n_max < 0) {
      throw InvalidArgument("series truncation nMax must be >= 0");
    }
    if (mc_points_per_term < 2) {
      throw InvalidArgument("need at least two Monte Carlo points per series term");
    }
  }
};

struct OracleResult {
  double value = 0.0;
  double truncation_bound = 0.0;
  double mc_stderr = 0.0;
};

struct SeriesTerm {
  int n_plus = 0;
  int n_minus = 0;
  double value = 0.0;
  double std_err = 0.0;
};

struct PartitionResult : OracleResult {
  // Row-major over (n_plus, n_minus); term(n, m) / value is the probability of
  // exactly n plus and m minus points.
  std::vector<SeriesTerm> terms;

  int n_max = 0;

  const SeriesTerm& term(int n_plus, int n_minus) const {
    const auto side = static_cast<std::size_t>(n_max + 1);
    return terms.at(static_cast<std::size_t>(n_plus) * side + static_cast<std::size_t>(n_minus));
  }
};

// 1 - (e^{-s} sum_{n<=N} s^n/n!)^2: mass of the free two-species series beyond nMax.
// Bounds the truncation error of any series whose integrand lies in [0, 1].
inline double free_series_tail(double sigma_mass, int n_max) {
  double term = std::exp(-sigma_mass);
  double partial = term;
  for (int n = 1; n <= n_max; ++n) {
    term *= sigma_mass / n;
    partial += term;
  }
  partial = std::min(partial, 1.0);
  return std::max(0.0, 1.0 - partial * partial);
}

namespace detail {

inline void require_nonnegative(const PotentialModel& m) {
  if (!m.nonnegative()) {
    throw NotNonnegativeModel("model has a negative amplitude; the exp(-U) <= 1 envelope fails");
  }
}

// n sigma-distributed points in w, appended to the flat coordinate buffer `out`; returns
// the summed log importance weight.
inline double draw_flat_points(const IntensityMeasure& m, const Window& w, std::size_t n,
                               RngState& rng, std::vector<double>& out) {
  const std::size_t d = w.dim();
  const double log_base = std::log(m.z() * w.volume());
  double log_weight = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out.push_back(w.lower()[j] + w.side(j) * rng.uniform());
    }
    log_weight += log_base;
    if (!m.homogeneous()) {
      const double* c = out.data() + out.size() - d;
      log_weight += std::log(m.density(Point(std::vector<double>(c, c + d))));
    }
  }
  return log_weight;
}

inline void append_flat(const Configuration& c, std::vector<double>& out) {
  for (const Point& p : c) {
    out.insert(out.end(), p.coords().begin(), p.coords().end());
  }
}

// Total pair energy U(plus, minus) summed pair by pair over flat coordinate buffers.
// Sets `coincident` when two points are equal.
inline double flat_energy(const PotentialModel& m, std::size_t d, const std::vector<double>& a,
                          const std::vector<double>& b, bool& coincident) {
  const std::size_t na = a.size() / d, nb = b.size() / d;
  auto d2 = [d](const double* x, const double* y) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double t = x[j] - y[j];
      s += t * t;
    }
    return s;
  };
  double u = 0.0;
  auto add = [&](const PairPotential& p, double dist2) {
    if (dist2 == 0.0) {
      coincident = true;
    }
    u += p.value_at_squared_distance(dist2);
  };
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t k = i + 1; k < na; ++k) {
      add(m.self_plus, d2(&a[i * d], &a[k * d]));
    }
    for (std::size_t k = 0; k < nb; ++k) {
      add(m.cross, d2(&a[i * d], &b[k * d]));
    }
  }
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t k = i + 1; k < nb; ++k) {
      add(m.self_minus, d2(&b[i * d], &b[k * d]));
    }
  }
  return u;
}

struct TermMoments {
  double sum_a = 0, sum_b = 0, sum_aa = 0, sum_bb = 0, sum_ab = 0;
  std::uint64_t count = 0;
};

// For one (n, k) term: a = weighted R(∅, eta+ ∪ xi+, eta- ∪ xi-), b = weighted R(∅, xi+, xi-),
// on common draws xi. R(∅, .) is evaluated as exp(-U) from the direct pair sum.
inline TermMoments series_term(const PotentialModel& m, const Window& w, int n, int k,
                               const Configuration& eta_plus, const Configuration& eta_minus,
                               std::uint64_t points, RngState rng, double log_prefactor) {
  TermMoments out;
  const std::size_t d = w.dim();
  const bool shifted = !eta_plus.empty() || !eta_minus.empty();
  std::vector<double> xp, xm, ap, am;
  std::vector<double> eta_p, eta_m;
  append_flat(eta_plus, eta_p);
  append_flat(eta_minus, eta_m);
  while (out.count < points) {
    xp.clear();
    xm.clear();
    double log_w = draw_flat_points(m.intensity, w, static_cast<std::size_t>(n), rng, xp);
    log_w += draw_flat_points(m.intensity, w, static_cast<std::size_t>(k), rng, xm);
    bool coincident = false;
    const double u = flat_energy(m, d, xp, xm, coincident);
    double u_shift = u;
    if (shifted) {
      ap = eta_p;
      ap.insert(ap.end(), xp.begin(), xp.end());
      am = eta_m;
      am.insert(am.end(), xm.begin(), xm.end());
      u_shift = flat_energy(m, d, ap, am, coincident);
    }
    if (coincident) {
      continue; // probability zero: redraw
    }
    const double base = log_w + log_prefactor;
    const double b = std::exp(base - u);
    const double a = shifted ? std::exp(base - u_shift) : b;
    out.sum_a += a;
    out.sum_b += b;
    out.sum_aa += a * a;
    out.sum_bb += b * b;
    out.sum_ab += a * b;
    ++out.count;
  }
  return out;
}

inline std::vector<TermMoments> series_moments(const PotentialModel& m, const Window& w,
                                               const Configuration& eta_plus,
                                               const Configuration& eta_minus,
                                               const SeriesTruncation& t, const RngState& rng) {
  const double s = mass(m.intensity, w);
  const auto side = static_cast<std::size_t>(t.n_max + 1);
  std::vector<TermMoments> moments(side * side);
  parallel_for(moments.size(), [&](std::size_t idx) {
    const int n = static_cast<int>(idx / side);
    const int k = static_cast<int>(idx % side);
    const double log_prefactor = -2.0 * s - std::lgamma(n + 1.0) - std::lgamma(k + 1.0);
    const bool deterministic = n == 0 && k == 0 && eta_plus.empty() && eta_minus.empty();
    const std::uint64_t points = deterministic ? 2 : t.mc_points_per_term;
    moments[idx] = series_term(m, w, n, k, eta_plus, eta_minus, points,
                               rng.fork(kOracleStreamBase + rng.stream() * 4096 + idx),
                               log_prefactor);
  });
  return moments;
}

inline double mean_variance(double sum, double sum_sq, std::uint64_t n) {
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  return std::max(0.0, (sum_sq / dn - mean * mean) * dn / (dn - 1.0)) / dn;
}

} // namespace detail

// Truncated-series partition function (see file comment). Term streams are forked from
// rng by term index so the result is independent of scheduling.
inline PartitionResult partition_function(const PotentialModel& m, const Window& w,
                                          const SeriesTruncation& t, const RngState& rng) {
  detail::require_nonnegative(m);
  t.validate();
  const auto moments = detail::series_moments(m, w, Configuration{}, Configuration{}, t, rng);
  PartitionResult out;
  out.n_max = t.n_max;
  const auto side = static_cast<std::size_t>(t.n_max + 1);
  double variance = 0.0;
  for (std::size_t idx = 0; idx < moments.size(); ++idx) {
    const auto& mo = moments[idx];
    const double mean = mo.sum_b / static_cast<double>(mo.count);
    const double var = detail::mean_variance(mo.sum_b, mo.sum_bb, mo.count);
    out.value += mean;
    variance += var;
    out.terms.push_back({static_cast<int>(idx / side), static_cast<int>(idx % side), mean,
                         std::sqrt(var)});
  }
  out.mc_stderr = std::sqrt(variance);
  out.truncation_bound = free_series_tail(mass(m.intensity, w), t.n_max);
  return out;
}

// k(eta+, eta-) as the ratio of the shifted series to the partition series, on common
// random draws; k(∅, ∅) is exactly 1.
inline OracleResult exact_correlation(const PotentialModel& m, const Window& w,
                                      const Configuration& eta_plus,
                                      const Configuration& eta_minus, const SeriesTruncation& t,
                                      const RngState& rng) {
  detail::require_nonnegative(m);
  t.validate();
  for (const Point& p : eta_plus) {
    if (eta_minus.contains(p)) {
      throw CoincidentPoint("point " + p.str() + " appears in both eta+ and eta-");
    }
  }
  for (Species s : {Species::plus, Species::minus}) {
    for (const Point& p : (s == Species::plus ? eta_plus : eta_minus)) {
      if (!w.contains(p)) {
        throw InvalidArgument("eta point " + p.str() + " lies outside the window");
      }
    }
  }
  const auto moments = detail::series_moments(m, w, eta_plus, eta_minus, t, rng);
  double num = 0.0, den = 0.0;
  for (const auto& mo : moments) {
    num += mo.sum_a / static_cast<double>(mo.count);
    den += mo.sum_b / static_cast<double>(mo.count);
  }
  OracleResult out;
  out.value = num / den;
  // Delta method on the ratio: per term, the variance of the mean of (a - k b).
  double variance = 0.0;
  const double k = out.value;
  for (const auto& mo : moments) {
    const double dn = static_cast<double>(mo.count);
    const double mean_d = (mo.sum_a - k * mo.sum_b) / dn;
    const double sq_d = (mo.sum_aa - 2.0 * k * mo.sum_ab + k * k * mo.sum_bb) / dn;
    variance += std::max(0.0, (sq_d - mean_d * mean_d) / (dn - 1.0));
  }
  out.mc_stderr = std::sqrt(variance) / den;
  const double tail = free_series_tail(mass(m.intensity, w), t.n_max);
  out.truncation_bound = eta_plus.empty() && eta_minus.empty() ? 0.0 : tail * (1.0 + k) / den;
  return out;
}

// One exact draw from the finite-volume Gibbs law with free boundary. `attempts`, when
// given, is incremented by the number of Poisson proposals used.
inline TwoComponentConfiguration rejection_sample(const PotentialModel& m, const Window& w,
                                                  RngState& rng,
                                                  std::uint64_t* attempts = nullptr) {
  detail::require_nonnegative(m);
  const TwoComponentConfiguration empty;
  while (true) {
    if (attempts) {
      ++*attempts;
    }
    TwoComponentConfiguration g{sample_poisson(m.intensity, w, rng),
                                sample_poisson(m.intensity, w, rng)};
    const double u = rng.uniform();
    if (!check_disjoint(g)) {
      continue; // probability zero
    }
    const LogDensity accept = R_full(m, empty, g.plus, g.minus, Postcondition::skip);
    if (u < accept.value()) {
      return g;
    }
  }
}

struct RejectionBatch {
  std::vector<TwoComponentConfiguration> samples;
  std::uint64_t attempts = 0;

  double acceptance_rate() const {
    return attempts ? static_cast<double>(samples.size()) / static_cast<double>(attempts) : 0.0;
  }
  // Binomial standard error of the acceptance rate.
  double acceptance_stderr() const {
    const double p = acceptance_rate();
    return attempts ? std::sqrt(p * (1.0 - p) / static_cast<double>(attempts)) : 0.0;
  }
};

// `count` independent exact draws; draw i uses its own stream forked from rng.
inline RejectionBatch rejection_batch(const PotentialModel& m, const Window& w, std::size_t count,
                                      const RngState& rng) {
  detail::require_nonnegative(m);
  std::vector<TwoComponentConfiguration> samples(count);
  std::vector<std::uint64_t> attempts(count, 0);
  parallel_for(count, [&](std::size_t i) {
    RngState local = rng.fork(kOracleStreamBase * 2 + rng.stream() * (std::uint64_t{1} << 24) + i);
    samples[i] = rejection_sample(m, w, local, &attempts[i]);
  });
  RejectionBatch out;
  out.samples = std::move(samples);
  for (auto a : attempts) {
    out.attempts += a;
  }
  return out;
}

} // namespace bigibbs
