#pragma once

// Monte Carlo estimates with standard errors, z-score reports, and the small set of
// goodness-of-fit tests used to compare samplers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace bigibbs {

inline constexpr double kZThreshold = 3.0;

struct EstimateWithError {
  double estimate = 0.0;
  double std_err = 0.0;
  std::uint64_t n_samples = 0;

  // Mean with stderr from the unbiased sample variance. Fewer than two values give
  // std_err = 0; callers check degenerate().
  static EstimateWithError from_values(std::span<const double> values) {
    EstimateWithError e;
    e.n_samples = values.size();
    if (values.empty()) {
      return e;
    }
    // Two-pass for stability; constant inputs give exactly zero variance.
    double sum = 0.0;
    for (double v : values) {
      sum += v;
    }
    const double n = static_cast<double>(values.size());
    e.estimate = sum / n;
    if (values.size() < 2) {
      return e;
    }
    double ss = 0.0;
    for (double v : values) {
      const double d = v - e.estimate;
      ss += d * d;
    }
    e.std_err = std::sqrt(ss / (n - 1.0) / n);
    return e;
  }

  bool degenerate() const { return n_samples < 2; }
};

// Mean with a batch-means standard error, for autocorrelated chain output: the series is
// cut into `batches` contiguous blocks and the block means are treated as independent.
inline EstimateWithError batch_means(std::span<const double> values, std::size_t batches = 50) {
  EstimateWithError e = EstimateWithError::from_values(values);
  const std::size_t size = values.size() / batches;
  if (batches < 2 || size == 0) {
    return e;
  }
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < size; ++i) {
      means[b] += values[b * size + i];
    }
    means[b] /= static_cast<double>(size);
  }
  e.std_err = EstimateWithError::from_values(means).std_err;
  return e;
}

// (a - b) / sqrt(se_a^2 + se_b^2); 0 when both errors vanish and the estimates agree.
inline double z_score(const EstimateWithError& a, const EstimateWithError& b) {
  const double diff = a.estimate - b.estimate;
  const double pooled = std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err);
  if (pooled == 0.0) {
    if (diff == 0.0) {
      return 0.0;
    }
    return diff > 0 ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
  }
  return diff / pooled;
}

struct IdentityReport {
  std::string identity;
  EstimateWithError lhs;
  EstimateWithError rhs;
  double z_score = 0.0;
  bool pass = false;
  // Empty, or a reason the comparison is not meaningful (e.g. "nSamples-too-small").
  std::string note;
};

inline IdentityReport make_report(std::string identity, EstimateWithError lhs,
                                  EstimateWithError rhs) {
  IdentityReport r;
  r.identity = std::move(identity);
  r.lhs = lhs;
  r.rhs = rhs;
  r.z_score = z_score(lhs, rhs);
  if (lhs.degenerate() || rhs.degenerate()) {
    r.note = "nSamples-too-small";
    r.pass = false;
  } else {
    r.pass = std::fabs(r.z_score) < kZThreshold;
  }
  return r;
}

// Kolmogorov limiting survival function Q(lambda) = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) {
    return 1.0;
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-16) {
      break;
    }
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the Stephens small-sample correction.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  KsResult r;
  if (a.empty() || b.empty()) {
    return r;
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) {
      ++i;
    }
    while (j < b.size() && b[j] <= x) {
      ++j;
    }
    r.statistic = std::max(r.statistic, std::fabs(static_cast<double>(i) / na -
                                                  static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  r.p_value = kolmogorov_q((ne + 0.12 + 0.11 / ne) * r.statistic);
  return r;
}

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson goodness of fit of observed counts to expected counts. Bins with expected
// count below min_expected are pooled into the following bin (the last into the
// previous one).
inline ChiSquareResult chi_square_gof(std::span<const double> observed,
                                      std::span<const double> expected,
                                      double min_expected = 5.0) {
  std::vector<double> obs, exp;
  double acc_o = 0.0, acc_e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    acc_o += observed[i];
    acc_e += expected[i];
    if (acc_e >= min_expected) {
      obs.push_back(acc_o);
      exp.push_back(acc_e);
      acc_o = acc_e = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (exp.empty()) {
      obs.push_back(acc_o);
      exp.push_back(acc_e);
    } else {
      obs.back() += acc_o;
      exp.back() += acc_e;
    }
  }
  ChiSquareResult r;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double d = obs[i] - exp[i];
    r.statistic += d * d / exp[i];
  }
  r.dof = static_cast<int>(obs.size()) - 1;
  r.p_value = r.dof > 0 ? boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic) : 1.0;
  return r;
}

// Pearson correlation of two equally long series; 0 if either is constant.
inline double sample_correlation(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n < 2) {
    return 0.0;
  }
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) {
    return 0.0;
  }
  return sab / std::sqrt(saa * sbb);
}

} // namespace bigibbs
