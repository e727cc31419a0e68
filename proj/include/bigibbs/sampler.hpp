#pragma once

// Birth-death Metropolis-Hastings chain for the finite-volume two-species Gibbs law.
//
// The target density w.r.t. the product Poisson law on the window is proportional to
// R(boundary, eta+, eta-). Acceptance ratios use r+/r- with the frozen boundary adjoined:
//   birth of x:  sigma-rate(x) |window| / (n + 1) * r_s(gamma ∪ boundary, x)
//   death of x:  n / (sigma-rate(x) |window|) / r_s(gamma \ x ∪ boundary, x)
// where sigma-rate(x) = z * density(x).

#include <array>
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

inline constexpr std::uint64_t kDefaultThin = 50;

struct ChainSpec {
  PotentialModel model;
  Window window;
  std::uint64_t steps = 0;
  std::uint64_t burnin = 0;
  std::uint64_t thin = kDefaultThin;
  // Frozen configuration outside the window.
  TwoComponentConfiguration boundary;
  std::uint64_t seed = 0;

  // Heuristic burn-in: 1000 steps per expected point of one species, at least 1000.
  static std::uint64_t default_burnin(const PotentialModel& model, const Window& window) {
    const double expected = mass(model.intensity, window);
    return std::max<std::uint64_t>(1000, static_cast<std::uint64_t>(std::ceil(1000.0 * expected)));
  }

  std::uint64_t sample_count() const { return steps > burnin ? (steps - burnin) / thin : 0; }

  void validate() const {
    if (!(steps > burnin)) {
      throw InvalidArgument("chain needs steps > burnin");
    }
    if (thin < 1) {
      throw InvalidArgument("chain needs thin >= 1");
    }
    if (window.dim() == 0) {
      throw InvalidArgument("chain window is empty");
    }
    for (Species s : {Species::plus, Species::minus}) {
      for (const Point& p : boundary.of(s)) {
        if (p.dim() != window.dim()) {
          throw InvalidArgument("boundary point " + p.str() + " has the wrong dimension");
        }
        if (window.contains(p)) {
          throw InvalidArgument("boundary point " + p.str() + " lies inside the window");
        }
      }
    }
  }
};

struct MoveCounter {
  std::uint64_t proposed = 0;
  std::uint64_t accepted = 0;

  double rate() const {
    return proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  }
  MoveCounter& operator+=(const MoveCounter& o) {
    proposed += o.proposed;
    accepted += o.accepted;
    return *this;
  }
  friend bool operator==(const MoveCounter&, const MoveCounter&) = default;
};

enum class Move : std::size_t { birth_plus = 0, death_plus = 1, birth_minus = 2, death_minus = 3 };

inline const char* to_string(Move m) {
  constexpr std::array<const char*, 4> names{"birth_plus", "death_plus", "birth_minus",
                                             "death_minus"};
  return names[static_cast<std::size_t>(m)];
}

struct AcceptanceStats {
  std::array<MoveCounter, 4> moves{};

  MoveCounter& operator[](Move m) { return moves[static_cast<std::size_t>(m)]; }
  const MoveCounter& operator[](Move m) const { return moves[static_cast<std::size_t>(m)]; }

  AcceptanceStats& operator+=(const AcceptanceStats& o) {
    for (std::size_t i = 0; i < moves.size(); ++i) {
      moves[i] += o.moves[i];
    }
    return *this;
  }
  friend bool operator==(const AcceptanceStats&, const AcceptanceStats&) = default;
};

struct ChainState {
  TwoComponentConfiguration current;
  std::uint64_t step_index = 0;
  RngState rng;
  AcceptanceStats stats;
  // log R(boundary, current+, current-); finite whenever the state is feasible.
  double log_density = 0.0;
};

// Starts at the empty configuration. `stream` selects the random stream of this chain.
inline ChainState init(const ChainSpec& spec, std::uint64_t stream = 0) {
  spec.validate();
  if (!check_disjoint(spec.boundary) || !hardcore_feasible(spec.model, spec.boundary)) {
    throw InfeasibleBoundary("boundary configuration violates a hard-core constraint");
  }
  ChainState state;
  state.rng = RngState(spec.seed, stream);
  return state;
}

namespace detail {

inline LogDensity boundary_r(const PotentialModel& m, const TwoComponentConfiguration& current,
                             const TwoComponentConfiguration& boundary, Species s,
                             const Point& x) {
  SpeciesViews views;
  views.plus.add(current.plus).add(boundary.plus);
  views.minus.add(current.minus).add(boundary.minus);
  return r_species(m, views, s, x);
}

} // namespace detail

// One birth-or-death move on a uniformly chosen species, in place.
inline void advance(ChainState& state, const ChainSpec& spec) {
  const double volume = spec.window.volume();
  const Species s = state.rng.below(2) == 0 ? Species::plus : Species::minus;
  const bool birth = state.rng.below(2) == 0;
  Configuration& own = state.current.of(s);
  const std::size_t n = own.size();
  ++state.step_index;

  if (birth) {
    MoveCounter& counter = state.stats[s == Species::plus ? Move::birth_plus : Move::birth_minus];
    ++counter.proposed;
    Point x = uniform_point(spec.window, state.rng);
    const double log_u = std::log(state.rng.uniform_open());
    if (state.current.plus.contains(x) || state.current.minus.contains(x)) {
      return;
    }
    const double rate = spec.model.intensity.rate(x) * volume;
    if (!(rate > 0.0)) {
      return;
    }
    const LogDensity r = detail::boundary_r(spec.model, state.current, spec.boundary, s, x);
    const double log_ratio = std::log(rate) - std::log(static_cast<double>(n + 1)) + r.log_value();
    if (log_u < log_ratio) {
      own.insert(std::move(x));
      state.log_density += r.log_value();
      ++counter.accepted;
    }
    return;
  }

  MoveCounter& counter = state.stats[s == Species::plus ? Move::death_plus : Move::death_minus];
  ++counter.proposed;
  if (n == 0) {
    return;
  }
  const std::size_t i = static_cast<std::size_t>(state.rng.below(n));
  const double log_u = std::log(state.rng.uniform_open());
  Point x = own.remove_at(i);
  const LogDensity r = detail::boundary_r(spec.model, state.current, spec.boundary, s, x);
  const double rate = spec.model.intensity.rate(x) * volume;
  const double log_ratio = std::log(static_cast<double>(n)) - std::log(rate) - r.log_value();
  if (log_u < log_ratio) {
    state.log_density -= r.log_value();
    ++counter.accepted;
  } else {
    own.insert(std::move(x));
  }
}

inline ChainState step(ChainState state, const ChainSpec& spec) {
  advance(state, spec);
  return state;
}

struct RunResult {
  std::vector<TwoComponentConfiguration> samples;
  std::vector<AcceptanceStats> chain_stats;

  AcceptanceStats total_stats() const {
    AcceptanceStats t;
    for (const auto& s : chain_stats) {
      t += s;
    }
    return t;
  }
};

// Single chain on stream `stream`: the state after step t is recorded whenever
// t > burnin and (t - burnin) is a multiple of thin.
inline RunResult run_chain(const ChainSpec& spec, std::uint64_t stream = 0) {
  ChainState state = init(spec, stream);
  RunResult out;
  out.samples.reserve(spec.sample_count());
  for (std::uint64_t t = 1; t <= spec.steps; ++t) {
    advance(state, spec);
    if (t > spec.burnin && (t - spec.burnin) % spec.thin == 0) {
      out.samples.push_back(state.current);
    }
  }
  out.chain_stats.push_back(state.stats);
  return out;
}

inline std::vector<TwoComponentConfiguration> run(const ChainSpec& spec) {
  return run_chain(spec).samples;
}

// Independent chains on streams 0..chains-1, run in parallel and concatenated in
// stream order.
inline RunResult run_chains(const ChainSpec& spec, std::size_t chains) {
  if (chains == 0) {
    throw InvalidArgument("need at least one chain");
  }
  spec.validate();
  std::vector<RunResult> parts(chains);
  parallel_for(chains, [&](std::size_t c) { parts[c] = run_chain(spec, c); });
  RunResult merged;
  for (auto& p : parts) {
    merged.samples.insert(merged.samples.end(), std::make_move_iterator(p.samples.begin()),
                          std::make_move_iterator(p.samples.end()));
    merged.chain_stats.push_back(p.chain_stats.front());
  }
  return merged;
}

} // namespace bigibbs
