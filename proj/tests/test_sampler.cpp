#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "bigibbs/oracle.hpp"
#include "bigibbs/sampler.hpp"
#include "bigibbs/stats.hpp"

using namespace bigibbs;

namespace {

PotentialModel free_model(double z) {
  return {PairPotential::none(), PairPotential::none(), PairPotential::none(),
          IntensityMeasure(z)};
}

std::vector<double> counts(const std::vector<TwoComponentConfiguration>& s, Species sp) {
  std::vector<double> v;
  for (const auto& g : s) {
    v.push_back(static_cast<double>(g.of(sp).size()));
  }
  return v;
}

} // namespace

TEST_CASE("chain specs are validated", "[sampler]") {
  ChainSpec spec{free_model(1.0), Window::unit(2), 100, 100, 1, {}, 0};
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec.burnin = 0;
  spec.thin = 0;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec.thin = 1;
  spec.boundary.plus.insert(Point({0.5, 0.5}));
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
}

TEST_CASE("init starts empty and rejects infeasible boundaries", "[sampler]") {
  ChainSpec spec{free_model(1.0), Window::unit(2), 1000, 0, 100, {}, 9};
  const ChainState s = init(spec);
  CHECK(s.current.total() == 0);
  CHECK(s.log_density == 0.0);
  CHECK(s.step_index == 0);
  CHECK(init(spec).rng == s.rng);

  spec.model.self_plus = PairPotential::hardcore(0.2);
  spec.boundary.plus = Configuration{Point({1.1, 0.5}), Point({1.2, 0.5})};
  CHECK_THROWS_AS(init(spec), InfeasibleBoundary);
  CHECK_THROWS_AS(run(spec), InfeasibleBoundary);
}

TEST_CASE("run returns (steps - burnin) / thin samples", "[sampler]") {
  const ChainSpec spec{free_model(1.0), Window::unit(2), 1000, 0, 100, {}, 1};
  CHECK(run(spec).size() == 10);
  CHECK(spec.sample_count() == 10);
  const ChainSpec odd{free_model(1.0), Window::unit(2), 1005, 3, 7, {}, 1};
  CHECK(run(odd).size() == odd.sample_count());
  CHECK(odd.sample_count() == 143);
}

TEST_CASE("death on an empty species is rejected", "[sampler]") {
  ChainSpec spec{free_model(1.0), Window::unit(2), 10, 0, 1, {}, 3};
  ChainState s = init(spec);
  for (int i = 0; i < 200 && s.current.total() == 0; ++i) {
    const ChainState before = s;
    advance(s, spec);
    const auto& st = s.stats;
    if (st[Move::death_plus].proposed + st[Move::death_minus].proposed >
        before.stats[Move::death_plus].proposed + before.stats[Move::death_minus].proposed) {
      CHECK(s.current == before.current);
    }
  }
  CHECK(s.stats[Move::death_plus].accepted + s.stats[Move::death_minus].accepted == 0);
}

TEST_CASE("free chain has Poisson counts per species", "[sampler]") {
  const ChainSpec spec{free_model(2.0), Window::unit(2), 10000 * 50 + 2000, 2000, 50, {}, 12};
  const auto samples = run(spec);
  REQUIRE(samples.size() == 10000);
  for (Species sp : {Species::plus, Species::minus}) {
    const auto c = counts(samples, sp);
    const auto plain = EstimateWithError::from_values(c);
    const auto e = batch_means(c);
    const double var = plain.std_err * plain.std_err * static_cast<double>(c.size());
    INFO(to_string(sp) << " mean " << e.estimate << " var " << var);
    CHECK(std::fabs(e.estimate - 2.0) < 3.0 * e.std_err);
    CHECK(var / e.estimate >= 0.9);
    CHECK(var / e.estimate <= 1.1);
  }
}

TEST_CASE("hard-core support is never violated", "[sampler]") {
  const PotentialModel m{PairPotential::hardcore(0.2), PairPotential::none(), PairPotential::none(),
                         IntensityMeasure(1.0)};
  const ChainSpec spec{m, Window::unit(2), 100000, 1000, 10, {}, 5};
  const auto samples = run(spec);
  std::size_t violations = 0;
  for (const auto& g : samples) {
    violations += check_disjoint(g) ? 0 : 1;
    for (const Point& x : g.plus) {
      for (const Point& y : g.minus) {
        violations += distance(x, y) <= 0.2 ? 1 : 0;
      }
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("tracked log density equals R of the current state", "[sampler]") {
  const PotentialModel m{PairPotential::step(0.7, 0.3), PairPotential::soft_core(0.4, 0.2, 2.0),
                         PairPotential::step(-0.3, 0.1), IntensityMeasure(3.0)};
  TwoComponentConfiguration boundary{Configuration{Point({1.05, 0.5})},
                                     Configuration{Point({-0.05, 0.2})}};
  const ChainSpec spec{m, Window::unit(2), 5000, 0, 1, boundary, 8};
  ChainState s = init(spec);
  for (int i = 0; i < 5000; ++i) {
    advance(s, spec);
  }
  const LogDensity direct = R_full(m, boundary, s.current.plus, s.current.minus);
  CHECK(s.log_density == Catch::Approx(direct.log_value()).epsilon(1e-9).margin(1e-9));
}

TEST_CASE("chains are reproducible and independent across streams", "[sampler]") {
  const PotentialModel m{PairPotential::step(1.0, 0.3), PairPotential::none(),
                         PairPotential::none(), IntensityMeasure(1.0)};
  const ChainSpec spec{m, Window::unit(2), 20000, 1000, 100, {}, 77};
  const RunResult a = run_chains(spec, 3);
  const RunResult b = run_chains(spec, 3);
  CHECK(a.samples == b.samples);
  CHECK(a.chain_stats == b.chain_stats);
  CHECK(a.samples.size() == 3 * spec.sample_count());
  CHECK(run_chain(spec, 0).samples == std::vector<TwoComponentConfiguration>(
                                          a.samples.begin(), a.samples.begin() + 190));
  CHECK_FALSE(run_chain(spec, 1).samples == run_chain(spec, 0).samples);
  const auto rate = a.total_stats()[Move::birth_plus].rate();
  CHECK(rate > 0.0);
  CHECK(rate < 1.0);
}

// Window cut into 4 cells; states with at most 2 points per species are lumped by
// (cell counts of plus, cell counts of minus). Stationarity of the lumped flow:
// pi(a) P(a, b) and pi(b) P(b, a) are the same transition counts in both directions.
TEST_CASE("birth-death moves satisfy detailed balance on a cell lumping", "[sampler]") {
  const PotentialModel m{PairPotential::step(1.0, 0.4), PairPotential::step(0.5, 0.3),
                         PairPotential::none(), IntensityMeasure(0.6)};
  const Window w = Window::unit(2);
  const ChainSpec spec{m, w, 2, 0, 1, {}, 31};
  auto cell = [](const Point& p) { return (p[0] < 0.5 ? 0 : 1) + (p[1] < 0.5 ? 0 : 2); };
  auto key = [&](const TwoComponentConfiguration& g) {
    std::array<int, 8> k{};
    for (const Point& p : g.plus) {
      ++k[cell(p)];
    }
    for (const Point& p : g.minus) {
      ++k[4 + cell(p)];
    }
    return k;
  };
  std::map<std::pair<std::array<int, 8>, std::array<int, 8>>, double> flow;
  ChainState s = init(spec);
  const int steps = 2000000;
  for (int i = 0; i < steps; ++i) {
    const auto before = key(s.current);
    const bool small = s.current.plus.size() <= 2 && s.current.minus.size() <= 2;
    advance(s, spec);
    const auto after = key(s.current);
    if (small && s.current.plus.size() <= 2 && s.current.minus.size() <= 2 && before != after) {
      flow[{before, after}] += 1.0;
    }
  }
  int tested = 0;
  for (const auto& [edge, n_ab] : flow) {
    if (edge.first > edge.second) {
      continue;
    }
    const auto rev = flow.find({edge.second, edge.first});
    const double n_ba = rev == flow.end() ? 0.0 : rev->second;
    if (n_ab + n_ba < 200) {
      continue;
    }
    ++tested;
    // Under balance the split of crossings is Binomial(n, 1/2) up to mixing effects.
    const double z = (n_ab - n_ba) / std::sqrt(n_ab + n_ba);
    INFO("edge flows " << n_ab << " vs " << n_ba);
    CHECK(std::fabs(z) < 3.0);
  }
  CHECK(tested >= 20);
}

TEST_CASE("chain occupancy matches oracle term probabilities", "[sampler]") {
  // P(|plus| = n, |minus| = k) = term(n, k) / Z.
  const PotentialModel m{PairPotential::step(1.0, 0.3), PairPotential::none(),
                         PairPotential::none(), IntensityMeasure(0.5)};
  const Window w = Window::unit(2);
  const PartitionResult z = partition_function(m, w, SeriesTruncation{6, 100000}, RngState(4));
  const ChainSpec spec{m, w, 20000 * 20 + 2000, 2000, 20, {}, 41};
  const auto samples = run(spec);
  for (int n = 0; n <= 2; ++n) {
    for (int k = 0; k <= 2; ++k) {
      std::vector<double> ind;
      for (const auto& g : samples) {
        ind.push_back(g.plus.size() == static_cast<std::size_t>(n) &&
                              g.minus.size() == static_cast<std::size_t>(k)
                          ? 1.0
                          : 0.0);
      }
      const auto e = batch_means(ind);
      const double p = z.term(n, k).value / z.value;
      const double se = std::hypot(e.std_err, z.term(n, k).std_err / z.value);
      INFO("n " << n << " k " << k << " chain " << e.estimate << " oracle " << p);
      CHECK(std::fabs(e.estimate - p) < 3.0 * se);
    }
  }
}
