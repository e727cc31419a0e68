#include <catch_amalgamated.hpp>

#include <string>

#include "bigibbs/experiment.hpp"

using namespace bigibbs;

namespace {

const std::string kMinimal = R"(dimension = 2
seed = 0
[window]
lower = 0, 0
upper = 1, 1
[intensity]
z = 1
)";

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  throw;
}

bool has_kind(const ConfigError& e, ConfigIssue::Kind k) {
  for (const auto& i : e.issues()) {
    if (i.kind == k) {
      return true;
    }
  }
  return false;
}

} // namespace

TEST_CASE("minimal config fills defaults and echoes back", "[experiment]") {
  const ExperimentConfig c = parse_config(kMinimal);
  CHECK(c.dimension == 2);
  CHECK(c.window == Window::unit(2));
  CHECK(c.z == 1.0);
  CHECK(c.density == "constant");
  CHECK(c.cross.kind == "none");
  CHECK(c.self_plus.kind == "none");
  CHECK(c.self_minus.kind == "none");
  CHECK(c.seed == 0);
  CHECK(c.sampler.steps == 100000);
  REQUIRE(c.sampler.burnin.has_value());
  CHECK(*c.sampler.burnin == ChainSpec::default_burnin(c.model(), c.window));
  CHECK(c.sampler.thin == 50);
  CHECK(c.oracle.n_max == 6);
  CHECK(c.verify.identity_instances == 500);

  const std::string echo = echo_config(c);
  CHECK(echo.find("burnin = ") != std::string::npos);
  CHECK(echo.find("thin = 50") != std::string::npos);
  CHECK(parse_config(echo) == c);
  CHECK(echo_config(parse_config(echo)) == echo);
}

TEST_CASE("full config round-trips", "[experiment]") {
  const std::string text = R"(
# every section populated
dimension = 2
seed = 99
[window]
lower = -1, 0
upper = 1, 0.5
[intensity]
z = 0.3
density = linear-x1
grid = 32
[potential.cross]
kind = soft-core-power
amplitude = 0.25
range = 0.1
exponent = 6
[potential.self_plus]
kind = hardcore
range = 0.05
[potential.self_minus]
kind = step
amplitude = -0.5
range = 0.2
[boundary]
plus = 1.2, 0.1; -1.5, 0.2
minus = 0, 0.75
[sampler]
steps = 5000
burnin = 100
thin = 7
chains = 3
[oracle]
nmax = 4
mc_per_term = 1000
samples = 200
[verify]
h = exp-linear
sigma_points = 4
ruelle_draws = 5
identity_instances = 20
radius = 0.125
slope = 1.5
subwindow.lower = -1, 0
subwindow.upper = 0, 0.5
)";
  const ExperimentConfig c = parse_config(text);
  CHECK(c.window == Window({-1.0, 0.0}, {1.0, 0.5}));
  CHECK(c.density == "linear-x1");
  CHECK(c.cross.kind == "soft-core-power");
  CHECK(c.cross.exponent == 6.0);
  CHECK(c.self_minus.amplitude == -0.5);
  CHECK(c.boundary.plus.size() == 2);
  CHECK(c.boundary.minus.size() == 1);
  CHECK(c.sampler.chains == 3);
  CHECK(c.oracle.mc_per_term == 1000);
  CHECK(c.verify.h == "exp-linear");
  REQUIRE(c.verify.subwindow.has_value());
  CHECK(c.verify.subwindow->upper()[0] == 0.0);
  CHECK(parse_config(echo_config(c)) == c);
  CHECK_FALSE(c.model().nonnegative());
  CHECK(c.chain_spec().burnin == 100);
}

TEST_CASE("JSON input is equivalent to text input", "[experiment]") {
  const std::string json = R"({
    "dimension": 2, "seed": 0,
    "window": {"lower": [0, 0], "upper": [1, 1]},
    "intensity": {"z": 1},
    "potential": {"cross": {"kind": "step", "amplitude": 1, "range": 0.3}}
  })";
  const ExperimentConfig a = parse_config(json);
  const ExperimentConfig b = parse_config(kMinimal + "[potential.cross]\nkind = step\n"
                                                     "amplitude = 1\nrange = 0.3\n");
  CHECK(a == b);
  CHECK(parse_config(echo_config(a)) == a);
  const ConfigError e = config_error("{\"dimension\": 2,");
  CHECK(has_kind(e, ConfigIssue::Kind::parse));
}

TEST_CASE("validation names the offending field", "[experiment]") {
  SECTION("negative z") {
    const ConfigError e = config_error(R"(dimension = 2
[window]
lower = 0, 0
upper = 1, 1
[intensity]
z = -1
)");
    CHECK(e.names("intensity.z"));
    CHECK(has_kind(e, ConfigIssue::Kind::validation));
  }
  SECTION("empty window") {
    const ConfigError e = config_error(R"(dimension = 2
[window]
lower = 0, 0
upper = 0, 1
[intensity]
z = 1
)");
    CHECK(has_kind(e, ConfigIssue::Kind::validation));
    CHECK(std::string(e.what()).find("window") != std::string::npos);
  }
  SECTION("infinite soft-core amplitude") {
    const ConfigError e = config_error(kMinimal + "[potential.cross]\nkind = soft-core-power\n"
                                                  "amplitude = inf\nrange = 0.1\nexponent = 2\n");
    CHECK(e.names("potential.cross.amplitude"));
  }
  SECTION("steps not above burnin") {
    const ConfigError e = config_error(kMinimal + "[sampler]\nsteps = 10\nburnin = 10\n");
    CHECK(e.names("sampler.steps"));
  }
  SECTION("boundary violating a hard core") {
    const ConfigError e = config_error(kMinimal + "[potential.self_plus]\nkind = hardcore\n"
                                                  "range = 0.5\n[boundary]\n"
                                                  "plus = 1.1, 0.5; 1.2, 0.5\n");
    CHECK(e.names("boundary.plus"));
  }
}

TEST_CASE("every problem is reported at once", "[experiment]") {
  const ConfigError e = config_error(R"(dimension = 2
seed = -4
colour = blue
[window]
lower = 0, 0
upper = 1, 1
[intensity]
z = -1
[potential.cross]
kind = wobbly
[sampler]
thin = zero
)");
  CHECK(e.issues().size() >= 4);
  CHECK(e.names("intensity.z"));
  CHECK(e.names("potential.cross.kind"));
  CHECK(e.names("sampler.thin"));
  CHECK(has_kind(e, ConfigIssue::Kind::parse));
  bool line_reported = false;
  for (const auto& i : e.issues()) {
    line_reported = line_reported || i.line == 3;
  }
  CHECK(line_reported);
}

TEST_CASE("malformed lines are parse errors with line numbers", "[experiment]") {
  const ConfigError e = config_error("dimension = 2\nthis line has no equals sign\n[window\n");
  CHECK(has_kind(e, ConfigIssue::Kind::parse));
  bool line2 = false;
  for (const auto& i : e.issues()) {
    line2 = line2 || (i.line == 2 && i.kind == ConfigIssue::Kind::parse);
  }
  CHECK(line2);
  CHECK(std::string(e.what()).find("line 2") != std::string::npos);
}
