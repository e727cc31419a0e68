#pragma once

// Fixed set of small models on the unit square used by the regression and acceptance suites.
// All are nonnegative, so both oracles apply to each of them.

#include <string>
#include <vector>

#include "bigibbs/energy.hpp"
#include "bigibbs/error.hpp"
#include "bigibbs/intensity.hpp"

namespace bigibbs {

struct RegressionModel {
  std::string name;
  PotentialModel model;
};

inline std::vector<RegressionModel> regression_models() {
  return {
      {"free", {PairPotential::none(), PairPotential::none(), PairPotential::none(),
                IntensityMeasure(1.0)}},
      {"cross-step", {PairPotential::step(1.0, 0.3), PairPotential::none(), PairPotential::none(),
                      IntensityMeasure(0.5)}},
      {"hardcore-softcore",
       {PairPotential::hardcore(0.1), PairPotential::soft_core(0.5, 0.2, 4.0),
        PairPotential::step(0.7, 0.15), IntensityMeasure(1.0)}},
  };
}

inline const RegressionModel& regression_model(const std::string& name) {
  static const std::vector<RegressionModel> models = regression_models();
  for (const auto& m : models) {
    if (m.name == name) {
      return m;
    }
  }
  throw InvalidArgument("unknown regression model '" + name + "'");
}

} // namespace bigibbs
