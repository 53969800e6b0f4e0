#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dddr/model.hpp"

namespace dddr {

/// Demand scenarios with their probabilities and provenance.
struct ScenarioSet {
  Matrix demands;                    // [scenario][customer]
  std::vector<double> probabilities; // empty means uniform
  std::uint64_t seed = 0;
  std::string generator;

  std::size_t size() const { return demands.size(); }
  double probability(std::size_t w) const {
    return probabilities.empty() ? 1.0 / static_cast<double>(demands.size()) : probabilities[w];
  }
  /// Throws std::invalid_argument when probabilities or demands are malformed.
  void check(std::size_t customers) const;
};

}  // namespace dddr
