#pragma once

#include "priorshift/dataset.hpp"
#include "priorshift/toydata.hpp"

namespace priorshift {

// Analytic importance weight for the toy generator:
//   w(x) = p(x | Target) / p(x | Source).
// Both densities share the uniform x1 factor, so the ratio reduces to the
// x0-marginal GMM ratio; it is evaluated with a shared-max log-sum-exp so far
// tails stay finite. Accepts 1- or 2-dimensional queries (x1 is irrelevant).
double ground_truth_weight(const ToySpec& spec, const std::vector<double>& point);

WeightVector ground_truth_weights(const ToySpec& spec,
                                  const std::vector<std::vector<double>>& queries);

WeightVector ground_truth_weights(const ToySpec& spec, const Dataset& data);

}  // namespace priorshift
