#include "priorshift/ground_truth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace priorshift {

double ground_truth_weight(const ToySpec& spec, const std::vector<double>& point) {
  spec.validate();
  if (point.empty() || point.size() > 2)
    throw std::invalid_argument("ground_truth_weight: query must be 1- or 2-dimensional");
  double x0 = point[0];
  std::size_t K = spec.centroids.size();
  std::vector<double> e(K);
  double m = -HUGE_VAL;
  for (std::size_t z = 0; z < K; ++z) {
    double d = (x0 - spec.centroids[z]) / spec.sigma_toy;
    e[z] = -0.5 * d * d;
    m = std::max(m, e[z]);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t z = 0; z < K; ++z) {
    double c = std::exp(e[z] - m);
    num += spec.mixing_target[z] * c;
    den += spec.mixing_source[z] * c;
  }
  if (den == 0.0)
    throw std::runtime_error("ground_truth_weight: source density underflows at x0=" +
                             std::to_string(x0));
  return num / den;
}

WeightVector ground_truth_weights(const ToySpec& spec,
                                  const std::vector<std::vector<double>>& queries) {
  WeightVector w;
  w.weights.reserve(queries.size());
  for (const std::vector<double>& q : queries)
    w.weights.push_back(ground_truth_weight(spec, q));
  w.validate();
  return w;
}

WeightVector ground_truth_weights(const ToySpec& spec, const Dataset& data) {
  WeightVector w;
  w.weights.reserve(data.samples.size());
  for (const LabeledSample& s : data.samples)
    w.weights.push_back(ground_truth_weight(spec, s.features));
  w.validate(data.size());
  return w;
}

}  // namespace priorshift
