#include "priorshift/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace priorshift {

DomainPosterior domain_posterior(const AttributePrior& prior_source,
                                 const AttributePrior& prior_target) {
  prior_source.validate();
  prior_target.validate();
  if (prior_source.size() != prior_target.size())
    throw std::invalid_argument("domain_posterior: prior lengths differ (" +
                                std::to_string(prior_source.size()) + " vs " +
                                std::to_string(prior_target.size()) + ")");
  DomainPosterior post;
  post.probs_target.resize(prior_source.size());
  for (int z = 0; z < prior_source.size(); ++z) {
    double s = prior_source.probs[z], t = prior_target.probs[z];
    post.probs_target[z] = (s + t > 0.0) ? t / (s + t) : 0.5;
  }
  return post;
}

WeightVector estimate_weights(const Dataset& source,
                              const AttributePrior& prior_source,
                              const AttributePrior& prior_target, int k,
                              KnnIndex::Engine engine) {
  source.validate();
  if (source.samples.empty())
    throw std::invalid_argument("estimate_weights: empty source dataset");
  if (prior_source.size() != source.num_attributes)
    throw std::invalid_argument("estimate_weights: prior length does not match num_attributes");
  for (int z = 0; z < prior_source.size(); ++z)
    if (prior_source.probs[z] == 0.0 && prior_target.probs[z] > 0.0)
      throw std::invalid_argument(
          "estimate_weights: attribute class " + std::to_string(z) +
          " has zero source prior but positive target prior; weights would be unbounded");

  DomainPosterior dp = domain_posterior(prior_source, prior_target);
  KnnPosteriorEstimator est(source, k, /*leave_one_out=*/true, engine);

  WeightVector w;
  w.weights.resize(source.size());
  for (int i = 0; i < source.size(); ++i) {
    std::vector<double> q = est.posterior_at(i);
    double num = 0.0, den = 0.0;
    for (int z = 0; z < prior_source.size(); ++z) {
      double t = dp.probs_target[z];
      num += q[z] * t;
      den += q[z] * (1.0 - t);
    }
    if (den == 0.0) {
      std::string classes;
      for (int z = 0; z < prior_source.size(); ++z)
        if (q[z] > 0.0) classes += (classes.empty() ? "" : ",") + std::to_string(z);
      throw std::runtime_error("estimate_weights: zero denominator at sample " +
                               std::to_string(i) + " (posterior supported on classes {" +
                               classes + "} with no source mass)");
    }
    w.weights[i] = num / den;
  }
  w.validate(source.size());
  return w;
}

WeightVector straightforward_weights(const Dataset& source,
                                     const AttributePrior& prior_source,
                                     const AttributePrior& prior_target) {
  source.validate();
  if (source.samples.empty())
    throw std::invalid_argument("straightforward_weights: empty source dataset");
  if (prior_source.size() != prior_target.size() ||
      prior_source.size() != source.num_attributes)
    throw std::invalid_argument("straightforward_weights: prior length mismatch");
  prior_source.validate();
  prior_target.validate();

  WeightVector w;
  w.weights.resize(source.size());
  for (int i = 0; i < source.size(); ++i) {
    int z = source.attribute(i);
    if (prior_source.probs[z] == 0.0)
      throw std::invalid_argument("straightforward_weights: attribute class " +
                                  std::to_string(z) + " occurs at sample " +
                                  std::to_string(i) + " but has zero source prior");
    w.weights[i] = prior_target.probs[z] / prior_source.probs[z];
  }
  w.validate(source.size());
  return w;
}

int default_knn_k(int n_source) {
  if (n_source <= 1) return 1;
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_source))));
}

WeightVector normalize_to_mean_one(const WeightVector& w) {
  w.validate();
  double sum = 0.0;
  for (double v : w.weights) sum += v;
  if (sum <= 0.0)
    throw std::invalid_argument("normalize_to_mean_one: weights sum to zero");
  double scale = static_cast<double>(w.size()) / sum;
  WeightVector out = w;
  for (double& v : out.weights) v *= scale;
  return out;
}

}  // namespace priorshift
