#pragma once

#include "priorshift/dataset.hpp"
#include "priorshift/knn.hpp"

namespace priorshift {

// p(domain = Target | z) for each attribute class, under a uniform domain
// prior: probs_target[z] = prior_target[z] / (prior_source[z] + prior_target[z]).
// A class absent from both domains (0/0) is defined as 0.5.
struct DomainPosterior {
  std::vector<double> probs_target;
};

DomainPosterior domain_posterior(const AttributePrior& prior_source,
                                 const AttributePrior& prior_target);

// Per-sample importance weights estimated from source data and the two
// attribute priors alone:
//   w_i = sum_z p(T|z) p_hat(z|x_i) / sum_z p(S|z) p_hat(z|x_i)
// with p_hat from the leave-one-out k-NN posterior. Identical priors give the
// all-ones vector exactly: every domain-posterior entry is then exactly 0.5
// and both sums are accumulated term-by-term in the same order, so numerator
// and denominator are bitwise equal.
WeightVector estimate_weights(const Dataset& source,
                              const AttributePrior& prior_source,
                              const AttributePrior& prior_target, int k,
                              KnnIndex::Engine engine = KnnIndex::Engine::BruteForce);

// The attribute-only baseline: w_i = prior_target[z_i] / prior_source[z_i]
// using each sample's own recorded attribute.
WeightVector straightforward_weights(const Dataset& source,
                                     const AttributePrior& prior_source,
                                     const AttributePrior& prior_target);

// Library default for k when a config does not set one.
int default_knn_k(int n_source);

// Optional rescale to mean 1 (off by default everywhere; numerical
// convenience for downstream trainers).
WeightVector normalize_to_mean_one(const WeightVector& w);

}  // namespace priorshift
