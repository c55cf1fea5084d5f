#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "priorshift/dataset.hpp"

namespace priorshift {

// Stream tags for deriving independent RNG substreams per logical purpose.
namespace purpose {
inline constexpr std::uint64_t Toy = 1;
inline constexpr std::uint64_t Overlap = 2;
inline constexpr std::uint64_t UlsifBasis = 3;
inline constexpr std::uint64_t CvFolds = 4;
inline constexpr std::uint64_t Diagnostic = 5;
}  // namespace purpose

// Generative description of the synthetic benchmark: a Gaussian mixture on
// x0 with per-domain mixing ratios, a uniform nuisance coordinate x1, and a
// sigmoidal label posterior p(y=1|x) = 1 / (1 + exp(-gain * (x1 - sin x0))).
struct ToySpec {
  std::vector<double> centroids;      // strictly increasing
  double sigma_toy = 0.0;             // shared component std deviation
  std::vector<double> mixing_source;  // p(z | Source)
  std::vector<double> mixing_target;  // p(z | Target)
  double x1_lo = -2.0, x1_hi = 2.0;
  double posterior_gain = 5.0;
  int n_source = 600, n_target = 600;
  std::uint64_t seed = 1;

  void validate() const;
};

// The default five-centroid spec with a named mixing row: "toy-A", "toy-B",
// or "toy-C".
ToySpec builtin_toy_spec(const std::string& name, std::uint64_t seed = 1);

// Every sample index draws from its own derived stream in the fixed order
// z, x0, x1, y — bitwise identical across runs and platforms.
Dataset generate_toy(const ToySpec& spec, Domain domain);

// One-dimensional two-class demo: unit-variance Gaussians at +-separation/2,
// attributes drawn from prior_source, labels unused (0). prior_target is
// validated here so callers assemble a coherent (dataset, priors) triple for
// the weight estimators.
Dataset generate_overlap_demo(double mean_separation,
                              const AttributePrior& prior_source,
                              const AttributePrior& prior_target, int n,
                              std::uint64_t seed);

// p(x | domain) for the toy spec: the x0-marginal GMM times the uniform
// density on x1 (zero outside the x1 range).
double true_density(const ToySpec& spec, Domain domain,
                    const std::vector<double>& point);

}  // namespace priorshift
