#include "priorshift/toydata.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "priorshift/rng.hpp"

namespace priorshift {

namespace {

void validate_mixing(const std::vector<double>& mix, std::size_t want,
                     const char* which) {
  if (mix.size() != want)
    throw std::invalid_argument(std::string("toy spec: ") + which +
                                " length does not match centroids");
  AttributePrior{mix}.validate();
}

}  // namespace

void ToySpec::validate() const {
  if (centroids.empty()) throw std::invalid_argument("toy spec: no centroids");
  for (std::size_t i = 1; i < centroids.size(); ++i)
    if (!(centroids[i] > centroids[i - 1]))
      throw std::invalid_argument("toy spec: centroids must be strictly increasing");
  if (!(sigma_toy > 0.0))
    throw std::invalid_argument("toy spec: sigma_toy must be positive");
  validate_mixing(mixing_source, centroids.size(), "mixing_source");
  validate_mixing(mixing_target, centroids.size(), "mixing_target");
  if (!(x1_hi > x1_lo))
    throw std::invalid_argument("toy spec: degenerate x1 range");
  if (!(posterior_gain > 0.0))
    throw std::invalid_argument("toy spec: posterior_gain must be positive");
  if (n_source <= 0 || n_target <= 0)
    throw std::invalid_argument("toy spec: sample counts must be positive");
}

ToySpec builtin_toy_spec(const std::string& name, std::uint64_t seed) {
  const double pi = std::numbers::pi;
  ToySpec spec;
  spec.centroids = {-0.75 * pi, -0.5 * pi, 0.0, 0.5 * pi, 0.75 * pi};
  spec.sigma_toy = 0.2 * pi;
  spec.seed = seed;
  if (name == "toy-A") {
    spec.mixing_source = {0.1, 0.1, 0.2, 0.4, 0.2};
    spec.mixing_target = {0.2, 0.4, 0.2, 0.1, 0.1};
  } else if (name == "toy-B") {
    spec.mixing_source = {0.05, 0.05, 0.1, 0.5, 0.3};
    spec.mixing_target = {0.3, 0.5, 0.1, 0.05, 0.05};
  } else if (name == "toy-C") {
    spec.mixing_source = {0.05, 0.05, 0.1, 0.1, 0.7};
    spec.mixing_target = {0.7, 0.1, 0.1, 0.05, 0.05};
  } else {
    throw std::invalid_argument("unknown toy spec '" + name +
                                "' (expected toy-A, toy-B, or toy-C)");
  }
  return spec;
}

Dataset generate_toy(const ToySpec& spec, Domain domain) {
  spec.validate();
  const std::vector<double>& mix =
      domain == Domain::Source ? spec.mixing_source : spec.mixing_target;
  int n = domain == Domain::Source ? spec.n_source : spec.n_target;

  Dataset data;
  data.dim = 2;
  data.num_classes = 2;
  data.num_attributes = static_cast<int>(spec.centroids.size());
  data.domain_tag = domain;
  data.samples.resize(n);
  std::uint64_t dtag = domain == Domain::Source ? 0 : 1;
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::stream(spec.seed, purpose::Toy, dtag, static_cast<std::uint64_t>(i));
    int z = rng.categorical(mix);
    double x0 = spec.centroids[z] + spec.sigma_toy * rng.normal();
    double x1 = rng.uniform(spec.x1_lo, spec.x1_hi);
    double p1 = 1.0 / (1.0 + std::exp(-spec.posterior_gain * (x1 - std::sin(x0))));
    int y = rng.uniform01() < p1 ? 1 : 0;
    data.samples[i] = LabeledSample{{x0, x1}, y, z};
  }
  data.validate();
  return data;
}

Dataset generate_overlap_demo(double mean_separation,
                              const AttributePrior& prior_source,
                              const AttributePrior& prior_target, int n,
                              std::uint64_t seed) {
  prior_source.validate();
  prior_target.validate();
  if (prior_source.size() != 2 || prior_target.size() != 2)
    throw std::invalid_argument("overlap demo: priors must have exactly 2 classes");
  if (n <= 0) throw std::invalid_argument("overlap demo: n must be positive");

  Dataset data;
  data.dim = 1;
  data.num_classes = 2;
  data.num_attributes = 2;
  data.domain_tag = Domain::Source;
  data.samples.resize(n);
  double mu[2] = {-mean_separation / 2.0, mean_separation / 2.0};
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, purpose::Overlap, 0, static_cast<std::uint64_t>(i));
    int z = rng.categorical(prior_source.probs);
    double x = mu[z] + rng.normal();
    data.samples[i] = LabeledSample{{x}, 0, z};
  }
  data.validate();
  return data;
}

double true_density(const ToySpec& spec, Domain domain,
                    const std::vector<double>& point) {
  spec.validate();
  if (point.size() != 2)
    throw std::invalid_argument("true_density: point must be 2-dimensional");
  double x0 = point[0], x1 = point[1];
  if (x1 < spec.x1_lo || x1 > spec.x1_hi) return 0.0;
  const std::vector<double>& mix =
      domain == Domain::Source ? spec.mixing_source : spec.mixing_target;
  double norm = 1.0 / (spec.sigma_toy * std::sqrt(2.0 * std::numbers::pi));
  double g = 0.0;
  for (std::size_t z = 0; z < mix.size(); ++z) {
    double d = (x0 - spec.centroids[z]) / spec.sigma_toy;
    g += mix[z] * norm * std::exp(-0.5 * d * d);
  }
  return g / (spec.x1_hi - spec.x1_lo);
}

}  // namespace priorshift
