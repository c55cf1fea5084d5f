#include "priorshift/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace priorshift {

std::string domain_name(Domain d) {
  return d == Domain::Source ? "Source" : "Target";
}

void Dataset::validate() const {
  if (dim <= 0) throw std::invalid_argument("dataset: dim must be positive");
  if (num_classes <= 0) throw std::invalid_argument("dataset: num_classes must be positive");
  if (num_attributes <= 0) throw std::invalid_argument("dataset: num_attributes must be positive");
  bool target = domain_tag.has_value() && *domain_tag == Domain::Target;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const LabeledSample& s = samples[i];
    std::string at = " at sample " + std::to_string(i);
    if (static_cast<int>(s.features.size()) != dim)
      throw std::invalid_argument("dataset: feature dimension mismatch" + at);
    for (double v : s.features)
      if (!std::isfinite(v))
        throw std::invalid_argument("dataset: non-finite feature" + at);
    if (s.label >= num_classes || s.label < (target ? -1 : 0))
      throw std::invalid_argument("dataset: label " + std::to_string(s.label) +
                                  " out of range [0," + std::to_string(num_classes) + ")" + at);
    if (s.attribute < 0 || s.attribute >= num_attributes)
      throw std::invalid_argument("dataset: attribute " + std::to_string(s.attribute) +
                                  " out of range [0," + std::to_string(num_attributes) + ")" + at);
  }
}

void AttributePrior::validate() const {
  if (probs.empty()) throw std::invalid_argument("prior: empty");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("prior: entry " + std::to_string(p) + " outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("prior: entries sum to " + std::to_string(sum) + ", not 1");
}

void WeightVector::validate(int expected_size) const {
  if (expected_size >= 0 && size() != expected_size)
    throw std::invalid_argument("weights: length " + std::to_string(size()) +
                                " does not match dataset size " + std::to_string(expected_size));
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (!std::isfinite(weights[i]) || weights[i] < 0.0)
      throw std::invalid_argument("weights: entry " + std::to_string(i) +
                                  " is negative or non-finite");
}

AttributePrior empirical_attribute_prior(const Dataset& data) {
  if (data.samples.empty())
    throw std::invalid_argument("empirical_attribute_prior: empty dataset");
  std::vector<double> counts(data.num_attributes, 0.0);
  for (const LabeledSample& s : data.samples) counts[s.attribute] += 1.0;
  double n = static_cast<double>(data.size());
  for (double& c : counts) c /= n;
  return AttributePrior{counts};
}

}  // namespace priorshift
