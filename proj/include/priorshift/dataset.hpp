#pragma once

#include <optional>
#include <string>
#include <vector>

namespace priorshift {

enum class Domain { Source, Target };

std::string domain_name(Domain d);

struct LabeledSample {
  std::vector<double> features;  // dimension m
  int label = 0;                 // class index; -1 permitted on Target data
  int attribute = 0;             // attribute-class index in [0, K)
};

// Immutable after construction; validate() enforces the container invariants.
struct Dataset {
  std::vector<LabeledSample> samples;
  int dim = 0;
  int num_classes = 0;
  int num_attributes = 0;
  std::optional<Domain> domain_tag;

  int size() const { return static_cast<int>(samples.size()); }
  const std::vector<double>& x(int i) const { return samples[i].features; }
  int label(int i) const { return samples[i].label; }
  int attribute(int i) const { return samples[i].attribute; }

  // Throws std::invalid_argument naming the first offending sample.
  void validate() const;
};

struct AttributePrior {
  std::vector<double> probs;  // p(z | domain), length K

  int size() const { return static_cast<int>(probs.size()); }
  // Entries in [0,1], summing to 1 within 1e-9.
  void validate() const;
};

struct WeightVector {
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
  double operator[](int i) const { return weights[i]; }
  // Entries finite and >= 0, length matching n when given.
  void validate(int expected_size = -1) const;
};

// probs[z] = count(attribute == z) / n.
AttributePrior empirical_attribute_prior(const Dataset& data);

}  // namespace priorshift
