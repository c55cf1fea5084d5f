#pragma once

#include <vector>

#include "priorshift/dataset.hpp"
#include "priorshift/kernel_classifier.hpp"

namespace priorshift {

// sqrt(mean((estimated - reference)^2)); throws on length mismatch or empty.
double weight_rmse(const std::vector<double>& estimated,
                   const std::vector<double>& reference);

// Fraction of samples with predict(model, x_i) == y_i.
double accuracy(const KernelModel& model, const Dataset& data);

double mean(const std::vector<double>& values);
double sample_std(const std::vector<double>& values);  // n-1 denominator

}  // namespace priorshift
