#include "priorshift/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace priorshift {

double weight_rmse(const std::vector<double>& estimated,
                   const std::vector<double>& reference) {
  if (estimated.empty())
    throw std::invalid_argument("weight_rmse: empty input");
  if (estimated.size() != reference.size())
    throw std::invalid_argument("weight_rmse: length mismatch (" +
                                std::to_string(estimated.size()) + " vs " +
                                std::to_string(reference.size()) + ")");
  double acc = 0.0;
  for (std::size_t i = 0; i < estimated.size(); ++i) {
    double d = estimated[i] - reference[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(estimated.size()));
}

double accuracy(const KernelModel& model, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("accuracy: empty dataset");
  int correct = 0;
  for (int i = 0; i < data.size(); ++i)
    if (predict(model, data.x(i)) == data.label(i)) ++correct;
  return static_cast<double>(correct) / data.size();
}

double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean: empty input");
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

double sample_std(const std::vector<double>& values) {
  if (values.size() < 2)
    throw std::invalid_argument("sample_std: need at least 2 values");
  double m = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

}  // namespace priorshift
