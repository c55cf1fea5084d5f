#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "priorshift/dataset.hpp"

namespace priorshift {

// Least-squares density-ratio fit w(x) = sum_l alpha_l exp(-|x - c_l|^2 / 2 sigma^2),
// the target-data-requiring baseline the attribute method is compared against.
struct UlsifModel {
  Eigen::MatrixXd centers;  // one basis center per row
  Eigen::VectorXd alphas;   // nonnegative after clipping
  double sigma = 0.0;
  double lambda = 0.0;
  // (sigma, lambda, leave-one-out score) for every grid cell, selection order.
  std::vector<std::tuple<double, double, double>> grid_scores;
};

// Basis centers are the first min(num_basis, n_target) target samples after a
// seeded shuffle. For each grid cell the ridge system (H + lambda I) alpha = h
// is solved, model selection uses the closed-form leave-one-out score, and the
// winning cell is refit on all data with alphas clipped to >= 0.
UlsifModel fit_ulsif(const Dataset& source, const Dataset& target, int num_basis,
                     const std::vector<double>& sigma_grid,
                     const std::vector<double>& lambda_grid, std::uint64_t seed);

double predict_ulsif(const UlsifModel& model, const std::vector<double>& query);
WeightVector predict_ulsif(const UlsifModel& model, const Dataset& data);

// Median of pairwise Euclidean distances (lower-middle element), computed over
// at most the first 1000 rows; the usual kernel-width heuristic.
double median_pairwise_distance(const std::vector<std::vector<double>>& rows);
double median_pairwise_distance(const Dataset& a);
double median_pairwise_distance(const Dataset& a, const Dataset& b);

inline constexpr int kDefaultUlsifBasis = 100;
std::vector<double> default_ulsif_sigma_grid(double median_distance);
std::vector<double> default_ulsif_lambda_grid();

}  // namespace priorshift
