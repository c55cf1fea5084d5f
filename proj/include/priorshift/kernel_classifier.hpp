#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "priorshift/dataset.hpp"

namespace priorshift {

// Weighted kernel logistic regression with a Gaussian kernel — the smooth,
// deterministic stand-in for a weighted C-SVM. Scores are kernel expansions
// for classes 0..C-2; the last class is the zero-score reference, so binary
// problems carry a single coefficient column.
struct KernelModel {
  std::vector<std::vector<double>> support_points;  // training inputs, n x m
  Eigen::MatrixXd coefficients;                     // n x (C-1)
  Eigen::VectorXd bias;                             // C-1, unpenalized
  double kernel_width = 0.0;                        // sigma_k
  double regularization = 0.0;                      // lambda_c
  int num_classes = 0;
};

struct CvGrid {
  std::vector<double> widths;  // kernel widths sigma_k
  std::vector<double> regs;    // regularization values lambda_c
  int folds = 5;

  void validate() const;
};

// widths = median-heuristic x {0.5, 1, 2}; regs = {1e-4, 1e-3, 1e-2, 1e-1}.
CvGrid default_cv_grid(double median_distance);

struct TrainControl {
  double grad_tol = 1e-6;  // stop when the gradient norm drops below this
  int max_iters = 2000;
  // Iteration cap for the inner cross-validation fits. Fold fits only rank
  // hyperparameters, so they run under a tighter budget than the final refit;
  // the warm-started regularization path keeps them near convergence anyway.
  int cv_max_iters = 300;
};

// Minimize (1/sum w) sum_i w_i * ce_i(theta) + lambda_c * sum_c beta_c' K beta_c
// at fixed hyperparameters. Normalizing the loss by the total weight (rather
// than the sample count) makes duplicating a sample exactly equivalent to
// doubling its weight, and reduces to the ordinary mean loss at unit weights.
// Zero-weight samples are dropped before fitting: they have constant loss
// terms, so the minimizer never needs them as support points, and pruning them
// makes a fit on padded data bit-identical to a fit without the padding.
KernelModel train_fixed(const Dataset& data, const WeightVector& weights,
                        double sigma, double lambda,
                        const TrainControl& control = {});

// (sigma_k, lambda_c) chosen by weighted k-fold cross-validated accuracy
// (ties toward larger lambda_c, then larger sigma_k), then refit on all data.
KernelModel train_weighted(const Dataset& data, const WeightVector& weights,
                           const CvGrid& grid, std::uint64_t seed,
                           const TrainControl& control = {});

// Scores for classes 0..C-2 (class C-1 scores 0 implicitly).
Eigen::VectorXd decision_scores(const KernelModel& model,
                                const std::vector<double>& query);

// Argmax class, ties toward the lower index.
int predict(const KernelModel& model, const std::vector<double>& query);

// (1/n) sum_i w_i * cross_entropy(model, x_i, y_i).
double weighted_risk(const KernelModel& model, const Dataset& data,
                     const WeightVector& weights);

// Training objective and its analytic gradient at packed parameters theta
// (column-major n x (C-1) coefficient block, then the C-1 biases), evaluated
// at fixed hyperparameters. This is the exact function the trainer minimizes;
// it is exposed so the gradient can be checked against finite differences.
double objective_and_gradient(const Dataset& data, const WeightVector& weights,
                              double sigma, double lambda,
                              const Eigen::VectorXd& theta,
                              Eigen::VectorXd& grad);

// The value of the training objective this model minimizes on `data` with
// `weights` (used by the duplication-equivalence checks).
double training_objective(const KernelModel& model, const Dataset& data,
                          const WeightVector& weights);

void save_model(const KernelModel& model, const std::string& path);
KernelModel load_model(const std::string& path);

}  // namespace priorshift
