#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "priorshift/dataset.hpp"
#include "priorshift/kernel_classifier.hpp"
#include "priorshift/toydata.hpp"

namespace priorshift {

enum class Method { Attribute, Straightforward, Ulsif, GroundTruth, None };

std::string method_name(Method m);
Method method_from_name(const std::string& name);  // throws on unknown names

struct RunConfig {
  std::string experiment;  // identifier; also the results directory name

  // Data: either a built-in toy spec name (generated fresh per seed) or a
  // pair of dataset files (fixed data; seeds still drive estimation and CV).
  std::string toy_spec;
  std::string source_path;
  std::string target_path;

  Method method = Method::Attribute;
  int knn_k = 0;  // 0 = ceil(sqrt(n_source))

  // Empty grids fall back to the median-distance defaults.
  std::vector<double> classifier_widths;
  std::vector<double> classifier_regs;
  int cv_folds = 5;
  std::vector<double> ulsif_sigma_grid;
  std::vector<double> ulsif_lambda_grid;
  int ulsif_num_basis = 100;

  std::vector<std::uint64_t> seeds;
  std::string output_dir;

  void validate() const;
};

RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& config, const std::string& path);

// Resolve "toy-A"/"toy-B"/"toy-C" to the built-in spec, or load a ToySpec
// JSON file; either way the returned spec carries `seed`.
ToySpec builtin_toy_spec_or_file(const std::string& name_or_path,
                                 std::uint64_t seed);

struct SeedRecord {
  std::uint64_t seed = 0;
  std::optional<double> rmse;  // present when ground truth is available
  double target_accuracy = 0.0;
  double source_accuracy = 0.0;
  double kernel_width = 0.0;
  double regularization = 0.0;
  double wall_time_seconds = 0.0;  // console reporting only; never serialized
};

struct RunResult {
  std::string experiment;
  std::vector<SeedRecord> records;
  std::optional<double> rmse_mean, rmse_std;
  double target_accuracy_mean = 0.0, target_accuracy_std = 0.0;
  double source_accuracy_mean = 0.0, source_accuracy_std = 0.0;
};

// Per seed: generate or load data, compute weights by the configured method,
// train the weighted classifier, evaluate, and write
// <output_dir>/<experiment>/<seed>/{weights.csv,model.json,metrics.json};
// afterwards write <output_dir>/<experiment>/summary.json with the
// aggregates. Identical configs and seeds reproduce every file byte-for-byte.
RunResult run_experiment(const RunConfig& config);

// The named overlap demo configurations ("overlap-small" has well-separated
// classes, "overlap-large" strongly overlapping ones), n = 2000, source prior
// [0.5, 0.5], target prior [1, 0].
struct OverlapConfig {
  double mean_separation = 0.0;
  AttributePrior prior_source, prior_target;
  int n = 2000;
};
OverlapConfig builtin_overlap_config(const std::string& name);

// Reproduction drivers. Each writes deterministic data files under
// <out_dir>/<name>/ and returns the headline numbers for assertions.

struct Table2Result {
  std::vector<std::string> datasets;              // "toy-A", "toy-B", "toy-C"
  std::vector<std::vector<double>> attribute_rmse;  // [dataset][seed]
  std::vector<std::vector<double>> ulsif_rmse;
  std::vector<double> attribute_mean, ulsif_mean;
};
Table2Result reproduce_table2(const std::vector<std::uint64_t>& seeds,
                              const std::string& out_dir);

struct Table3Result {
  std::vector<std::string> datasets;
  // [dataset][seed] target accuracies per weighting scheme
  std::vector<std::vector<double>> unweighted, estimated, ground_truth;
  std::vector<double> unweighted_mean, estimated_mean, ground_truth_mean;
};
Table3Result reproduce_table3(const std::vector<std::uint64_t>& seeds,
                              const std::string& out_dir);

// Weight-function and per-sample weight data for the two overlap demos.
void reproduce_fig2(std::uint64_t seed, const std::string& out_dir);
void reproduce_fig3(std::uint64_t seed, const std::string& out_dir);
// Per-sample weights plus a decision-function grid for the weighted toy-A fit.
void reproduce_fig5(std::uint64_t seed, const std::string& out_dir);

// k-NN neighborhood size used by the table and figure reproductions (fixed so
// the emitted artifacts are stable reference points; general runs default to
// ceil(sqrt(n)) via default_knn_k).
inline constexpr int kReproductionKnnK = 7;

}  // namespace priorshift
