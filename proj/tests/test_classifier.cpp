#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "priorshift/kernel_classifier.hpp"
#include "priorshift/rng.hpp"
#include "priorshift/toydata.hpp"
#include "priorshift/weights.hpp"

using namespace priorshift;
namespace fs = std::filesystem;

namespace {

Dataset random_blobs(int n, int dim, int num_classes, std::uint64_t seed,
                     double spread) {
  Dataset d;
  d.dim = dim;
  d.num_classes = num_classes;
  d.num_attributes = 1;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_classes)));
    LabeledSample s;
    s.label = y;
    s.features.resize(dim);
    for (int j = 0; j < dim; ++j)
      s.features[j] = (j == 0 ? spread * y : 0.0) + rng.normal();
    d.samples.push_back(std::move(s));
  }
  return d;
}

WeightVector unit_weights(int n) {
  return WeightVector{std::vector<double>(n, 1.0)};
}

double max_abs_score_diff(const KernelModel& a, const KernelModel& b,
                          const std::vector<std::vector<double>>& queries) {
  double worst = 0.0;
  for (const auto& q : queries) {
    Eigen::VectorXd sa = decision_scores(a, q);
    Eigen::VectorXd sb = decision_scores(b, q);
    worst = std::max(worst, (sa - sb).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TEST_CASE("analytic gradient matches central finite differences") {
  for (int num_classes : {2, 3}) {
    Dataset d = random_blobs(12, 2, num_classes, 100 + num_classes, 1.5);
    Rng rng(7 * num_classes);
    std::vector<double> wv(d.size());
    for (double& w : wv) w = rng.uniform(0.5, 2.0);
    WeightVector weights{wv};
    const double sigma = 1.3, lambda = 5e-3;
    int dims = d.size() * (num_classes - 1) + (num_classes - 1);

    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd theta(dims);
      for (int j = 0; j < dims; ++j) theta(j) = 0.3 * rng.normal();
      Eigen::VectorXd grad;
      objective_and_gradient(d, weights, sigma, lambda, theta, grad);
      REQUIRE(grad.size() == dims);

      Eigen::VectorXd dummy;
      for (int j = 0; j < dims; ++j) {
        double h = 1e-6 * std::max(1.0, std::abs(theta(j)));
        Eigen::VectorXd tp = theta, tm = theta;
        tp(j) += h;
        tm(j) -= h;
        double fp = objective_and_gradient(d, weights, sigma, lambda, tp, dummy);
        double fm = objective_and_gradient(d, weights, sigma, lambda, tm, dummy);
        double fd = (fp - fm) / (2.0 * h);
        CAPTURE(num_classes);
        CAPTURE(trial);
        CAPTURE(j);
        CHECK(std::abs(grad(j) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("objective is linear in the weights: duplication equals doubling") {
  Dataset base = random_blobs(20, 2, 2, 5, 2.0);
  std::vector<double> w(base.size(), 1.0);
  w[3] = 2.0;  // doubled weight on sample 3

  Dataset dup = base;
  dup.samples.push_back(base.samples[3]);  // duplicated instead
  std::vector<double> wdup(dup.size(), 1.0);

  // At identical hyperparameters the two problems have the same minimal value
  // and the same minimizing function, so the fitted models agree.
  KernelModel a = train_fixed(base, WeightVector{w}, 1.5, 1e-2);
  KernelModel b = train_fixed(dup, WeightVector{wdup}, 1.5, 1e-2);

  double ja = training_objective(a, dup, WeightVector{wdup});
  double jb = training_objective(b, dup, WeightVector{wdup});
  CHECK(std::abs(ja - jb) <= 1e-8);
  // And evaluated the other way around.
  double ja2 = training_objective(a, base, WeightVector{w});
  double jb2 = training_objective(b, base, WeightVector{w});
  CHECK(std::abs(ja2 - jb2) <= 1e-8);

  std::vector<std::vector<double>> queries;
  Rng qr(11);
  for (int q = 0; q < 20; ++q)
    queries.push_back({qr.uniform(-2.0, 4.0), qr.uniform(-2.0, 2.0)});
  // The minimizing function is shared, but the two optimizations run in
  // different parameterizations, so score agreement is optimizer-limited.
  CHECK(max_abs_score_diff(a, b, queries) <= 1e-3);
}

TEST_CASE("zero-weight samples leave predictions unchanged") {
  Dataset base = random_blobs(30, 2, 2, 8, 2.5);
  WeightVector w = unit_weights(base.size());

  Dataset padded = base;
  WeightVector wpad = w;
  Rng rng(19);
  for (int e = 0; e < 5; ++e) {
    padded.samples.push_back({{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)},
                              static_cast<int>(rng.below(2)), 0});
    wpad.weights.push_back(0.0);
  }

  KernelModel a = train_fixed(base, w, 1.2, 1e-2);
  KernelModel b = train_fixed(padded, wpad, 1.2, 1e-2);
  // Zero-weight samples are pruned before fitting, so the padded problem is
  // the same optimization and never earns a support point.
  CHECK(static_cast<int>(b.support_points.size()) == base.size());

  std::vector<std::vector<double>> queries;
  for (int q = 0; q < 30; ++q)
    queries.push_back({rng.uniform(-3.0, 5.0), rng.uniform(-3.0, 3.0)});
  CHECK(max_abs_score_diff(a, b, queries) <= 1e-9);
}

TEST_CASE("weights are scale invariant") {
  Dataset d = random_blobs(25, 2, 3, 21, 2.0);
  WeightVector w = unit_weights(d.size());
  WeightVector w3{std::vector<double>(d.size(), 3.0)};
  KernelModel a = train_fixed(d, w, 1.0, 1e-2);
  KernelModel b = train_fixed(d, w3, 1.0, 1e-2);
  std::vector<std::vector<double>> queries;
  Rng rng(2);
  for (int q = 0; q < 15; ++q)
    queries.push_back({rng.normal(), rng.normal()});
  CHECK(max_abs_score_diff(a, b, queries) <= 1e-7);

  // The objective value itself is scale invariant at fixed parameters.
  CHECK(training_objective(a, d, w) ==
        doctest::Approx(training_objective(a, d, w3)).epsilon(1e-14));
}

TEST_CASE("a separable problem is fit to perfect training accuracy") {
  Dataset d = random_blobs(40, 2, 2, 33, 8.0);
  KernelModel m = train_fixed(d, unit_weights(d.size()), 2.0, 1e-4);
  for (int i = 0; i < d.size(); ++i) CHECK(predict(m, d.x(i)) == d.label(i));
}

TEST_CASE("prediction breaks ties toward the lower class index") {
  KernelModel m;
  m.support_points = {{0.0}};
  m.num_classes = 3;
  m.coefficients = Eigen::MatrixXd::Zero(1, 2);
  m.bias = Eigen::VectorXd::Zero(2);
  m.kernel_width = 1.0;
  m.regularization = 1e-2;
  // All three classes score zero.
  CHECK(predict(m, {5.0}) == 0);
  m.bias << 0.5, 0.5;  // classes 0 and 1 tie above the reference class
  CHECK(predict(m, {5.0}) == 0);
  m.bias << -1.0, -2.0;  // the implicit last class wins
  CHECK(predict(m, {5.0}) == 2);
  m.bias << -1.0, 2.0;
  CHECK(predict(m, {5.0}) == 1);

  CHECK_THROWS_AS(predict(m, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("decision scores expose the last-class-zero convention") {
  KernelModel m;
  m.support_points = {{0.0}};
  m.num_classes = 2;
  m.coefficients = Eigen::MatrixXd::Constant(1, 1, 1.0);
  m.bias = Eigen::VectorXd::Constant(1, 0.25);
  m.kernel_width = 2.0;
  m.regularization = 1e-2;
  Eigen::VectorXd s = decision_scores(m, {0.0});
  REQUIRE(s.size() == 1);
  CHECK(s(0) == doctest::Approx(1.25).epsilon(1e-15));
  Eigen::VectorXd far = decision_scores(m, {2.0});
  CHECK(far(0) == doctest::Approx(0.25 + std::exp(-0.5)).epsilon(1e-15));
}

TEST_CASE("a toy-trained model follows the sigmoidal boundary") {
  ToySpec spec = builtin_toy_spec("toy-A", 1);
  spec.n_source = 200;
  Dataset d = generate_toy(spec, Domain::Source);
  KernelModel m = train_fixed(d, unit_weights(d.size()), 1.5, 1e-3);
  // Far above the curve x1 = sin(x0) the label is 1, far below it is 0.
  CHECK(predict(m, {-0.75 * 3.14159, 1.9}) == 1);
  CHECK(predict(m, {-0.75 * 3.14159, -1.9}) == 0);
  CHECK(predict(m, {0.0, 1.8}) == 1);
  CHECK(predict(m, {0.0, -1.8}) == 0);
}

TEST_CASE("weighted risk hand values") {
  KernelModel m;
  m.support_points = {{0.0}};
  m.num_classes = 2;
  m.coefficients = Eigen::MatrixXd::Zero(1, 1);
  m.bias = Eigen::VectorXd::Zero(1);
  m.kernel_width = 1.0;
  m.regularization = 1e-2;

  Dataset d;
  d.dim = 1;
  d.num_classes = 2;
  d.num_attributes = 1;
  d.samples = {{{0.5}, 0, 0}, {{-0.5}, 1, 0}};

  // The zero model assigns p = 1/2 to both classes: risk (1/n) sum w log 2.
  double log2 = std::log(2.0);
  CHECK(weighted_risk(m, d, WeightVector{{1.0, 1.0}}) ==
        doctest::Approx(log2).epsilon(1e-14));
  CHECK(weighted_risk(m, d, WeightVector{{1.0, 3.0}}) ==
        doctest::Approx(2.0 * log2).epsilon(1e-14));
  CHECK(weighted_risk(m, d, WeightVector{{0.0, 0.0}}) == 0.0);

  // Linear in the weights.
  double r1 = weighted_risk(m, d, WeightVector{{0.7, 0.4}});
  double r2 = weighted_risk(m, d, WeightVector{{1.4, 0.8}});
  CHECK(r2 == doctest::Approx(2.0 * r1).epsilon(1e-14));

  // The training objective of the zero model is log 2 with no penalty.
  CHECK(training_objective(m, d, WeightVector{{1.0, 3.0}}) ==
        doctest::Approx(log2).epsilon(1e-14));
}

TEST_CASE("cross-validated training is deterministic and grid-bound") {
  ToySpec spec = builtin_toy_spec("toy-A", 2);
  spec.n_source = 80;
  Dataset d = generate_toy(spec, Domain::Source);
  WeightVector w = unit_weights(d.size());
  CvGrid grid;
  grid.widths = {1.0, 2.0};
  grid.regs = {1e-3, 1e-2};
  grid.folds = 4;

  KernelModel a = train_weighted(d, w, grid, 17);
  KernelModel b = train_weighted(d, w, grid, 17);
  CHECK(a.kernel_width == b.kernel_width);
  CHECK(a.regularization == b.regularization);
  CHECK((a.coefficients.array() == b.coefficients.array()).all());
  CHECK((a.bias.array() == b.bias.array()).all());

  bool width_in_grid = a.kernel_width == 1.0 || a.kernel_width == 2.0;
  bool reg_in_grid = a.regularization == 1e-3 || a.regularization == 1e-2;
  CHECK(width_in_grid);
  CHECK(reg_in_grid);
}

TEST_CASE("cross validation rejects folds starved of a class") {
  Dataset d = random_blobs(12, 1, 2, 3, 4.0);
  for (auto& s : d.samples) s.label = 0;
  d.samples[0].label = 1;  // class 1 appears exactly once
  CvGrid grid;
  grid.widths = {1.0};
  grid.regs = {1e-2};
  grid.folds = 3;
  CHECK_THROWS_WITH_AS(train_weighted(d, unit_weights(d.size()), grid, 1),
                       doctest::Contains("reduce folds"), std::runtime_error);

  // Positive weight is what counts: zeroing every class-1 weight starves all
  // folds even when the samples are present.
  Dataset d2 = random_blobs(12, 1, 2, 3, 4.0);
  WeightVector w = unit_weights(d2.size());
  for (int i = 0; i < d2.size(); ++i)
    if (d2.label(i) == 1) w.weights[i] = 0.0;
  CHECK_THROWS_WITH_AS(train_weighted(d2, w, grid, 1),
                       doctest::Contains("reduce folds"), std::runtime_error);
}

TEST_CASE("trainer input validation") {
  Dataset d = random_blobs(10, 1, 2, 4, 3.0);
  WeightVector w = unit_weights(d.size());
  CHECK_THROWS_AS(train_fixed(d, w, 0.0, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(train_fixed(d, w, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      train_fixed(d, WeightVector{std::vector<double>(d.size(), 0.0)}, 1.0, 1e-2),
      doctest::Contains("all-zero weights"), std::invalid_argument);
  CHECK_THROWS_AS(train_fixed(d, unit_weights(3), 1.0, 1e-2),
                  std::invalid_argument);

  CvGrid bad;
  bad.widths = {};
  bad.regs = {1e-2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.widths = {1.0};
  bad.regs = {-1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.regs = {1e-2};
  bad.folds = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  CvGrid dflt = default_cv_grid(2.0);
  CHECK(dflt.widths == std::vector<double>{1.0, 2.0, 4.0});
  CHECK(dflt.regs == std::vector<double>{1e-4, 1e-3, 1e-2, 1e-1});
  CHECK(dflt.folds == 5);
  CHECK_NOTHROW(dflt.validate());
}

TEST_CASE("model save/load round-trips predictions exactly") {
  Dataset d = random_blobs(15, 2, 3, 6, 2.0);
  KernelModel m = train_fixed(d, unit_weights(d.size()), 1.1, 1e-2);

  fs::path dir = fs::temp_directory_path() /
                 ("priorshift_model_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string path = (dir / "model.json").string();
  save_model(m, path);
  KernelModel back = load_model(path);
  fs::remove_all(dir);

  CHECK(back.kernel_width == m.kernel_width);
  CHECK(back.regularization == m.regularization);
  CHECK(back.num_classes == m.num_classes);
  REQUIRE(back.support_points.size() == m.support_points.size());
  CHECK((back.coefficients.array() == m.coefficients.array()).all());
  CHECK((back.bias.array() == m.bias.array()).all());

  Rng rng(41);
  for (int q = 0; q < 10; ++q) {
    std::vector<double> query{rng.normal(), rng.normal()};
    Eigen::VectorXd sa = decision_scores(m, query);
    Eigen::VectorXd sb = decision_scores(back, query);
    CHECK((sa.array() == sb.array()).all());
  }

  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), std::runtime_error);
}
