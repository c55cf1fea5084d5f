#include "priorshift/ulsif.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "priorshift/rng.hpp"
#include "priorshift/toydata.hpp"

namespace priorshift {

namespace {

Eigen::MatrixXd to_matrix(const Dataset& data) {
  Eigen::MatrixXd m(data.size(), data.dim);
  for (int i = 0; i < data.size(); ++i)
    for (int j = 0; j < data.dim; ++j) m(i, j) = data.x(i)[j];
  return m;
}

// Squared distances between every row of a and every row of b.
Eigen::MatrixXd cross_sq_dist(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::VectorXd an = a.rowwise().squaredNorm();
  Eigen::VectorXd bn = b.rowwise().squaredNorm();
  Eigen::MatrixXd d = -2.0 * a * b.transpose();
  d.colwise() += an;
  d.rowwise() += bn.transpose();
  return d.cwiseMax(0.0);
}

}  // namespace

UlsifModel fit_ulsif(const Dataset& source, const Dataset& target, int num_basis,
                     const std::vector<double>& sigma_grid,
                     const std::vector<double>& lambda_grid, std::uint64_t seed) {
  source.validate();
  target.validate();
  if (source.samples.empty() || target.samples.empty())
    throw std::invalid_argument("ulsif: empty dataset");
  if (source.dim != target.dim)
    throw std::invalid_argument("ulsif: source and target dimensions differ");
  if (sigma_grid.empty() || lambda_grid.empty())
    throw std::invalid_argument("ulsif: empty hyperparameter grid");
  if (num_basis <= 0) throw std::invalid_argument("ulsif: num_basis must be positive");

  int n_de = source.size(), n_nu = target.size();
  int b = std::min(num_basis, n_nu);
  int n = std::min(n_de, n_nu);

  std::vector<int> perm = Rng::stream(seed, purpose::UlsifBasis).permutation(n_nu);
  Eigen::MatrixXd centers(b, target.dim);
  for (int l = 0; l < b; ++l)
    for (int j = 0; j < target.dim; ++j) centers(l, j) = target.x(perm[l])[j];

  Eigen::MatrixXd Xs = to_matrix(source), Xt = to_matrix(target);
  Eigen::MatrixXd d2_de = cross_sq_dist(Xs, centers);  // n_de x b
  Eigen::MatrixXd d2_nu = cross_sq_dist(Xt, centers);  // n_nu x b

  UlsifModel model;
  model.centers = centers;
  bool have_best = false;
  double best_score = 0.0;

  for (double sig : sigma_grid) {
    if (!(sig > 0.0)) throw std::invalid_argument("ulsif: sigma must be positive");
    Eigen::MatrixXd Phi_de = (-d2_de / (2.0 * sig * sig)).array().exp();
    Eigen::MatrixXd Phi_nu = (-d2_nu / (2.0 * sig * sig)).array().exp();
    Eigen::MatrixXd H = Phi_de.transpose() * Phi_de / static_cast<double>(n_de);
    Eigen::VectorXd h = Phi_nu.colwise().mean();

    for (double lam : lambda_grid) {
      if (!(lam > 0.0)) throw std::invalid_argument("ulsif: lambda must be positive");
      Eigen::MatrixXd B = H;
      B.diagonal().array() += lam * static_cast<double>(n_de - 1) / n_de;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(B);
      if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("ulsif: singular system at lambda=" + std::to_string(lam));

      // Closed-form leave-one-out: one rank-one update per held-out pair.
      Eigen::VectorXd Binv_h = ldlt.solve(h);
      Eigen::MatrixXd T_de = ldlt.solve(Phi_de.topRows(n).transpose());  // b x n
      Eigen::MatrixXd T_nu = ldlt.solve(Phi_nu.topRows(n).transpose());  // b x n
      double c1 = static_cast<double>(n_de - 1) / (static_cast<double>(n_de) * (n_nu - 1));
      double score = 0.0;
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd phi_de = Phi_de.row(i).transpose();
        Eigen::VectorXd phi_nu = Phi_nu.row(i).transpose();
        double s_i = phi_de.dot(T_de.col(i));
        Eigen::VectorXd base = static_cast<double>(n_nu) * Binv_h - T_nu.col(i);
        double coef = phi_de.dot(base) / (static_cast<double>(n_de) - s_i);
        Eigen::VectorXd alpha_i =
            (c1 * (base + coef * T_de.col(i))).cwiseMax(0.0);
        double w_de = phi_de.dot(alpha_i);
        double w_nu = phi_nu.dot(alpha_i);
        score += w_de * w_de / (2.0 * n) - w_nu / n;
      }

      model.grid_scores.emplace_back(sig, lam, score);
      if (!have_best || score < best_score) {
        have_best = true;
        best_score = score;
        model.sigma = sig;
        model.lambda = lam;
      }
    }
  }

  Eigen::MatrixXd Phi_de = (-d2_de / (2.0 * model.sigma * model.sigma)).array().exp();
  Eigen::MatrixXd Phi_nu = (-d2_nu / (2.0 * model.sigma * model.sigma)).array().exp();
  Eigen::MatrixXd H = Phi_de.transpose() * Phi_de / static_cast<double>(n_de);
  Eigen::VectorXd h = Phi_nu.colwise().mean();
  Eigen::MatrixXd A = H;
  A.diagonal().array() += model.lambda;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("ulsif: singular system at lambda=" +
                             std::to_string(model.lambda));
  model.alphas = ldlt.solve(h).cwiseMax(0.0);
  return model;
}

double predict_ulsif(const UlsifModel& model, const std::vector<double>& query) {
  if (static_cast<int>(query.size()) != model.centers.cols())
    throw std::invalid_argument("ulsif predict: query dimension mismatch");
  double acc = 0.0;
  for (int l = 0; l < model.centers.rows(); ++l) {
    double d2 = 0.0;
    for (int j = 0; j < model.centers.cols(); ++j) {
      double d = query[j] - model.centers(l, j);
      d2 += d * d;
    }
    acc += model.alphas(l) * std::exp(-d2 / (2.0 * model.sigma * model.sigma));
  }
  return std::max(acc, 0.0);
}

WeightVector predict_ulsif(const UlsifModel& model, const Dataset& data) {
  WeightVector w;
  w.weights.reserve(data.samples.size());
  for (const LabeledSample& s : data.samples)
    w.weights.push_back(predict_ulsif(model, s.features));
  w.validate(data.size());
  return w;
}

double median_pairwise_distance(const std::vector<std::vector<double>>& rows) {
  std::size_t n = std::min<std::size_t>(rows.size(), 1000);
  if (n < 2)
    throw std::invalid_argument("median_pairwise_distance: need at least 2 rows");
  std::vector<double> d2;
  d2.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < rows[i].size(); ++c) {
        double d = rows[i][c] - rows[j][c];
        s += d * d;
      }
      d2.push_back(s);
    }
  std::size_t mid = (d2.size() - 1) / 2;
  std::nth_element(d2.begin(), d2.begin() + mid, d2.end());
  return std::sqrt(d2[mid]);
}

double median_pairwise_distance(const Dataset& a) {
  std::vector<std::vector<double>> rows;
  rows.reserve(a.samples.size());
  for (const LabeledSample& s : a.samples) rows.push_back(s.features);
  return median_pairwise_distance(rows);
}

double median_pairwise_distance(const Dataset& a, const Dataset& b) {
  std::vector<std::vector<double>> rows;
  rows.reserve(a.samples.size() + b.samples.size());
  for (const LabeledSample& s : a.samples) rows.push_back(s.features);
  for (const LabeledSample& s : b.samples) rows.push_back(s.features);
  return median_pairwise_distance(rows);
}

std::vector<double> default_ulsif_sigma_grid(double median_distance) {
  return {0.25 * median_distance, 0.5 * median_distance, median_distance,
          2.0 * median_distance, 4.0 * median_distance};
}

std::vector<double> default_ulsif_lambda_grid() { return {1e-3, 1e-2, 1e-1, 1.0}; }

}  // namespace priorshift
