#include "priorshift/kernel_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "priorshift/rng.hpp"
#include "priorshift/toydata.hpp"

namespace priorshift {

namespace {

Eigen::MatrixXd feature_matrix(const Dataset& data) {
  Eigen::MatrixXd m(data.size(), data.dim);
  for (int i = 0; i < data.size(); ++i)
    for (int j = 0; j < data.dim; ++j) m(i, j) = data.x(i)[j];
  return m;
}

Eigen::MatrixXd gaussian_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                double sigma) {
  Eigen::VectorXd an = a.rowwise().squaredNorm();
  Eigen::VectorXd bn = b.rowwise().squaredNorm();
  Eigen::MatrixXd d = -2.0 * a * b.transpose();
  d.colwise() += an;
  d.rowwise() += bn.transpose();
  return (-d.cwiseMax(0.0) / (2.0 * sigma * sigma)).array().exp();
}

// Cross-entropy pieces for score rows f (C-1 columns; last class scores 0).
// Returns the log partition; fills probs with p(c|x) for c < C-1.
double log_partition(const Eigen::VectorXd& f, Eigen::VectorXd& probs) {
  double m = 0.0;
  for (int c = 0; c < f.size(); ++c) m = std::max(m, f(c));
  double sum = std::exp(-m);
  for (int c = 0; c < f.size(); ++c) sum += std::exp(f(c) - m);
  double lse = m + std::log(sum);
  probs.resize(f.size());
  for (int c = 0; c < f.size(); ++c) probs(c) = std::exp(f(c) - lse);
  return lse;
}

// Minimize f via L-BFGS (two-loop recursion, Armijo backtracking). `eval`
// returns the objective and writes the gradient.
void lbfgs_minimize(std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)> eval,
                    Eigen::VectorXd& x, double grad_tol, int max_iters) {
  const int memory = 8;
  std::vector<Eigen::VectorXd> s_hist, y_hist;
  std::vector<double> rho;

  Eigen::VectorXd g(x.size()), g_new(x.size());
  double fx = eval(x, g);
  for (int iter = 0; iter < max_iters; ++iter) {
    if (g.norm() <= grad_tol) return;

    // Two-loop recursion for the search direction.
    Eigen::VectorXd d = -g;
    int h = static_cast<int>(s_hist.size());
    std::vector<double> alpha(h);
    for (int i = h - 1; i >= 0; --i) {
      alpha[i] = rho[i] * s_hist[i].dot(d);
      d -= alpha[i] * y_hist[i];
    }
    if (h > 0) {
      double gamma = s_hist[h - 1].dot(y_hist[h - 1]) / y_hist[h - 1].squaredNorm();
      d *= gamma;
    }
    for (int i = 0; i < h; ++i) {
      double beta = rho[i] * y_hist[i].dot(d);
      d += (alpha[i] - beta) * s_hist[i];
    }
    double gd = g.dot(d);
    if (gd >= 0.0) {  // not a descent direction; fall back to steepest descent
      d = -g;
      gd = -g.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho.clear();
    }

    double step = 1.0;
    double fx_new = fx;
    Eigen::VectorXd x_new;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      x_new = x + step * d;
      fx_new = eval(x_new, g_new);
      if (std::isfinite(fx_new) && fx_new <= fx + 1e-4 * step * gd) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return;  // no further progress at machine precision

    Eigen::VectorXd s_vec = x_new - x;
    Eigen::VectorXd y_vec = g_new - g;
    double sy = s_vec.dot(y_vec);
    if (sy > 1e-12 * s_vec.norm() * y_vec.norm()) {
      s_hist.push_back(std::move(s_vec));
      y_hist.push_back(std::move(y_vec));
      rho.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > memory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho.erase(rho.begin());
      }
    }
    x = std::move(x_new);
    g = g_new;
    fx = fx_new;
  }
}

struct Objective {
  const Eigen::MatrixXd& K;  // n x n kernel matrix
  const std::vector<int>& labels;
  const std::vector<double>& w;
  double inv_total_weight;
  double lambda;
  int n, cols;

  // Scratch buffers so repeated evaluations allocate nothing.
  mutable Eigen::MatrixXd KB, E, G;
  mutable Eigen::VectorXd M, S;

  // theta layout: column-major B (n x cols) then bias (cols).
  double operator()(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
    Eigen::Map<const Eigen::MatrixXd> B(theta.data(), n, cols);
    Eigen::Map<const Eigen::VectorXd> bias(theta.data() + n * cols, cols);
    KB.resize(n, cols);
    KB.noalias() = K * B;
    double penalty = lambda * B.cwiseProduct(KB).sum();

    // Scores F = KB + bias (class C-1 scores 0 implicitly). Stable softmax:
    // M = max(0, max_c F), lse = M + log(exp(-M) + sum_c exp(F_c - M)).
    E.resize(n, cols);
    E = KB;
    E.rowwise() += bias.transpose();
    M = E.rowwise().maxCoeff().cwiseMax(0.0);
    double loss = 0.0;
    for (int i = 0; i < n; ++i)
      loss -= w[i] * (labels[i] < cols ? E(i, labels[i]) : 0.0);
    E.colwise() -= M;
    E = E.array().exp();
    S = E.rowwise().sum();
    S += (-M).array().exp().matrix();
    loss += ((M.array() + S.array().log()) *
             Eigen::Map<const Eigen::ArrayXd>(w.data(), n))
                .sum();

    // Probabilities p_ic = E_ic / S_i; gradient G_ic = invS w_i (p_ic - y_ic).
    G.resize(n, cols);
    G = E.array().colwise() / S.array();
    for (int i = 0; i < n; ++i) {
      if (labels[i] < cols) G(i, labels[i]) -= 1.0;
      G.row(i) *= inv_total_weight * w[i];
    }

    grad.resize(theta.size());
    Eigen::Map<Eigen::MatrixXd> gB(grad.data(), n, cols);
    Eigen::Map<Eigen::VectorXd> gBias(grad.data() + n * cols, cols);
    gBias = G.colwise().sum().transpose();
    G.noalias() += 2.0 * lambda * B;  // reuse G to fuse the gradient product
    gB.noalias() = K * G;
    return inv_total_weight * loss + penalty;
  }
};

KernelModel fit_on_kernel(const Eigen::MatrixXd& K, const Dataset& data,
                          const std::vector<int>& rows,
                          const std::vector<double>& w, double sigma,
                          double lambda, const TrainControl& control,
                          Eigen::VectorXd* warm_theta) {
  int n = static_cast<int>(rows.size());
  int cols = data.num_classes - 1;
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = data.label(rows[i]);
  double total = 0.0;
  for (double v : w) total += v;
  if (total <= 0.0) throw std::invalid_argument("train: all-zero weights");

  Objective obj{K, labels, w, 1.0 / total, lambda, n, cols};
  Eigen::VectorXd theta;
  if (warm_theta && warm_theta->size() == n * cols + cols)
    theta = *warm_theta;
  else
    theta = Eigen::VectorXd::Zero(n * cols + cols);
  lbfgs_minimize(std::cref(obj), theta, control.grad_tol, control.max_iters);
  if (warm_theta) *warm_theta = theta;

  KernelModel model;
  model.support_points.reserve(n);
  for (int i : rows) model.support_points.push_back(data.x(i));
  model.coefficients = Eigen::Map<const Eigen::MatrixXd>(theta.data(), n, cols);
  model.bias = Eigen::Map<const Eigen::VectorXd>(theta.data() + n * cols, cols);
  model.kernel_width = sigma;
  model.regularization = lambda;
  model.num_classes = data.num_classes;
  return model;
}

}  // namespace

void CvGrid::validate() const {
  if (widths.empty() || regs.empty())
    throw std::invalid_argument("cv grid: empty width or regularization grid");
  for (double s : widths)
    if (!(s > 0.0)) throw std::invalid_argument("cv grid: kernel width must be positive");
  for (double r : regs)
    if (!(r > 0.0)) throw std::invalid_argument("cv grid: regularization must be positive");
  if (folds < 2) throw std::invalid_argument("cv grid: folds must be at least 2");
}

CvGrid default_cv_grid(double median_distance) {
  CvGrid grid;
  grid.widths = {0.5 * median_distance, median_distance, 2.0 * median_distance};
  grid.regs = {1e-4, 1e-3, 1e-2, 1e-1};
  grid.folds = 5;
  return grid;
}

KernelModel train_fixed(const Dataset& data, const WeightVector& weights,
                        double sigma, double lambda, const TrainControl& control) {
  data.validate();
  weights.validate(data.size());
  if (data.num_classes < 2)
    throw std::invalid_argument("train: need at least 2 classes");
  if (!(sigma > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("train: sigma and lambda must be positive");

  // Zero-weight samples have constant loss terms, so the minimizer never needs
  // them as support points; dropping them up front makes a fit on padded data
  // bit-identical to a fit on just the positively weighted samples.
  std::vector<int> rows;
  std::vector<double> w;
  for (int i = 0; i < data.size(); ++i)
    if (weights[i] > 0.0) {
      rows.push_back(i);
      w.push_back(weights[i]);
    }
  if (rows.empty()) throw std::invalid_argument("train: all-zero weights");

  Eigen::MatrixXd X(rows.size(), data.dim);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (int j = 0; j < data.dim; ++j) X(a, j) = data.x(rows[a])[j];
  Eigen::MatrixXd K = gaussian_kernel(X, X, sigma);
  return fit_on_kernel(K, data, rows, w, sigma, lambda, control, nullptr);
}

KernelModel train_weighted(const Dataset& data, const WeightVector& weights,
                           const CvGrid& grid, std::uint64_t seed,
                           const TrainControl& control) {
  data.validate();
  weights.validate(data.size());
  grid.validate();
  if (data.num_classes < 2)
    throw std::invalid_argument("train: need at least 2 classes");

  int n = data.size();
  std::vector<int> fold(n);
  std::vector<int> perm = Rng::stream(seed, purpose::CvFolds).permutation(n);
  for (int i = 0; i < n; ++i) fold[perm[i]] = i % grid.folds;

  // Every class must appear with positive weight in every training split.
  for (int f = 0; f < grid.folds; ++f) {
    std::vector<bool> seen(data.num_classes, false);
    for (int i = 0; i < n; ++i)
      if (fold[i] != f && weights[i] > 0.0) seen[data.label(i)] = true;
    for (int c = 0; c < data.num_classes; ++c)
      if (!seen[c])
        throw std::runtime_error("train: class " + std::to_string(c) +
                                 " has no positively weighted sample in the training "
                                 "split of fold " + std::to_string(f) +
                                 "; reduce folds");
  }

  Eigen::MatrixXd X = feature_matrix(data);
  std::vector<double> regs_desc = grid.regs;
  std::sort(regs_desc.begin(), regs_desc.end(), std::greater<double>());

  double best_score = -1.0, best_sigma = 0.0, best_lambda = 0.0;
  for (double sigma : grid.widths) {
    Eigen::MatrixXd K = gaussian_kernel(X, X, sigma);
    // correct/total weighted accuracy accumulators per lambda
    std::vector<double> num(regs_desc.size(), 0.0), den(regs_desc.size(), 0.0);
    for (int f = 0; f < grid.folds; ++f) {
      std::vector<int> tr, va;
      for (int i = 0; i < n; ++i) (fold[i] == f ? va : tr).push_back(i);
      int ntr = static_cast<int>(tr.size());
      Eigen::MatrixXd Ktr(ntr, ntr);
      for (int a = 0; a < ntr; ++a)
        for (int b = 0; b < ntr; ++b) Ktr(a, b) = K(tr[a], tr[b]);
      std::vector<double> wtr(ntr);
      for (int a = 0; a < ntr; ++a) wtr[a] = weights[tr[a]];

      TrainControl fold_control = control;
      fold_control.max_iters = control.cv_max_iters;
      Eigen::VectorXd warm;  // reused across the descending lambda path
      for (std::size_t li = 0; li < regs_desc.size(); ++li) {
        KernelModel m = fit_on_kernel(Ktr, data, tr, wtr, sigma, regs_desc[li],
                                      fold_control, &warm);
        for (int i : va) {
          if (!(weights[i] > 0.0)) continue;
          int cols = data.num_classes - 1;
          Eigen::VectorXd scores(cols);
          for (int c = 0; c < cols; ++c) {
            double acc = m.bias(c);
            for (int a = 0; a < ntr; ++a) acc += m.coefficients(a, c) * K(i, tr[a]);
            scores(c) = acc;
          }
          int pred = data.num_classes - 1;
          double bestv = 0.0;
          for (int c = 0; c < cols; ++c)
            if (scores(c) > bestv) {
              bestv = scores(c);
              pred = c;
            }
          // ties toward the lower class index
          for (int c = 0; c < cols; ++c)
            if (scores(c) == bestv) {
              pred = std::min(pred, c);
              break;
            }
          num[li] += weights[i] * (pred == data.label(i) ? 1.0 : 0.0);
          den[li] += weights[i];
        }
      }
    }
    for (std::size_t li = 0; li < regs_desc.size(); ++li) {
      double score = den[li] > 0.0 ? num[li] / den[li] : 0.0;
      double lam = regs_desc[li];
      bool better = score > best_score ||
                    (score == best_score && lam > best_lambda) ||
                    (score == best_score && lam == best_lambda && sigma > best_sigma);
      if (better) {
        best_score = score;
        best_sigma = sigma;
        best_lambda = lam;
      }
    }
  }

  return train_fixed(data, weights, best_sigma, best_lambda, control);
}

Eigen::VectorXd decision_scores(const KernelModel& model,
                                const std::vector<double>& query) {
  if (model.support_points.empty())
    throw std::invalid_argument("predict: model has no support points");
  if (query.size() != model.support_points[0].size())
    throw std::invalid_argument("predict: query dimension " +
                                std::to_string(query.size()) + " does not match model dim " +
                                std::to_string(model.support_points[0].size()));
  int n = static_cast<int>(model.support_points.size());
  int cols = model.num_classes - 1;
  Eigen::VectorXd scores = model.bias;
  for (int i = 0; i < n; ++i) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < query.size(); ++j) {
      double d = query[j] - model.support_points[i][j];
      d2 += d * d;
    }
    double kv = std::exp(-d2 / (2.0 * model.kernel_width * model.kernel_width));
    for (int c = 0; c < cols; ++c) scores(c) += model.coefficients(i, c) * kv;
  }
  return scores;
}

int predict(const KernelModel& model, const std::vector<double>& query) {
  Eigen::VectorXd scores = decision_scores(model, query);
  int best = 0;
  double bestv = scores.size() > 0 ? scores(0) : 0.0;
  for (int c = 1; c < model.num_classes; ++c) {
    double v = c < scores.size() ? scores(c) : 0.0;  // last class scores 0
    if (v > bestv) {
      bestv = v;
      best = c;
    }
  }
  return best;
}

double weighted_risk(const KernelModel& model, const Dataset& data,
                     const WeightVector& weights) {
  data.validate();
  weights.validate(data.size());
  int cols = model.num_classes - 1;
  double total = 0.0;
  Eigen::VectorXd probs;
  for (int i = 0; i < data.size(); ++i) {
    Eigen::VectorXd f = decision_scores(model, data.x(i));
    double lse = log_partition(f, probs);
    double li = lse - (data.label(i) < cols ? f(data.label(i)) : 0.0);
    total += weights[i] * li;
  }
  return total / data.size();
}

double objective_and_gradient(const Dataset& data, const WeightVector& weights,
                              double sigma, double lambda,
                              const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
  data.validate();
  weights.validate(data.size());
  if (data.num_classes < 2)
    throw std::invalid_argument("train: need at least 2 classes");
  if (!(sigma > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("train: sigma and lambda must be positive");
  int n = data.size();
  int cols = data.num_classes - 1;
  if (theta.size() != n * cols + cols)
    throw std::invalid_argument("objective_and_gradient: theta has length " +
                                std::to_string(theta.size()) + ", expected " +
                                std::to_string(n * cols + cols));
  double total = 0.0;
  for (double v : weights.weights) total += v;
  if (total <= 0.0) throw std::invalid_argument("train: all-zero weights");

  Eigen::MatrixXd X = feature_matrix(data);
  Eigen::MatrixXd K = gaussian_kernel(X, X, sigma);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = data.label(i);
  Objective obj{K, labels, weights.weights, 1.0 / total, lambda, n, cols};
  return obj(theta, grad);
}

double training_objective(const KernelModel& model, const Dataset& data,
                          const WeightVector& weights) {
  data.validate();
  weights.validate(data.size());
  double sw = 0.0;
  for (double v : weights.weights) sw += v;
  if (sw <= 0.0) throw std::invalid_argument("training_objective: all-zero weights");
  int cols = model.num_classes - 1;
  double loss = 0.0;
  Eigen::VectorXd probs;
  for (int i = 0; i < data.size(); ++i) {
    Eigen::VectorXd f = decision_scores(model, data.x(i));
    double lse = log_partition(f, probs);
    loss += weights[i] * (lse - (data.label(i) < cols ? f(data.label(i)) : 0.0));
  }
  // Penalty via the kernel expansion over the model's own support points.
  int n = static_cast<int>(model.support_points.size());
  double penalty = 0.0;
  for (int c = 0; c < cols; ++c) {
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) {
        double d2 = 0.0;
        for (std::size_t m = 0; m < model.support_points[i].size(); ++m) {
          double d = model.support_points[i][m] - model.support_points[j][m];
          d2 += d * d;
        }
        row += std::exp(-d2 / (2.0 * model.kernel_width * model.kernel_width)) *
               model.coefficients(j, c);
      }
      penalty += model.coefficients(i, c) * row;
    }
  }
  return loss / sw + model.regularization * penalty;
}

void save_model(const KernelModel& model, const std::string& path) {
  nlohmann::json j;
  j["kernel_width"] = model.kernel_width;
  j["regularization"] = model.regularization;
  j["num_classes"] = model.num_classes;
  j["bias"] = std::vector<double>(model.bias.data(), model.bias.data() + model.bias.size());
  nlohmann::json coeffs = nlohmann::json::array();
  for (int c = 0; c < model.coefficients.cols(); ++c) {
    std::vector<double> col(model.coefficients.rows());
    for (int i = 0; i < model.coefficients.rows(); ++i) col[i] = model.coefficients(i, c);
    coeffs.push_back(col);
  }
  j["coefficients"] = coeffs;
  j["support_points"] = model.support_points;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_model: cannot open " + path);
  f << j.dump(2) << "\n";
  if (!f) throw std::runtime_error("save_model: write failure on " + path);
}

KernelModel load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_model: missing file " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_model: malformed JSON in " + path + ": " + e.what());
  }
  KernelModel model;
  model.kernel_width = j.at("kernel_width").get<double>();
  model.regularization = j.at("regularization").get<double>();
  model.num_classes = j.at("num_classes").get<int>();
  model.support_points = j.at("support_points").get<std::vector<std::vector<double>>>();
  std::vector<double> bias = j.at("bias").get<std::vector<double>>();
  model.bias = Eigen::Map<Eigen::VectorXd>(bias.data(), bias.size());
  auto coeffs = j.at("coefficients").get<std::vector<std::vector<double>>>();
  if (coeffs.size() != static_cast<std::size_t>(model.num_classes - 1))
    throw std::runtime_error("load_model: coefficient column count mismatch in " + path);
  int n = static_cast<int>(model.support_points.size());
  model.coefficients.resize(n, model.num_classes - 1);
  for (std::size_t c = 0; c < coeffs.size(); ++c) {
    if (static_cast<int>(coeffs[c].size()) != n)
      throw std::runtime_error("load_model: coefficient length mismatch in " + path);
    for (int i = 0; i < n; ++i) model.coefficients(i, c) = coeffs[c][i];
  }
  return model;
}

}  // namespace priorshift
