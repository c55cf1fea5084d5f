#include "priorshift/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "priorshift/knn.hpp"
#include "priorshift/rng.hpp"
#include "priorshift/toydata.hpp"
#include "priorshift/weights.hpp"

namespace priorshift {

double auc_tie_aware(const std::vector<double>& scores,
                     const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("auc: scores and labels differ in length");
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < scores.size(); ++i)
    (labels[i] == 1 ? pos : neg).push_back(scores[i]);
  if (pos.empty() || neg.empty())
    throw std::invalid_argument("auc: need both labels present");
  double credit = 0.0;
  for (double p : pos)
    for (double q : neg) {
      if (p > q)
        credit += 1.0;
      else if (p == q)
        credit += 0.5;
    }
  return credit / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

std::vector<std::optional<double>> assumption_diagnostic(const Dataset& source,
                                                         const Dataset& target,
                                                         std::uint64_t seed) {
  source.validate();
  target.validate();
  if (source.num_attributes != target.num_attributes)
    throw std::invalid_argument("assumption_diagnostic: attribute class counts differ (" +
                                std::to_string(source.num_attributes) + " vs " +
                                std::to_string(target.num_attributes) + ")");
  if (source.dim != target.dim)
    throw std::invalid_argument("assumption_diagnostic: feature dimensions differ");

  int num_attr = source.num_attributes;
  std::vector<std::optional<double>> result(num_attr);
  for (int z = 0; z < num_attr; ++z) {
    // Pooled z-restricted samples: source first (domain 0), then target (1).
    std::vector<std::vector<double>> points;
    std::vector<int> domain;
    for (int i = 0; i < source.size(); ++i)
      if (source.attribute(i) == z) {
        points.push_back(source.x(i));
        domain.push_back(0);
      }
    std::size_t n_source = points.size();
    for (int i = 0; i < target.size(); ++i)
      if (target.attribute(i) == z) {
        points.push_back(target.x(i));
        domain.push_back(1);
      }
    std::size_t n = points.size();
    if (n_source == 0 || n_source == n) continue;  // empty in one domain: undefined

    std::vector<int> perm =
        Rng::stream(seed, purpose::Diagnostic, static_cast<std::uint64_t>(z))
            .permutation(static_cast<int>(n));
    std::vector<int> fold(n);
    for (std::size_t i = 0; i < n; ++i)
      fold[perm[i]] = i < n / 2 ? 0 : 1;

    int k = default_knn_k(static_cast<int>(n));
    std::vector<double> scores(n, 0.0);
    for (int f = 0; f < 2; ++f) {
      std::vector<int> tr;
      for (std::size_t i = 0; i < n; ++i)
        if (fold[i] != f) tr.push_back(static_cast<int>(i));
      if (tr.empty()) continue;
      Dataset train_set;
      train_set.dim = source.dim;
      train_set.num_classes = 2;
      train_set.num_attributes = 1;
      for (int i : tr) train_set.samples.push_back({points[i], domain[i], 0});
      KnnIndex index(train_set);
      int kk = std::min(k, static_cast<int>(tr.size()));
      for (std::size_t i = 0; i < n; ++i) {
        if (fold[i] != f) continue;
        std::vector<int> nb = index.neighbors(points[i], kk);
        double votes = 0.0;
        for (int j : nb) votes += domain[tr[j]];
        scores[i] = votes / kk;
      }
    }
    result[z] = auc_tie_aware(scores, domain);
  }
  return result;
}

}  // namespace priorshift
