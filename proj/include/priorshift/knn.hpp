#pragma once

#include <memory>
#include <vector>

#include "priorshift/dataset.hpp"

namespace priorshift {

// Exact k-nearest-neighbor search under Euclidean distance.
//
// Neighbors are ordered by (squared distance, sample index) ascending, which
// makes tie handling deterministic across runs and platforms. The default
// engine is brute force; the KD-tree accelerator returns the identical
// neighbor list, ties included, because tree pruning only discards subtrees
// whose closest possible point is strictly farther than the current k-th
// candidate pair.
class KnnIndex {
 public:
  enum class Engine { BruteForce, KdTree };

  KnnIndex(const Dataset& reference, Engine engine = Engine::BruteForce);
  ~KnnIndex();
  KnnIndex(KnnIndex&&) noexcept;
  KnnIndex& operator=(KnnIndex&&) noexcept;

  // Indices of the k nearest reference samples to `query`; `exclude` (when
  // >= 0) removes that reference sample from consideration.
  std::vector<int> neighbors(const std::vector<double>& query, int k,
                             int exclude = -1) const;

  int size() const;
  int dim() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// k-NN estimate of p(z | x): the proportion of each attribute class among the
// k nearest reference samples. With leave_one_out set, posterior_at(i) for a
// reference member excludes sample i itself; posterior(query) never excludes
// (external queries are not members of the reference set).
class KnnPosteriorEstimator {
 public:
  KnnPosteriorEstimator(const Dataset& reference, int k, bool leave_one_out,
                        KnnIndex::Engine engine = KnnIndex::Engine::BruteForce);

  std::vector<double> posterior(const std::vector<double>& query) const;
  std::vector<double> posterior_at(int reference_index) const;

  int k() const { return k_; }
  bool leave_one_out() const { return leave_one_out_; }

 private:
  std::vector<double> from_neighbors(const std::vector<int>& idx) const;

  const Dataset* reference_;
  KnnIndex index_;
  int k_;
  bool leave_one_out_;
};

}  // namespace priorshift
