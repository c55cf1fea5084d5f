#include "priorshift/knn.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace priorshift {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

using Cand = std::pair<double, int>;  // (squared distance, index)

struct KdNode {
  int split_dim = -1;
  double split_val = 0.0;
  int point = -1;        // leaf payload when >= 0
  int left = -1, right = -1;
};

}  // namespace

struct KnnIndex::Impl {
  const Dataset* data = nullptr;
  Engine engine = Engine::BruteForce;
  std::vector<KdNode> nodes;
  int root = -1;

  int build(std::vector<int>& idx, int lo, int hi, int depth) {
    if (hi - lo == 1) {
      nodes.push_back(KdNode{-1, 0.0, idx[lo], -1, -1});
      return static_cast<int>(nodes.size()) - 1;
    }
    int d = depth % data->dim;
    int mid = (lo + hi) / 2;
    std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                     [&](int a, int b) {
                       double va = data->x(a)[d], vb = data->x(b)[d];
                       return va != vb ? va < vb : a < b;
                     });
    double split = data->x(idx[mid])[d];
    int self = static_cast<int>(nodes.size());
    nodes.push_back(KdNode{d, split, -1, -1, -1});
    int l = build(idx, lo, mid, depth + 1);
    int r = build(idx, mid, hi, depth + 1);
    nodes[self].left = l;
    nodes[self].right = r;
    return self;
  }

  void search(int node, const std::vector<double>& query, int k, int exclude,
              std::priority_queue<Cand>& heap, std::vector<double>& off) const {
    const KdNode& nd = nodes[node];
    if (nd.point >= 0) {
      if (nd.point == exclude) return;
      Cand c{sq_dist(query, data->x(nd.point)), nd.point};
      if (static_cast<int>(heap.size()) < k) {
        heap.push(c);
      } else if (c < heap.top()) {
        heap.pop();
        heap.push(c);
      }
      return;
    }
    double delta = query[nd.split_dim] - nd.split_val;
    int near = delta <= 0.0 ? nd.left : nd.right;
    int far = delta <= 0.0 ? nd.right : nd.left;
    search(near, query, k, exclude, heap, off);
    // Visit the far side unless every point there is strictly farther than the
    // current k-th candidate; equality must recurse so tie sets match brute force.
    double gap = delta * delta;
    if (static_cast<int>(heap.size()) < k || gap <= heap.top().first)
      search(far, query, k, exclude, heap, off);
  }
};

KnnIndex::KnnIndex(const Dataset& reference, Engine engine)
    : impl_(new Impl) {
  if (reference.samples.empty())
    throw std::invalid_argument("knn: empty reference dataset");
  impl_->data = &reference;
  impl_->engine = engine;
  if (engine == Engine::KdTree) {
    std::vector<int> idx(reference.size());
    for (int i = 0; i < reference.size(); ++i) idx[i] = i;
    impl_->nodes.reserve(2 * reference.size());
    impl_->root = impl_->build(idx, 0, reference.size(), 0);
  }
}

KnnIndex::~KnnIndex() = default;
KnnIndex::KnnIndex(KnnIndex&&) noexcept = default;
KnnIndex& KnnIndex::operator=(KnnIndex&&) noexcept = default;

int KnnIndex::size() const { return impl_->data->size(); }
int KnnIndex::dim() const { return impl_->data->dim; }

std::vector<int> KnnIndex::neighbors(const std::vector<double>& query, int k,
                                     int exclude) const {
  const Dataset& data = *impl_->data;
  if (static_cast<int>(query.size()) != data.dim)
    throw std::invalid_argument("knn: query dimension " + std::to_string(query.size()) +
                                " does not match reference dim " + std::to_string(data.dim));
  int avail = data.size() - (exclude >= 0 ? 1 : 0);
  if (k <= 0 || k > avail)
    throw std::invalid_argument("knn: k=" + std::to_string(k) +
                                " out of range for " + std::to_string(avail) +
                                " available samples");

  std::vector<Cand> best;
  if (impl_->engine == Engine::BruteForce) {
    best.reserve(data.size());
    for (int i = 0; i < data.size(); ++i) {
      if (i == exclude) continue;
      best.emplace_back(sq_dist(query, data.x(i)), i);
    }
    std::partial_sort(best.begin(), best.begin() + k, best.end());
    best.resize(k);
  } else {
    std::priority_queue<Cand> heap;
    std::vector<double> off;
    impl_->search(impl_->root, query, k, exclude, heap, off);
    best.resize(heap.size());
    for (int i = static_cast<int>(best.size()) - 1; i >= 0; --i) {
      best[i] = heap.top();
      heap.pop();
    }
  }
  std::vector<int> out(k);
  for (int i = 0; i < k; ++i) out[i] = best[i].second;
  return out;
}

KnnPosteriorEstimator::KnnPosteriorEstimator(const Dataset& reference, int k,
                                             bool leave_one_out,
                                             KnnIndex::Engine engine)
    : reference_(&reference), index_(reference, engine), k_(k),
      leave_one_out_(leave_one_out) {
  int avail = reference.size() - (leave_one_out ? 1 : 0);
  if (k <= 0 || k > avail)
    throw std::invalid_argument("knn posterior: k=" + std::to_string(k) +
                                " out of range for " + std::to_string(avail) +
                                " available reference samples");
}

std::vector<double> KnnPosteriorEstimator::from_neighbors(const std::vector<int>& idx) const {
  std::vector<double> post(reference_->num_attributes, 0.0);
  for (int i : idx) post[reference_->attribute(i)] += 1.0;
  for (double& p : post) p /= static_cast<double>(k_);
  return post;
}

std::vector<double> KnnPosteriorEstimator::posterior(const std::vector<double>& query) const {
  return from_neighbors(index_.neighbors(query, k_));
}

std::vector<double> KnnPosteriorEstimator::posterior_at(int reference_index) const {
  if (reference_index < 0 || reference_index >= reference_->size())
    throw std::invalid_argument("knn posterior: reference index out of range");
  int exclude = leave_one_out_ ? reference_index : -1;
  return from_neighbors(index_.neighbors(reference_->x(reference_index), k_, exclude));
}

}  // namespace priorshift
