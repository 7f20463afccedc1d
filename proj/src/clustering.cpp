#include "qfse/clustering.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "qfse/errors.hpp"

namespace qfse {
namespace {

// Uniform double in [0, 1) from the raw 64-bit stream; independent of the
// standard library's distribution implementations.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int count_distinct(const std::vector<Vector>& vectors) {
  std::vector<const Vector*> ptrs;
  ptrs.reserve(vectors.size());
  for (const auto& v : vectors) ptrs.push_back(&v);
  std::sort(ptrs.begin(), ptrs.end(), [](const Vector* a, const Vector* b) { return *a < *b; });
  int distinct = 0;
  for (std::size_t i = 0; i < ptrs.size(); ++i) {
    if (i == 0 || *ptrs[i] != *ptrs[i - 1]) ++distinct;
  }
  return distinct;
}

}  // namespace

double squared_distance(const Vector& a, const Vector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::vector<Vector> pca_reduce(const std::vector<Vector>& vectors, int target_dim) {
  if (vectors.empty()) throw ArgumentError("pca_reduce: no vectors");
  if (target_dim < 1) throw ArgumentError("pca_reduce: target_dim must be >= 1");
  const auto n = static_cast<Eigen::Index>(vectors.size());
  const auto d = static_cast<Eigen::Index>(vectors.front().size());
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(vectors[static_cast<std::size_t>(i)].size()) != d) {
      throw ArgumentError("pca_reduce: vectors differ in dimension");
    }
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = vectors[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;

  std::vector<Vector> out(vectors.size(), Vector(static_cast<std::size_t>(target_dim), 0.0));
  if (n < 2 || d == 0) return out;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = sv.size() > 0 ? sv(0) * 1e-10 * static_cast<double>(std::max(n, d)) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  const Eigen::Index keep = std::min<Eigen::Index>({target_dim, d, n - 1, rank});
  if (keep == 0) return out;

  Eigen::MatrixXd components = svd.matrixV().leftCols(keep);
  for (Eigen::Index c = 0; c < keep; ++c) {
    Eigen::Index arg = 0;
    double best = -1;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (std::abs(components(j, c)) > best + 1e-12) {
        best = std::abs(components(j, c));
        arg = j;
      }
    }
    if (components(arg, c) < 0) components.col(c) *= -1.0;
  }
  const Eigen::MatrixXd projected = x * components;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < keep; ++c) {
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = projected(i, c);
    }
  }
  return out;
}

ClusterModel kmeans(const std::vector<Vector>& vectors, int k, std::uint64_t seed, int max_iters) {
  if (vectors.empty()) throw ArgumentError("kmeans: no vectors");
  if (k < 1) throw ArgumentError("kmeans: k must be >= 1");
  const std::size_t n = vectors.size();
  k = std::min(k, count_distinct(vectors));

  std::mt19937_64 rng(seed);
  ClusterModel model;
  model.k = k;

  // k-means++ seeding.
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t first = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n));
  model.centroids.push_back(vectors[std::min(first, n - 1)]);
  while (static_cast<int>(model.centroids.size()) < k) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(vectors[i], model.centroids.back()));
      total += d2[i];
    }
    if (total <= 0) break;
    const double target = unit_uniform(rng) * total;
    double acc = 0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] <= 0) continue;
      acc += d2[i];
      pick = i;
      if (acc > target) break;
    }
    model.centroids.push_back(vectors[pick]);
  }
  model.k = static_cast<int>(model.centroids.size());

  model.assignments.assign(n, -1);
  for (int iter = 0; iter < std::max(1, max_iters); ++iter) {
    bool changed = false;
    double wcss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < model.k; ++c) {
        const double dist = squared_distance(vectors[i], model.centroids[static_cast<std::size_t>(c)]);
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      if (model.assignments[i] != best) {
        model.assignments[i] = best;
        changed = true;
      }
      wcss += best_d;
    }
    model.objective_trace.push_back(wcss);
    model.iterations = iter + 1;
    if (!changed) break;

    const std::size_t dim = vectors.front().size();
    std::vector<Vector> sums(static_cast<std::size_t>(model.k), Vector(dim, 0.0));
    std::vector<int> counts(static_cast<std::size_t>(model.k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(model.assignments[i]);
      ++counts[c];
      for (std::size_t j = 0; j < dim; ++j) sums[c][j] += vectors[i][j];
    }
    for (std::size_t c = 0; c < sums.size(); ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t j = 0; j < dim; ++j) sums[c][j] /= counts[c];
      model.centroids[c] = std::move(sums[c]);
    }
  }

  model.sizes.assign(static_cast<std::size_t>(model.k), 0);
  for (int a : model.assignments) ++model.sizes[static_cast<std::size_t>(a)];
  model.cluster_order.resize(static_cast<std::size_t>(model.k));
  std::iota(model.cluster_order.begin(), model.cluster_order.end(), 0);
  std::stable_sort(model.cluster_order.begin(), model.cluster_order.end(), [&](int a, int b) {
    return model.sizes[static_cast<std::size_t>(a)] > model.sizes[static_cast<std::size_t>(b)];
  });
  return model;
}

}  // namespace qfse
