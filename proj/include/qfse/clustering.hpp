#pragma once

#include <cstdint>
#include <vector>

namespace qfse {

using Vector = std::vector<double>;

/// Projects mean-centered `vectors` onto their top `target_dim` principal
/// components. The effective rank is clamped to min(dim, n - 1) and the
/// numerical rank; trailing output dimensions beyond it are zero. Each
/// component's largest-magnitude loading is made positive.
std::vector<Vector> pca_reduce(const std::vector<Vector>& vectors, int target_dim);

struct ClusterModel {
  int k = 0;
  std::vector<int> assignments;            // cluster id per input vector
  std::vector<Vector> centroids;           // k entries
  std::vector<int> cluster_order;          // ids by size desc, ties lower id first
  std::vector<int> sizes;                  // members per cluster id
  std::vector<double> objective_trace;     // WCSS after each Lloyd assignment step
  int iterations = 0;
};

/// Seeded k-means++ initialization followed by Lloyd iterations until the
/// assignment stops changing or `max_iters` is reached. k is clamped to the
/// number of distinct vectors. Throws ArgumentError on empty input or k < 1.
ClusterModel kmeans(const std::vector<Vector>& vectors, int k, std::uint64_t seed,
                    int max_iters = 100);

double squared_distance(const Vector& a, const Vector& b);

}  // namespace qfse
