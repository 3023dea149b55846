#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "locfuse/core.hpp"

namespace locfuse {

struct KMeansResult {
  std::size_t k = 0;
  std::size_t dim = 0;
  std::vector<double> centroids;  // k x dim, row-major
  std::vector<std::uint32_t> assignment;
  double inertia = 0.0;
  // Inertia after each assignment step, in iteration order.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;

  std::span<const double> centroid(std::size_t c) const {
    return std::span(centroids).subspan(c * dim, dim);
  }
};

// k-means++ seeding from SplitMix64(seed), then Lloyd iterations until the
// assignment stops changing or max_iter is reached. An empty cluster takes
// over the point farthest from its centroid. Ties go to the lowest centroid
// index. Distances and centroids are computed in double.
KMeansResult kmeans(const DescriptorBank& data, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter = 100);

struct ClusterSpread {
  std::vector<double> entropy_bits;  // per cluster; empty clusters report 0
  std::vector<std::size_t> sizes;
  double mean_entropy_bits = 0.0;    // over non-empty clusters
};

// Shannon entropy of the region histogram of each cluster's members.
// `entry_points[i]` is the point behind row i of the clustered data.
ClusterSpread cluster_spread(const KMeansResult& result,
                             std::span<const PointId> entry_points,
                             const std::map<PointId, int>& region_of);

enum class FrustumLabel : std::uint8_t { inside, outside };

std::vector<FrustumLabel> frustum_classify(const MatchSet& matches,
                                           const Pose& query_pose,
                                           const CameraIntrinsics& intrinsics,
                                           double margin_px = 0.0);

}  // namespace locfuse
