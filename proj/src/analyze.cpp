#include "locfuse/analyze.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "locfuse/parallel.hpp"
#include "locfuse/pose.hpp"
#include "locfuse/rng.hpp"

namespace locfuse {

namespace {

double squared_distance(const float* x, const double* c, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double diff = static_cast<double>(x[k]) - c[k];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

KMeansResult kmeans(const DescriptorBank& data, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter) {
  const std::size_t n = data.rows();
  const std::size_t dim = data.dim();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::KTooLarge,
                "k=" + std::to_string(k) + " with " + std::to_string(n) + " rows");
  }
  std::vector<float> x(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    data.read_row(i, std::span<float>(x.data() + i * dim, dim));
  }
  const auto row = [&](std::size_t i) { return x.data() + i * dim; };

  KMeansResult res;
  res.k = k;
  res.dim = dim;
  res.centroids.assign(k * dim, 0.0);
  res.assignment.assign(n, 0);
  const auto set_centroid_to_row = [&](std::size_t c, std::size_t i) {
    for (std::size_t d = 0; d < dim; ++d) res.centroids[c * dim + d] = row(i)[d];
  };

  // k-means++ seeding.
  SplitMix64 rng(seed);
  set_centroid_to_row(0, rng.index(n));
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(n, false);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i],
                            squared_distance(row(i), &res.centroids[(c - 1) * dim], dim));
      total += nearest[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform01() * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cum += nearest[i];
        if (nearest[i] > 0.0 && cum > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        for (std::size_t i = n; i-- > 0;) {
          if (nearest[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      (void)rng.next();
      pick = 0;
    }
    set_centroid_to_row(c, pick);
  }

  std::vector<double> dist(n);
  const auto assign = [&](std::vector<std::uint32_t>& out) {
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        std::uint32_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
          const double d = squared_distance(row(i), &res.centroids[c * dim], dim);
          if (d < best_d) {
            best_d = d;
            best = static_cast<std::uint32_t>(c);
          }
        }
        out[i] = best;
        dist[i] = best_d;
      }
    });
    double inertia = 0.0;
    for (double d : dist) inertia += d;
    return inertia;
  };

  std::vector<std::uint32_t> next(n, 0);
  bool have_previous = false;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    const double inertia = assign(next);
    res.inertia_history.push_back(inertia);
    res.iterations = iter + 1;
    const bool unchanged = have_previous && next == res.assignment;
    res.assignment = next;
    have_previous = true;
    if (unchanged) break;

    // Update step.
    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = res.assignment[i];
      ++counts[c];
      for (std::size_t d = 0; d < dim; ++d) sums[c * dim + d] += row(i)[d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < dim; ++d) {
        res.centroids[c * dim + d] = sums[c * dim + d] / static_cast<double>(counts[c]);
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      // Re-seed from the point farthest from its own centroid, taking it out
      // of its cluster (only clusters left with another member qualify).
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t owner = res.assignment[i];
        if (counts[owner] < 2) continue;
        const double d = squared_distance(row(i), &res.centroids[owner * dim], dim);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == n) continue;
      const std::size_t owner = res.assignment[far];
      for (std::size_t d = 0; d < dim; ++d) {
        sums[owner * dim + d] -= row(far)[d];
        res.centroids[owner * dim + d] =
            sums[owner * dim + d] / static_cast<double>(counts[owner] - 1);
      }
      --counts[owner];
      ++counts[c];
      res.assignment[far] = static_cast<std::uint32_t>(c);
      set_centroid_to_row(c, far);
    }
  }

  // The last update may have moved centroids; re-assign so every row sits at
  // its nearest centroid.
  res.inertia = assign(res.assignment);
  if (res.inertia < res.inertia_history.back()) {
    res.inertia_history.push_back(res.inertia);
  }
  return res;
}

ClusterSpread cluster_spread(const KMeansResult& result,
                             std::span<const PointId> entry_points,
                             const std::map<PointId, int>& region_of) {
  if (entry_points.size() != result.assignment.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "entry point list does not match the clustering");
  }
  std::vector<std::map<int, std::size_t>> histo(result.k);
  for (std::size_t i = 0; i < entry_points.size(); ++i) {
    const auto it = region_of.find(entry_points[i]);
    if (it == region_of.end()) {
      throw Error(ErrorCode::DanglingReference,
                  "point " + std::to_string(entry_points[i]) + " has no region");
    }
    ++histo[result.assignment[i]][it->second];
  }
  ClusterSpread out;
  out.entropy_bits.assign(result.k, 0.0);
  out.sizes.assign(result.k, 0);
  std::size_t non_empty = 0;
  double sum = 0.0;
  for (std::size_t c = 0; c < result.k; ++c) {
    std::size_t total = 0;
    for (const auto& [region, count] : histo[c]) total += count;
    out.sizes[c] = total;
    if (total == 0) continue;
    double h = 0.0;
    for (const auto& [region, count] : histo[c]) {
      const double p = static_cast<double>(count) / static_cast<double>(total);
      h -= p * std::log2(p);
    }
    out.entropy_bits[c] = h;
    sum += h;
    ++non_empty;
  }
  out.mean_entropy_bits = non_empty ? sum / static_cast<double>(non_empty) : 0.0;
  return out;
}

std::vector<FrustumLabel> frustum_classify(const MatchSet& matches,
                                           const Pose& query_pose,
                                           const CameraIntrinsics& intrinsics,
                                           double margin_px) {
  std::vector<FrustumLabel> labels;
  labels.reserve(matches.size());
  for (const auto& m : matches) {
    const auto px = project(query_pose, intrinsics, m.point_coord);
    const bool inside = px && (*px)[0] >= -margin_px &&
                        (*px)[0] <= intrinsics.width + margin_px &&
                        (*px)[1] >= -margin_px &&
                        (*px)[1] <= intrinsics.height + margin_px;
    labels.push_back(inside ? FrustumLabel::inside : FrustumLabel::outside);
  }
  return labels;
}

}  // namespace locfuse
