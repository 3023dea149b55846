#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "locfuse/core.hpp"

namespace locfuse {

struct RansacConfig {
  double reproj_threshold_px = 12.0;
  std::size_t max_iterations = 10000;
  double confidence = 0.9999;
  std::size_t min_inliers = 8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PoseResult {
  Pose pose;
  std::vector<bool> inlier_mask;
  std::size_t num_inliers = 0;
  std::size_t iterations_run = 0;
  bool success = false;
  // Sum of squared reprojection errors over the refinement set, before and
  // after Gauss-Newton.
  double refine_cost_before = 0.0;
  double refine_cost_after = 0.0;
};

// Pinhole projection. nullopt when the camera-frame depth is <= 1e-9.
std::optional<Eigen::Vector2d> project(const Pose& pose, const CameraIntrinsics& K,
                                       const Eigen::Vector3d& world);

struct Correspondence {
  Eigen::Vector2d pixel;
  Eigen::Vector3d world;
};

// Minimal absolute pose from three correspondences (Grunert's distance
// formulation). Depth ratios come from a quartic whose coefficients are
// built by polynomial elimination; roots are taken from the companion
// matrix, Newton-polished, and the camera-frame triangle is aligned to the
// world triangle with Kabsch. Candidates are ordered by the quartic root.
// Throws DegenerateConfiguration for (near-)collinear world points.
std::vector<Pose> p3p_solve(const std::array<Correspondence, 3>& sample,
                            const CameraIntrinsics& K);

// Minimizes the summed squared reprojection error over `points` by
// Gauss-Newton with step halving; never returns a pose with higher cost.
Pose refine_pose(const Pose& initial, std::span<const Correspondence> points,
                 const CameraIntrinsics& K, std::size_t max_iterations = 20);

double reprojection_cost(const Pose& pose, std::span<const Correspondence> points,
                         const CameraIntrinsics& K);

// RANSAC over P3P samples followed by refinement on the inliers. Throws
// TooFewMatches below three matches; a consensus below min_inliers comes
// back with success = false.
PoseResult ransac_pnp(const MatchSet& matches, const CameraIntrinsics& K,
                      const RansacConfig& cfg);

}  // namespace locfuse
