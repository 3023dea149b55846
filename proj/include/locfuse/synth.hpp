#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "locfuse/codebook.hpp"
#include "locfuse/core.hpp"
#include "locfuse/pipeline.hpp"

namespace locfuse {

struct SynthConfig {
  std::size_t n_regions = 4;
  std::size_t points_per_region = 120;
  std::size_t n_db_images = 16;
  std::size_t n_query_images = 8;
  std::size_t local_dim = 64;
  std::size_t global_dim = 128;
  // Fraction of every region's points whose true local descriptor comes from
  // a bank shared by all regions.
  double aliasing = 0.8;
  double local_noise_sigma = 0.05;
  double keypoint_noise_px = 1.0;
  double region_spacing = 10.0;
  std::uint64_t seed = 0;

  // Geometry and appearance knobs with fixed defaults.
  double camera_distance = 3.0;
  double camera_jitter = 0.3;
  double global_cluster_spread = 0.05;  // norm of the intra-cluster perturbation
  double focal_px = 500.0;
  int image_width = 640;
  int image_height = 480;

  void validate() const;
};

struct SyntheticScene {
  SynthConfig config;
  MapDatabase db;
  std::vector<Pose> db_poses;
  std::vector<int> db_regions;
  CameraIntrinsics intrinsics;

  QuerySet queries;
  std::vector<Pose> query_poses;
  std::vector<int> query_regions;
  // Ground-truth point of every query keypoint, per query.
  std::vector<std::vector<PointId>> query_truth;

  std::map<PointId, int> region_of;
  std::vector<Descriptor> true_descriptors;  // indexed like db.points
};

// Regions are unit boxes centred at (r * region_spacing, 0, 0). Each camera
// looks at one region from camera_distance in front of it (-z side), with
// image j assigned to region j % n_regions.
//
// Draw order from SplitMix64(seed): point coordinates (region-major); the
// shared descriptor bank; the unique descriptors; global cluster centres
// (Gram-Schmidt orthonormalized, so mutually 90 degrees apart); then per db
// image: pose, keypoint noise and descriptor noise for each visible point
// in point order, global perturbation; then the same per query image.
SyntheticScene generate(const SynthConfig& cfg);

// Fraction of matches whose point is neither the ground-truth point nor in
// the ground-truth point's region.
double false_match_rate(const SyntheticScene& scene, std::size_t query,
                        const MatchSet& matches);

}  // namespace locfuse
