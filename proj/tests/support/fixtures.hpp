#pragma once

// Shared generators and reference implementations for the test binaries.

#include <Eigen/Geometry>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "locfuse/codebook.hpp"
#include "locfuse/core.hpp"
#include "locfuse/half.hpp"
#include "locfuse/pose.hpp"
#include "locfuse/rng.hpp"

namespace fixtures {

using namespace locfuse;

inline Eigen::Quaterniond random_rotation(SplitMix64& rng) {
  Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  q.normalize();
  return q;
}

inline Descriptor random_unit(SplitMix64& rng, std::size_t dim) {
  Descriptor v(dim);
  double n = 0.0;
  for (auto& x : v) {
    x = static_cast<float>(rng.normal());
    n += double(x) * x;
  }
  n = std::sqrt(n);
  for (auto& x : v) x = static_cast<float>(x / n);
  return v;
}

inline CameraIntrinsics test_camera() {
  CameraIntrinsics k;
  k.fx = k.fy = 500.0;
  k.cx = 320.0;
  k.cy = 240.0;
  k.width = 640;
  k.height = 480;
  return k;
}

struct PnpProblem {
  Pose truth;
  MatchSet matches;
  std::vector<bool> is_outlier;
  double diameter = 0.0;
};

// Points in a cube in front of a randomly oriented camera; outliers get a
// uniform random pixel.
inline PnpProblem make_pnp_problem(std::uint64_t seed, std::size_t n,
                                   double outlier_fraction, double noise_px) {
  SplitMix64 rng(seed);
  const CameraIntrinsics K = test_camera();
  PnpProblem p;
  const Eigen::Quaterniond q = random_rotation(rng);
  const Eigen::Vector3d center(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
  // Camera looks at the origin-centred cube from 5 units away.
  const Eigen::Matrix3d R = q.toRotationMatrix();
  const Eigen::Vector3d t = Eigen::Vector3d(0, 0, 5) - R * center;
  p.truth = Pose(q, t);
  const std::size_t n_out = static_cast<std::size_t>(std::llround(outlier_fraction * n));
  std::vector<Eigen::Vector3d> pts;
  while (p.matches.size() < n) {
    const Eigen::Vector3d local(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                                rng.uniform(-1.5, 1.5));
    const Eigen::Vector3d X = R.transpose() * (Eigen::Vector3d(0, 0, 5) + local - t);
    const auto px = project(p.truth, K, X);
    if (!px || (*px).x() < 0 || (*px).x() > K.width || (*px).y() < 0 || (*px).y() > K.height) {
      continue;
    }
    Match m;
    m.query_index = p.matches.size();
    m.point_id = p.matches.size();
    m.point_coord = X;
    const bool outlier = p.matches.size() < n_out;
    if (outlier) {
      m.keypoint = {rng.uniform(0, K.width), rng.uniform(0, K.height)};
    } else {
      m.keypoint = *px + Eigen::Vector2d(rng.normal(0, noise_px), rng.normal(0, noise_px));
    }
    p.is_outlier.push_back(outlier);
    p.matches.push_back(m);
    pts.push_back(X);
  }
  for (const auto& a : pts) {
    for (const auto& b : pts) p.diameter = std::max(p.diameter, (a - b).norm());
  }
  return p;
}

// Per-point mean of fused appearances computed with a plain loop over the
// observation list, in double, independent of the library's grouping code.
inline std::vector<std::vector<double>> naive_codebook(const MapDatabase& db,
                                                       const Reducer& reducer,
                                                       double lambda,
                                                       std::vector<PointId>& ids) {
  std::vector<PointId> all;
  for (const auto& p : db.points) all.push_back(p.id);
  std::sort(all.begin(), all.end());
  ids.clear();
  std::vector<std::vector<double>> out;
  for (PointId id : all) {
    std::vector<double> sum(reducer.out_dim(), 0.0);
    std::size_t count = 0;
    for (const auto& o : db.observations) {
      if (o.point_id != id) continue;
      const auto& bank = db.local_banks.at(o.image_id);
      std::vector<double> l(bank.dim());
      double n = 0.0;
      for (std::size_t k = 0; k < bank.dim(); ++k) {
        l[k] = bank.value(o.descriptor_row, k);
        n += l[k] * l[k];
      }
      std::size_t gi = 0;
      while (db.global_image_ids[gi] != o.image_id) ++gi;
      const Descriptor gfull = db.globals.row(gi);
      std::vector<double> g(reducer.out_dim());
      double gn = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        g[k] = gfull[reducer.index_list()[k]];
        gn += g[k] * g[k];
      }
      for (std::size_t k = 0; k < sum.size(); ++k) {
        sum[k] += lambda * l[k] / std::sqrt(n) + (1.0 - lambda) * g[k] / std::sqrt(gn);
      }
      ++count;
    }
    if (count == 0) continue;
    for (auto& v : sum) v /= static_cast<double>(count);
    ids.push_back(id);
    out.push_back(std::move(sum));
  }
  return out;
}

// Random map database: points with 3..10 observations spread over images.
inline MapDatabase random_database(std::uint64_t seed, std::size_t n_points,
                                   std::size_t n_images, std::size_t D, std::size_t G) {
  SplitMix64 rng(seed);
  MapDatabase db;
  for (ImageId i = 0; i < n_images; ++i) {
    db.local_banks.emplace(i * 3 + 1, DescriptorBank(D, BankKind::local));
  }
  db.globals = DescriptorBank(G, BankKind::global);
  for (const auto& [id, bank] : db.local_banks) {
    db.globals.append(random_unit(rng, G));
    db.global_image_ids.push_back(id);
  }
  for (std::size_t p = 0; p < n_points; ++p) {
    const PointId pid = 1000 + 7 * p;
    db.points.push_back({pid, Eigen::Vector3d(rng.uniform(-5, 5), rng.uniform(-5, 5),
                                              rng.uniform(-5, 5))});
    const std::size_t n_obs = 3 + rng.index(8);
    std::vector<ImageId> used;
    while (used.size() < n_obs && used.size() < n_images) {
      const ImageId img = static_cast<ImageId>(rng.index(n_images)) * 3 + 1;
      if (std::find(used.begin(), used.end(), img) != used.end()) continue;
      used.push_back(img);
      auto& bank = db.local_banks.at(img);
      Descriptor d(D);
      for (auto& x : d) x = static_cast<float>(rng.normal());
      Observation o;
      o.point_id = pid;
      o.image_id = img;
      o.keypoint = {rng.uniform(0, 640), rng.uniform(0, 480)};
      o.descriptor_row = bank.rows();
      bank.append(d);
      db.observations.push_back(o);
    }
  }
  // Reverse so the list is not already grouped by point.
  std::reverse(db.observations.begin(), db.observations.end());
  return db;
}

}  // namespace fixtures
