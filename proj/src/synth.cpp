#include "locfuse/synth.hpp"

#include <cmath>
#include <string>

#include "locfuse/pose.hpp"
#include "locfuse/rng.hpp"

namespace locfuse {

void SynthConfig::validate() const {
  if (n_regions == 0 || points_per_region == 0 || n_db_images == 0 ||
      n_query_images == 0 || local_dim == 0 || global_dim == 0) {
    throw Error(ErrorCode::InvalidArgument, "synthetic scene counts must be positive");
  }
  if (!(aliasing >= 0.0 && aliasing <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "aliasing must lie in [0, 1]");
  }
  if (global_dim < n_regions) {
    throw Error(ErrorCode::InvalidArgument,
                "global_dim must be >= n_regions for separable clusters");
  }
  if (local_dim > global_dim) {
    throw Error(ErrorCode::InvalidDims, "local_dim must not exceed global_dim");
  }
  if (!(local_noise_sigma >= 0.0) || !(keypoint_noise_px >= 0.0) ||
      !(region_spacing > 0.0) || !(camera_distance > 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "invalid noise or geometry parameter");
  }
}

namespace {

Descriptor unit_gaussian(SplitMix64& rng, std::size_t dim) {
  Descriptor v(dim);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (float& x : v) {
      x = static_cast<float>(rng.normal());
      n2 += static_cast<double>(x) * x;
    }
  } while (n2 == 0.0);
  const double inv = 1.0 / std::sqrt(n2);
  for (float& x : v) x = static_cast<float>(x * inv);
  return v;
}

Descriptor noisy_unit(SplitMix64& rng, const Descriptor& truth, double sigma) {
  std::vector<double> v(truth.size());
  double n2 = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = truth[k] + sigma * rng.normal();
    n2 += v[k] * v[k];
  }
  const double inv = 1.0 / std::sqrt(n2);
  Descriptor out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = static_cast<float>(v[k] * inv);
  return out;
}

Pose look_at(const Eigen::Vector3d& center, const Eigen::Vector3d& target) {
  const Eigen::Vector3d z = (target - center).normalized();
  const Eigen::Vector3d x = Eigen::Vector3d::UnitY().cross(z).normalized();
  const Eigen::Vector3d y = z.cross(x);
  Eigen::Matrix3d r;
  r.row(0) = x.transpose();
  r.row(1) = y.transpose();
  r.row(2) = z.transpose();
  return pose_from_matrix(r, -r * center);
}

Pose draw_camera(SplitMix64& rng, const SynthConfig& cfg, const Eigen::Vector3d& region_center) {
  const double j = cfg.camera_jitter;
  Eigen::Vector3d c = region_center + Eigen::Vector3d(rng.uniform(-j, j), rng.uniform(-j, j),
                                                      -cfg.camera_distance + rng.uniform(-j, j));
  Eigen::Vector3d target =
      region_center + Eigen::Vector3d(rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1),
                                      rng.uniform(-0.1, 0.1));
  return look_at(c, target);
}

double bounded_noise(SplitMix64& rng, double sigma) {
  const double v = rng.normal();
  return sigma * std::clamp(v, -5.0, 5.0);
}

struct View {
  Pose pose;
  std::vector<std::size_t> points;  // indices into db.points
  std::vector<Eigen::Vector2d> keypoints;
  std::vector<Descriptor> descriptors;
  Descriptor global;
};

View render_view(SplitMix64& rng, const SyntheticScene& scene, const SynthConfig& cfg,
                 int region, const std::vector<Descriptor>& centres,
                 const std::string& what) {
  View view;
  const Eigen::Vector3d rc(static_cast<double>(region) * cfg.region_spacing, 0.0, 0.0);
  view.pose = draw_camera(rng, cfg, rc);
  const auto& K = scene.intrinsics;
  for (std::size_t i = 0; i < scene.db.points.size(); ++i) {
    const auto px = project(view.pose, K, scene.db.points[i].coord);
    if (!px || (*px)[0] < 0.0 || (*px)[0] >= K.width || (*px)[1] < 0.0 ||
        (*px)[1] >= K.height) {
      continue;
    }
    Eigen::Vector2d kp = *px;
    kp[0] += bounded_noise(rng, cfg.keypoint_noise_px);
    kp[1] += bounded_noise(rng, cfg.keypoint_noise_px);
    view.points.push_back(i);
    view.keypoints.push_back(kp);
    view.descriptors.push_back(noisy_unit(rng, scene.true_descriptors[i], cfg.local_noise_sigma));
  }
  if (view.points.size() < 6) {
    throw Error(ErrorCode::InfeasibleGeometry,
                what + " sees only " + std::to_string(view.points.size()) + " points");
  }
  const std::size_t g = cfg.global_dim;
  const double per_component = cfg.global_cluster_spread / std::sqrt(static_cast<double>(g));
  view.global = noisy_unit(rng, centres[static_cast<std::size_t>(region)], per_component);
  return view;
}

DescriptorBank to_bank(const View& view, std::size_t dim) {
  DescriptorBank bank(dim, BankKind::local, Dtype::f32);
  bank.reserve(view.descriptors.size());
  for (const auto& d : view.descriptors) bank.append(d);
  std::vector<Eigen::Vector2f> kps;
  kps.reserve(view.keypoints.size());
  for (const auto& k : view.keypoints) kps.push_back(k.cast<float>());
  bank.set_keypoints(std::move(kps));
  return bank;
}

}  // namespace

SyntheticScene generate(const SynthConfig& cfg) {
  cfg.validate();
  SyntheticScene scene;
  scene.config = cfg;
  SplitMix64 rng(cfg.seed);

  const std::size_t r_count = cfg.n_regions;
  const std::size_t per = cfg.points_per_region;
  scene.intrinsics = CameraIntrinsics{cfg.focal_px,
                                      cfg.focal_px,
                                      cfg.image_width / 2.0,
                                      cfg.image_height / 2.0,
                                      cfg.image_width,
                                      cfg.image_height};

  for (std::size_t r = 0; r < r_count; ++r) {
    for (std::size_t p = 0; p < per; ++p) {
      Point3D pt;
      pt.id = r * per + p;
      pt.coord = Eigen::Vector3d(static_cast<double>(r) * cfg.region_spacing +
                                     rng.uniform(-0.5, 0.5),
                                 rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
      scene.db.points.push_back(pt);
      scene.region_of[pt.id] = static_cast<int>(r);
    }
  }

  const auto n_shared = static_cast<std::size_t>(std::llround(cfg.aliasing * static_cast<double>(per)));
  std::vector<Descriptor> shared;
  for (std::size_t k = 0; k < n_shared; ++k) shared.push_back(unit_gaussian(rng, cfg.local_dim));
  scene.true_descriptors.resize(scene.db.points.size());
  for (std::size_t r = 0; r < r_count; ++r) {
    for (std::size_t p = 0; p < per; ++p) {
      scene.true_descriptors[r * per + p] =
          p < n_shared ? shared[p] : unit_gaussian(rng, cfg.local_dim);
    }
  }

  // Orthonormal cluster centres.
  std::vector<Descriptor> centres;
  {
    std::vector<Eigen::VectorXd> basis;
    while (basis.size() < r_count) {
      Eigen::VectorXd v(cfg.global_dim);
      for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = rng.normal();
      for (const auto& b : basis) v -= b.dot(v) * b;
      if (v.norm() < 1e-6) continue;
      basis.push_back(v.normalized());
    }
    for (const auto& b : basis) {
      Descriptor c(cfg.global_dim);
      for (std::size_t k = 0; k < c.size(); ++k) c[k] = static_cast<float>(b[static_cast<Eigen::Index>(k)]);
      centres.push_back(std::move(c));
    }
  }

  scene.db.globals = DescriptorBank(cfg.global_dim, BankKind::global, Dtype::f32);
  for (std::size_t j = 0; j < cfg.n_db_images; ++j) {
    const int region = static_cast<int>(j % r_count);
    View view = render_view(rng, scene, cfg, region, centres,
                            "database image " + std::to_string(j));
    const auto image = static_cast<ImageId>(j);
    for (std::size_t i = 0; i < view.points.size(); ++i) {
      Observation obs;
      obs.point_id = scene.db.points[view.points[i]].id;
      obs.image_id = image;
      obs.keypoint = view.keypoints[i];
      obs.descriptor_row = i;
      scene.db.observations.push_back(obs);
    }
    scene.db.local_banks.emplace(image, to_bank(view, cfg.local_dim));
    scene.db.globals.append(view.global);
    scene.db.global_image_ids.push_back(image);
    scene.db_poses.push_back(view.pose);
    scene.db_regions.push_back(region);
  }

  scene.queries.globals = DescriptorBank(cfg.global_dim, BankKind::global, Dtype::f32);
  for (std::size_t q = 0; q < cfg.n_query_images; ++q) {
    const int region = static_cast<int>(q % r_count);
    View view = render_view(rng, scene, cfg, region, centres,
                            "query image " + std::to_string(q));
    scene.queries.names.push_back("query_" + std::to_string(q));
    scene.queries.locals.push_back(to_bank(view, cfg.local_dim));
    scene.queries.globals.append(view.global);
    scene.queries.intrinsics.push_back(scene.intrinsics);
    std::vector<PointId> truth;
    for (std::size_t i : view.points) truth.push_back(scene.db.points[i].id);
    scene.query_truth.push_back(std::move(truth));
    scene.query_poses.push_back(view.pose);
    scene.query_regions.push_back(region);
  }
  return scene;
}

double false_match_rate(const SyntheticScene& scene, std::size_t query,
                        const MatchSet& matches) {
  if (query >= scene.query_truth.size()) {
    throw Error(ErrorCode::UnknownKeypoint, "query " + std::to_string(query) + " does not exist");
  }
  if (matches.empty()) return 0.0;
  const auto& truth = scene.query_truth[query];
  std::size_t wrong = 0;
  for (const auto& m : matches) {
    if (m.query_index >= truth.size()) {
      throw Error(ErrorCode::UnknownKeypoint,
                  "keypoint " + std::to_string(m.query_index) + " is not part of query " +
                      std::to_string(query),
                  m.query_index);
    }
    const PointId gt = truth[m.query_index];
    const auto matched_region = scene.region_of.find(m.point_id);
    if (matched_region == scene.region_of.end()) {
      throw Error(ErrorCode::DanglingReference,
                  "matched point " + std::to_string(m.point_id) + " is not in the scene");
    }
    if (m.point_id != gt && matched_region->second != scene.region_of.at(gt)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(matches.size());
}

}  // namespace locfuse
