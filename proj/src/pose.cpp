#include "locfuse/pose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "locfuse/rng.hpp"

namespace locfuse {

void RansacConfig::validate() const {
  if (!(reproj_threshold_px > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "reprojection threshold must be > 0");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "confidence must lie in (0, 1)");
  }
  if (max_iterations == 0) {
    throw Error(ErrorCode::InvalidArgument, "max_iterations must be positive");
  }
}

std::optional<Eigen::Vector2d> project(const Pose& pose, const CameraIntrinsics& K,
                                       const Eigen::Vector3d& world) {
  const Eigen::Vector3d c = pose.transform(world);
  if (!(c.z() > 1e-9)) return std::nullopt;
  return Eigen::Vector2d(K.fx * c.x() / c.z() + K.cx, K.fy * c.y() / c.z() + K.cy);
}

namespace {

using Poly = std::vector<double>;  // coefficient of v^i at index i

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly poly_add(const Poly& a, const Poly& b, double scale_b = 1.0) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += scale_b * b[i];
  return out;
}

double poly_eval(const Poly& p, double v) {
  double acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * v + p[i];
  return acc;
}

double poly_deriv_eval(const Poly& p, double v) {
  double acc = 0.0;
  for (std::size_t i = p.size(); i-- > 1;) acc = acc * v + static_cast<double>(i) * p[i];
  return acc;
}

std::vector<double> real_roots(Poly p) {
  double scale = 0.0;
  for (double c : p) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};
  while (p.size() > 1 && std::abs(p.back()) <= 1e-14 * scale) p.pop_back();
  const std::size_t deg = p.size() - 1;
  if (deg == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (std::size_t i = 0; i < deg; ++i) {
    companion(0, i) = -p[deg - 1 - i] / p[deg];
    if (i + 1 < deg) companion(i + 1, i) = 1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const auto z = solver.eigenvalues()[i];
    // Near-double roots split into complex pairs with a small imaginary
    // part; keep their real part and let the depth check decide.
    if (std::abs(z.imag()) > 1e-3 * std::max(1.0, std::abs(z.real()))) continue;
    double v = z.real();
    for (int it = 0; it < 8; ++it) {
      const double d = poly_deriv_eval(p, v);
      if (d == 0.0) break;
      const double step = poly_eval(p, v) / d;
      if (!std::isfinite(step)) break;
      // Near a double root the derivative vanishes and a full step can jump
      // to a neighbouring root.
      if (std::abs(poly_eval(p, v - step)) >= std::abs(poly_eval(p, v))) break;
      v -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(v))) break;
    }
    roots.push_back(v);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Rigid transform taking world points onto camera-frame points.
Pose align_triangles(const std::array<Eigen::Vector3d, 3>& world,
                     const std::array<Eigen::Vector3d, 3>& cam) {
  const Eigen::Vector3d wc = (world[0] + world[1] + world[2]) / 3.0;
  const Eigen::Vector3d cc = (cam[0] + cam[1] + cam[2]) / 3.0;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) h += (world[i] - wc) * (cam[i] - cc).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  Eigen::Matrix3d s = Eigen::Matrix3d::Identity();
  if ((v * u.transpose()).determinant() < 0.0) s(2, 2) = -1.0;
  const Eigen::Matrix3d r = v * s * u.transpose();
  return Pose::normalized(Eigen::Quaterniond(r), cc - r * wc);
}

}  // namespace

std::vector<Pose> p3p_solve(const std::array<Correspondence, 3>& sample,
                            const CameraIntrinsics& K) {
  const Eigen::Vector3d& p1 = sample[0].world;
  const Eigen::Vector3d& p2 = sample[1].world;
  const Eigen::Vector3d& p3 = sample[2].world;
  const double scale = std::max({(p2 - p1).norm(), (p3 - p1).norm(), (p3 - p2).norm()});
  const double area = 0.5 * (p2 - p1).cross(p3 - p1).norm();
  if (!(scale > 0.0) || !(area > 1e-9 * scale * scale)) {
    throw Error(ErrorCode::DegenerateConfiguration, "world points are collinear");
  }

  std::array<Eigen::Vector3d, 3> f;
  for (int i = 0; i < 3; ++i) {
    f[i] = Eigen::Vector3d((sample[i].pixel.x() - K.cx) / K.fx,
                           (sample[i].pixel.y() - K.cy) / K.fy, 1.0)
               .normalized();
  }
  const double a2 = (p2 - p3).squaredNorm();
  const double b2 = (p1 - p3).squaredNorm();
  const double c2 = (p1 - p2).squaredNorm();
  const double ca = f[1].dot(f[2]);
  const double cb = f[0].dot(f[2]);
  const double cg = f[0].dot(f[1]);

  // Depths s1, s2 = u s1, s3 = v s1. Eliminating s1 and u leaves
  //   u = n(v) / m(v),  b2 n^2 - 2 b2 cg n m + (b2 - c2 q(v)) m^2 = 0
  // with q(v) = 1 + v^2 - 2 v cb.
  const Poly q{1.0, -2.0 * cb, 1.0};
  const Poly n{-b2 - (a2 - c2), 2.0 * (a2 - c2) * cb, b2 - (a2 - c2)};
  const Poly m{-2.0 * b2 * cg, 2.0 * b2 * ca};
  const Poly quartic = poly_add(
      poly_add(poly_mul(n, n), poly_mul(n, m), -2.0 * cg),
      poly_mul(poly_add(Poly{1.0}, q, -c2 / b2), poly_mul(m, m)));
  // (the b2 factor on the first two terms is divided out)

  const auto residual = [&](const Eigen::Vector3d& s) {
    return Eigen::Vector3d(s[1] * s[1] + s[2] * s[2] - 2.0 * s[1] * s[2] * ca - a2,
                           s[0] * s[0] + s[2] * s[2] - 2.0 * s[0] * s[2] * cb - b2,
                           s[0] * s[0] + s[1] * s[1] - 2.0 * s[0] * s[1] * cg - c2);
  };
  const double tol = 1e-6 * std::max({a2, b2, c2});

  std::vector<Pose> out;
  std::vector<Eigen::Vector3d> accepted;
  for (double v : real_roots(quartic)) {
    const double qv = poly_eval(q, v);
    if (!(qv > 0.0) || !(v > 0.0)) continue;
    const double s1 = std::sqrt(b2 / qv);
    // u from n/m is 0/0 on symmetric configurations, so take both roots of
    // the c-constraint u^2 - 2 u cg + 1 - c2/s1^2 = 0 and let the
    // a-constraint decide.
    const double disc = cg * cg - 1.0 + c2 / (s1 * s1);
    if (disc < -1e-9) continue;
    const double root = std::sqrt(std::max(0.0, disc));
    for (double u : {cg - root, cg + root}) {
      Eigen::Vector3d s(s1, u * s1, v * s1);
      if (!(s.minCoeff() > 0.0)) continue;
      if (std::abs(residual(s)[0]) > 1e-3 * a2) continue;
      // Newton polish of the depths on the three distance constraints.
      for (int it = 0; it < 5; ++it) {
        Eigen::Matrix3d jac;
        jac << 0.0, 2.0 * s[1] - 2.0 * s[2] * ca, 2.0 * s[2] - 2.0 * s[1] * ca,
            2.0 * s[0] - 2.0 * s[2] * cb, 0.0, 2.0 * s[2] - 2.0 * s[0] * cb,
            2.0 * s[0] - 2.0 * s[1] * cg, 2.0 * s[1] - 2.0 * s[0] * cg, 0.0;
        const Eigen::Vector3d r = residual(s);
        const auto lu = jac.fullPivLu();
        if (!lu.isInvertible()) break;
        const Eigen::Vector3d next = s - lu.solve(r);
        if (!next.allFinite() || residual(next).norm() > r.norm()) break;
        s = next;
      }
      if (!(s.minCoeff() > 0.0) || residual(s).cwiseAbs().maxCoeff() > tol) continue;
      const bool duplicate = std::any_of(accepted.begin(), accepted.end(), [&](const auto& o) {
        return (o - s).norm() <= 1e-9 * s.norm();
      });
      if (duplicate) continue;
      accepted.push_back(s);
      const std::array<Eigen::Vector3d, 3> cam{s[0] * f[0], s[1] * f[1], s[2] * f[2]};
      out.push_back(align_triangles({p1, p2, p3}, cam));
    }
  }
  return out;
}

double reprojection_cost(const Pose& pose, std::span<const Correspondence> points,
                         const CameraIntrinsics& K) {
  double cost = 0.0;
  for (const auto& c : points) {
    const auto px = project(pose, K, c.world);
    if (!px) return std::numeric_limits<double>::infinity();
    cost += (*px - c.pixel).squaredNorm();
  }
  return cost;
}

Pose refine_pose(const Pose& initial, std::span<const Correspondence> points,
                 const CameraIntrinsics& K, std::size_t max_iterations) {
  Pose current = initial;
  double cost = reprojection_cost(current, points, K);
  if (points.size() < 3 || !std::isfinite(cost)) return current;

  const auto apply = [](const Pose& p, const Eigen::Matrix<double, 6, 1>& delta) {
    const Eigen::Vector3d w = delta.head<3>();
    const double angle = w.norm();
    const Eigen::Quaterniond dq =
        angle > 0.0 ? Eigen::Quaterniond(Eigen::AngleAxisd(angle, w / angle))
                    : Eigen::Quaterniond::Identity();
    // X_c = dR (R X) + t + dt, so t' = dR t + dt keeps the left perturbation.
    return Pose::normalized(dq * p.rotation(),
                            dq * p.translation() + delta.tail<3>());
  };

  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    Eigen::Matrix<double, 6, 6> jtj = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> jtr = Eigen::Matrix<double, 6, 1>::Zero();
    const Eigen::Matrix3d r = current.rotation_matrix();
    for (const auto& c : points) {
      const Eigen::Vector3d rx = r * c.world;
      const Eigen::Vector3d xc = rx + current.translation();
      const double iz = 1.0 / xc.z();
      const Eigen::Vector2d res(K.fx * xc.x() * iz + K.cx - c.pixel.x(),
                                K.fy * xc.y() * iz + K.cy - c.pixel.y());
      Eigen::Matrix<double, 2, 3> dproj;
      dproj << K.fx * iz, 0.0, -K.fx * xc.x() * iz * iz, 0.0, K.fy * iz,
          -K.fy * xc.y() * iz * iz;
      Eigen::Matrix<double, 3, 6> dx;
      dx.leftCols<3>() << 0.0, rx.z(), -rx.y(), -rx.z(), 0.0, rx.x(), rx.y(), -rx.x(),
          0.0;
      // The translation update dt enters after dR is applied to t as well;
      // d(dR t)/dw = -[t]x.
      const Eigen::Vector3d& t = current.translation();
      Eigen::Matrix3d tx;
      tx << 0.0, t.z(), -t.y(), -t.z(), 0.0, t.x(), t.y(), -t.x(), 0.0;
      dx.leftCols<3>() += tx;
      dx.rightCols<3>().setIdentity();
      const Eigen::Matrix<double, 2, 6> j = dproj * dx;
      jtj += j.transpose() * j;
      jtr += j.transpose() * res;
    }
    const Eigen::Matrix<double, 6, 1> step = -jtj.ldlt().solve(jtr);
    if (!step.allFinite()) break;

    Eigen::Matrix<double, 6, 1> trial_step = step;
    bool improved = false;
    for (int halving = 0; halving <= 10; ++halving) {
      const Pose trial = apply(current, trial_step);
      const double trial_cost = reprojection_cost(trial, points, K);
      if (trial_cost <= cost) {
        current = trial;
        cost = trial_cost;
        improved = true;
        break;
      }
      trial_step *= 0.5;
    }
    if (!improved || trial_step.norm() < 1e-8) break;
  }
  return current;
}

namespace {

bool is_inlier(const Pose& pose, const CameraIntrinsics& K, const Match& m,
               double threshold2) {
  const auto px = project(pose, K, m.point_coord);
  return px && (*px - m.keypoint).squaredNorm() < threshold2;
}

}  // namespace

PoseResult ransac_pnp(const MatchSet& matches, const CameraIntrinsics& K,
                      const RansacConfig& cfg) {
  cfg.validate();
  const std::size_t n = matches.size();
  if (n < 3) {
    throw Error(ErrorCode::TooFewMatches,
                std::to_string(n) + " matches, need at least 3");
  }
  const double threshold2 = cfg.reproj_threshold_px * cfg.reproj_threshold_px;
  const double log_fail = std::log(1.0 - cfg.confidence);

  SplitMix64 rng(cfg.seed);
  PoseResult result;
  std::size_t best_count = 0;
  std::size_t needed = cfg.max_iterations;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 10 * cfg.max_iterations;

  while (result.iterations_run < std::min(needed, cfg.max_iterations) &&
         attempts < max_attempts) {
    ++attempts;
    std::array<std::size_t, 3> idx{};
    idx[0] = rng.index(n);
    do idx[1] = rng.index(n); while (idx[1] == idx[0]);
    do idx[2] = rng.index(n); while (idx[2] == idx[0] || idx[2] == idx[1]);
    std::array<Correspondence, 3> sample;
    for (int i = 0; i < 3; ++i) {
      sample[i] = {matches[idx[i]].keypoint, matches[idx[i]].point_coord};
    }
    std::vector<Pose> candidates;
    try {
      candidates = p3p_solve(sample, K);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateConfiguration) continue;
      throw;
    }
    ++result.iterations_run;
    for (const Pose& candidate : candidates) {
      std::size_t count = 0;
      for (const auto& m : matches) count += is_inlier(candidate, K, m, threshold2);
      if (count > best_count) {
        best_count = count;
        result.pose = candidate;
        const double w = static_cast<double>(count) / static_cast<double>(n);
        const double miss = 1.0 - w * w * w;
        if (miss <= 0.0) {
          needed = result.iterations_run;
        } else {
          const double k = std::ceil(log_fail / std::log(miss));
          needed = k < static_cast<double>(cfg.max_iterations)
                       ? static_cast<std::size_t>(std::max(k, 1.0))
                       : cfg.max_iterations;
        }
      }
    }
  }

  result.inlier_mask.assign(n, false);
  if (best_count < 3) return result;

  std::vector<Correspondence> inliers;
  for (const auto& m : matches) {
    if (is_inlier(result.pose, K, m, threshold2)) {
      inliers.push_back({m.keypoint, m.point_coord});
    }
  }
  result.refine_cost_before = reprojection_cost(result.pose, inliers, K);
  result.pose = refine_pose(result.pose, inliers, K);
  result.refine_cost_after = reprojection_cost(result.pose, inliers, K);

  for (std::size_t i = 0; i < n; ++i) {
    result.inlier_mask[i] = is_inlier(result.pose, K, matches[i], threshold2);
  }
  result.num_inliers = static_cast<std::size_t>(
      std::count(result.inlier_mask.begin(), result.inlier_mask.end(), true));
  result.success = result.num_inliers >= cfg.min_inliers;
  return result;
}

}  // namespace locfuse
