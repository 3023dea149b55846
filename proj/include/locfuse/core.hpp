#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "locfuse/error.hpp"

namespace locfuse {

using PointId = std::uint64_t;
using ImageId = std::uint32_t;

// A single feature vector. Banks hold many of these; this owning form is
// used for per-vector operations (reduction, fusion).
using Descriptor = std::vector<float>;

enum class Dtype : std::uint8_t { f32 = 0, f16 = 1 };
enum class BankKind : std::uint8_t { local = 0, global = 1 };

std::size_t dtype_size(Dtype dtype);

// Dense N x D matrix of descriptors, row-major. With Dtype::f16 the half
// bits are the stored representation; reads widen them to float.
// Local banks may carry one keypoint (pixels) per row.
class DescriptorBank {
 public:
  DescriptorBank(std::size_t dim, BankKind kind, Dtype dtype = Dtype::f32);

  // Throws DimensionMismatch / NonFiniteValue naming the first bad row.
  static DescriptorBank from_rows(std::span<const Descriptor> rows,
                                  std::size_t dim, BankKind kind,
                                  Dtype dtype = Dtype::f32);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rows() const noexcept { return rows_; }
  Dtype dtype() const noexcept { return dtype_; }
  BankKind kind() const noexcept { return kind_; }
  bool empty() const noexcept { return rows_ == 0; }

  void append(std::span<const float> row);
  void reserve(std::size_t rows);

  float value(std::size_t row, std::size_t k) const;
  void read_row(std::size_t row, std::span<float> out) const;
  Descriptor row(std::size_t row) const;

  // Raw storage; exactly one of these is non-empty depending on dtype.
  std::span<const float> f32_data() const noexcept { return f32_; }
  std::span<const std::uint16_t> f16_data() const noexcept { return f16_; }

  // Constructs directly from stored half bits (used by file readers).
  static DescriptorBank from_half_bits(std::vector<std::uint16_t> bits,
                                       std::size_t dim, BankKind kind);
  static DescriptorBank from_floats(std::vector<float> values, std::size_t dim,
                                    BankKind kind);

  bool has_keypoints() const noexcept { return !keypoints_.empty(); }
  const std::vector<Eigen::Vector2f>& keypoints() const noexcept {
    return keypoints_;
  }
  void set_keypoints(std::vector<Eigen::Vector2f> keypoints);

  // Bitwise equality of shape, storage and keypoints.
  friend bool operator==(const DescriptorBank&, const DescriptorBank&);

 private:
  std::size_t dim_;
  std::size_t rows_ = 0;
  Dtype dtype_;
  BankKind kind_;
  std::vector<float> f32_;
  std::vector<std::uint16_t> f16_;
  std::vector<Eigen::Vector2f> keypoints_;
};

// Validates rows about to form a bank of dimension `dim`.
void validate_bank(std::span<const Descriptor> rows, std::size_t dim);
// Re-checks an existing bank: finiteness, and for f16 that every stored
// value survives half -> float -> half unchanged.
void validate_bank(const DescriptorBank& bank);

struct Point3D {
  PointId id = 0;
  Eigen::Vector3d coord = Eigen::Vector3d::Zero();
};

struct Observation {
  PointId point_id = 0;
  ImageId image_id = 0;
  Eigen::Vector2d keypoint = Eigen::Vector2d::Zero();
  std::size_t descriptor_row = 0;
};

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;

  void validate() const;
};

// World-to-camera rigid transform: X_cam = R * X + t. The quaternion is kept
// with w >= 0.
class Pose {
 public:
  Pose() = default;
  // Requires |q| within 1e-9 of 1; throws NotARotation otherwise.
  Pose(const Eigen::Quaterniond& rotation, const Eigen::Vector3d& translation);

  // Normalizes q first. For internal use where q comes out of arithmetic.
  static Pose normalized(const Eigen::Quaterniond& rotation,
                         const Eigen::Vector3d& translation);

  const Eigen::Quaterniond& rotation() const noexcept { return rotation_; }
  const Eigen::Vector3d& translation() const noexcept { return translation_; }
  Eigen::Matrix3d rotation_matrix() const { return rotation_.toRotationMatrix(); }
  Eigen::Vector3d center() const;
  Eigen::Vector3d transform(const Eigen::Vector3d& world) const;

 private:
  Eigen::Quaterniond rotation_ = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation_ = Eigen::Vector3d::Zero();
};

// R must be orthonormal with det +1 within 1e-6.
Pose pose_from_matrix(const Eigen::Matrix3d& rotation,
                      const Eigen::Vector3d& translation);

struct Match {
  std::size_t query_index = 0;
  Eigen::Vector2d keypoint = Eigen::Vector2d::Zero();
  PointId point_id = 0;
  Eigen::Vector3d point_coord = Eigen::Vector3d::Zero();
  float distance = 0.0f;  // squared Euclidean
};

using MatchSet = std::vector<Match>;

}  // namespace locfuse
