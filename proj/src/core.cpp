#include "locfuse/core.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "locfuse/half.hpp"

namespace locfuse {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DtypeViolation: return "DtypeViolation";
    case ErrorCode::NotARotation: return "NotARotation";
    case ErrorCode::InvalidDims: return "InvalidDims";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptyDatabase: return "EmptyDatabase";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::MissingGlobal: return "MissingGlobal";
    case ErrorCode::TooManyCells: return "TooManyCells";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::TooFewMatches: return "TooFewMatches";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::UnknownKeypoint: return "UnknownKeypoint";
    case ErrorCode::InfeasibleGeometry: return "InfeasibleGeometry";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::ReducerMismatch: return "ReducerMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingIntrinsics: return "MissingIntrinsics";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::size_t dtype_size(Dtype dtype) { return dtype == Dtype::f16 ? 2 : 4; }

namespace {

void check_row(std::span<const float> row, std::size_t dim, std::size_t index) {
  if (row.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "row " + std::to_string(index) + " has length " +
                    std::to_string(row.size()) + ", expected " +
                    std::to_string(dim),
                index);
  }
  for (float v : row) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteValue,
                  "row " + std::to_string(index) + " contains a non-finite value",
                  index);
    }
  }
}

}  // namespace

DescriptorBank::DescriptorBank(std::size_t dim, BankKind kind, Dtype dtype)
    : dim_(dim), dtype_(dtype), kind_(kind) {
  if (dim == 0) throw Error(ErrorCode::InvalidDims, "descriptor dim must be >= 1");
}

DescriptorBank DescriptorBank::from_rows(std::span<const Descriptor> rows,
                                         std::size_t dim, BankKind kind,
                                         Dtype dtype) {
  validate_bank(rows, dim);
  DescriptorBank bank(dim, kind, dtype);
  bank.reserve(rows.size());
  for (const auto& r : rows) bank.append(r);
  return bank;
}

DescriptorBank DescriptorBank::from_half_bits(std::vector<std::uint16_t> bits,
                                              std::size_t dim, BankKind kind) {
  DescriptorBank bank(dim, kind, Dtype::f16);
  if (bits.size() % dim != 0) {
    throw Error(ErrorCode::DimensionMismatch, "half storage not a multiple of dim");
  }
  bank.rows_ = bits.size() / dim;
  bank.f16_ = std::move(bits);
  validate_bank(bank);
  return bank;
}

DescriptorBank DescriptorBank::from_floats(std::vector<float> values,
                                           std::size_t dim, BankKind kind) {
  DescriptorBank bank(dim, kind, Dtype::f32);
  if (values.size() % dim != 0) {
    throw Error(ErrorCode::DimensionMismatch, "float storage not a multiple of dim");
  }
  bank.rows_ = values.size() / dim;
  bank.f32_ = std::move(values);
  validate_bank(bank);
  return bank;
}

void DescriptorBank::reserve(std::size_t rows) {
  if (dtype_ == Dtype::f16) {
    f16_.reserve(rows * dim_);
  } else {
    f32_.reserve(rows * dim_);
  }
}

void DescriptorBank::append(std::span<const float> row) {
  check_row(row, dim_, rows_);
  if (dtype_ == Dtype::f16) {
    for (float v : row) {
      const std::uint16_t h = float_to_half(v);
      if (!std::isfinite(half_to_float(h))) {
        throw Error(ErrorCode::DtypeViolation,
                    "row " + std::to_string(rows_) + " overflows half precision",
                    rows_);
      }
      f16_.push_back(h);
    }
  } else {
    f32_.insert(f32_.end(), row.begin(), row.end());
  }
  ++rows_;
}

float DescriptorBank::value(std::size_t row, std::size_t k) const {
  const std::size_t i = row * dim_ + k;
  return dtype_ == Dtype::f16 ? half_to_float(f16_[i]) : f32_[i];
}

void DescriptorBank::read_row(std::size_t row, std::span<float> out) const {
  const std::size_t base = row * dim_;
  if (dtype_ == Dtype::f16) {
    half_to_float(std::span(f16_).subspan(base, dim_), out);
  } else {
    for (std::size_t k = 0; k < dim_; ++k) out[k] = f32_[base + k];
  }
}

Descriptor DescriptorBank::row(std::size_t row) const {
  Descriptor out(dim_);
  read_row(row, out);
  return out;
}

void DescriptorBank::set_keypoints(std::vector<Eigen::Vector2f> keypoints) {
  if (!keypoints.empty() && keypoints.size() != rows_) {
    throw Error(ErrorCode::DimensionMismatch,
                "keypoint count " + std::to_string(keypoints.size()) +
                    " does not match row count " + std::to_string(rows_));
  }
  keypoints_ = std::move(keypoints);
}

bool operator==(const DescriptorBank& a, const DescriptorBank& b) {
  if (a.dim_ != b.dim_ || a.rows_ != b.rows_ || a.dtype_ != b.dtype_ ||
      a.kind_ != b.kind_ || a.f16_ != b.f16_ ||
      a.keypoints_.size() != b.keypoints_.size()) {
    return false;
  }
  // Compare float payloads by bit pattern.
  for (std::size_t i = 0; i < a.f32_.size(); ++i) {
    if (std::bit_cast<std::uint32_t>(a.f32_[i]) !=
        std::bit_cast<std::uint32_t>(b.f32_[i])) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.keypoints_.size(); ++i) {
    for (int c = 0; c < 2; ++c) {
      if (std::bit_cast<std::uint32_t>(a.keypoints_[i][c]) !=
          std::bit_cast<std::uint32_t>(b.keypoints_[i][c])) {
        return false;
      }
    }
  }
  return true;
}

void validate_bank(std::span<const Descriptor> rows, std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidDims, "descriptor dim must be >= 1");
  for (std::size_t i = 0; i < rows.size(); ++i) check_row(rows[i], dim, i);
}

void validate_bank(const DescriptorBank& bank) {
  const std::size_t d = bank.dim();
  if (bank.dtype() == Dtype::f16) {
    const auto bits = bank.f16_data();
    if (bits.size() != bank.rows() * d) {
      throw Error(ErrorCode::DimensionMismatch, "storage size does not match shape");
    }
    for (std::size_t i = 0; i < bits.size(); ++i) {
      const float v = half_to_float(bits[i]);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteValue,
                    "row " + std::to_string(i / d) + " contains a non-finite value",
                    i / d);
      }
      if (float_to_half(v) != bits[i]) {
        throw Error(ErrorCode::DtypeViolation,
                    "row " + std::to_string(i / d) + " does not round-trip",
                    i / d);
      }
    }
  } else {
    const auto values = bank.f32_data();
    if (values.size() != bank.rows() * d) {
      throw Error(ErrorCode::DimensionMismatch, "storage size does not match shape");
    }
    for (std::size_t r = 0; r < bank.rows(); ++r) {
      check_row(values.subspan(r * d, d), d, r);
    }
  }
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0 || !(cx >= 0.0) || !(cx < width) ||
      !(cy >= 0.0) || !(cy < height)) {
    throw Error(ErrorCode::InvalidArgument,
                "principal point must lie inside the image");
  }
}

Pose::Pose(const Eigen::Quaterniond& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  if (!(std::abs(rotation.norm() - 1.0) <= 1e-9)) {
    throw Error(ErrorCode::NotARotation, "quaternion is not unit length");
  }
  if (!translation.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue, "translation is not finite");
  }
  if (rotation_.w() < 0.0) rotation_.coeffs() = -rotation_.coeffs();
}

Pose Pose::normalized(const Eigen::Quaterniond& rotation,
                      const Eigen::Vector3d& translation) {
  return Pose(rotation.normalized(), translation);
}

Eigen::Vector3d Pose::center() const {
  return -(rotation_.conjugate() * translation_);
}

Eigen::Vector3d Pose::transform(const Eigen::Vector3d& world) const {
  return rotation_ * world + translation_;
}

Pose pose_from_matrix(const Eigen::Matrix3d& rotation,
                      const Eigen::Vector3d& translation) {
  const double orth =
      (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
          .cwiseAbs()
          .maxCoeff();
  if (!(orth <= 1e-6) || !(std::abs(rotation.determinant() - 1.0) <= 1e-6)) {
    throw Error(ErrorCode::NotARotation,
                "matrix is not orthonormal with determinant +1");
  }
  return Pose::normalized(Eigen::Quaterniond(rotation), translation);
}

}  // namespace locfuse
