#include "locfuse/fuse.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace locfuse {

void FusionConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
}

Descriptor fuse(const FusionConfig& cfg, std::span<const float> local,
                std::span<const float> global_reduced) {
  cfg.validate();
  if (local.size() != global_reduced.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "local dim " + std::to_string(local.size()) +
                    " != reduced global dim " + std::to_string(global_reduced.size()));
  }
  double norm2 = 0.0;
  for (std::size_t k = 0; k < local.size(); ++k) {
    if (!std::isfinite(local[k]) || !std::isfinite(global_reduced[k])) {
      throw Error(ErrorCode::NonFiniteValue, "non-finite input to fusion", k);
    }
    norm2 += static_cast<double>(local[k]) * local[k];
  }
  const float lam = static_cast<float>(cfg.lambda);
  const float rest = 1.0f - lam;
  Descriptor out(local.size());
  if (cfg.renormalize_inputs) {
    if (!(norm2 > 0.0)) {
      throw Error(ErrorCode::ZeroVector, "local descriptor is zero");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t k = 0; k < local.size(); ++k) {
      const float l = static_cast<float>(local[k] * inv);
      out[k] = lam * l + rest * global_reduced[k];
    }
  } else {
    for (std::size_t k = 0; k < local.size(); ++k) {
      out[k] = lam * local[k] + rest * global_reduced[k];
    }
  }
  return out;
}

std::size_t nearest_global(std::span<const float> query_global,
                           const DescriptorBank& db_globals,
                           std::span<const ImageId> image_ids) {
  if (db_globals.empty()) {
    throw Error(ErrorCode::EmptyDatabase, "no database global descriptors");
  }
  if (query_global.size() != db_globals.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "query global dim " + std::to_string(query_global.size()) +
                    " != database dim " + std::to_string(db_globals.dim()));
  }
  if (!image_ids.empty() && image_ids.size() != db_globals.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "image id list does not match bank");
  }
  const auto id_of = [&](std::size_t r) {
    return image_ids.empty() ? static_cast<ImageId>(r) : image_ids[r];
  };
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  std::vector<float> row(db_globals.dim());
  for (std::size_t r = 0; r < db_globals.rows(); ++r) {
    db_globals.read_row(r, row);
    double dist = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double diff = static_cast<double>(row[k]) - query_global[k];
      dist += diff * diff;
    }
    if (dist < best_dist || (dist == best_dist && id_of(r) < id_of(best))) {
      best = r;
      best_dist = dist;
    }
  }
  return best;
}

HeavyFusion fuse_query_heavy(const FusionConfig& cfg, std::span<const float> local,
                             std::span<const float> query_global_full,
                             const DescriptorBank& db_globals,
                             const Reducer& reducer,
                             std::span<const ImageId> image_ids) {
  const std::size_t k = nearest_global(query_global_full, db_globals, image_ids);
  const Descriptor reduced = reducer.reduce(db_globals.row(k));
  HeavyFusion out;
  out.descriptor = fuse(cfg, local, reduced);
  out.matched_image = image_ids.empty() ? static_cast<ImageId>(k) : image_ids[k];
  return out;
}

}  // namespace locfuse
