#pragma once

#include <span>

#include "locfuse/core.hpp"
#include "locfuse/reduce.hpp"

namespace locfuse {

struct FusionConfig {
  double lambda = 0.5;
  // L2-normalize the local descriptor before mixing.
  bool renormalize_inputs = true;

  void validate() const;
};

// out = lambda * local + (1 - lambda) * global_reduced, computed in float.
// The output is not renormalized.
Descriptor fuse(const FusionConfig& cfg, std::span<const float> local,
                std::span<const float> global_reduced);

struct HeavyFusion {
  Descriptor descriptor;
  ImageId matched_image = 0;
};

// Index of the database global closest (Euclidean, full dimension) to the
// query global. Ties go to the lowest image id.
std::size_t nearest_global(std::span<const float> query_global,
                           const DescriptorBank& db_globals,
                           std::span<const ImageId> image_ids = {});

// Fuses with the reduced nearest database global instead of the query's own.
// `image_ids` maps bank rows to image ids (row index when empty).
HeavyFusion fuse_query_heavy(const FusionConfig& cfg, std::span<const float> local,
                             std::span<const float> query_global_full,
                             const DescriptorBank& db_globals,
                             const Reducer& reducer,
                             std::span<const ImageId> image_ids = {});

}  // namespace locfuse
