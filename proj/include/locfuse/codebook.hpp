#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "locfuse/core.hpp"
#include "locfuse/fuse.hpp"
#include "locfuse/reduce.hpp"

namespace locfuse {

// The reconstructed map as seen by the codebook builder.
struct MapDatabase {
  std::vector<Point3D> points;
  std::vector<Observation> observations;
  std::map<ImageId, DescriptorBank> local_banks;
  DescriptorBank globals{1, BankKind::global};
  std::vector<ImageId> global_image_ids;  // image id of each globals row
};

// One fused mean descriptor per map point, sorted by point id.
struct Codebook {
  std::vector<PointId> point_ids;
  std::vector<Eigen::Vector3f> coords;
  DescriptorBank descriptors{1, BankKind::local};
  FusionConfig fusion;
  ReducerSpec reducer;

  std::size_t size() const noexcept { return point_ids.size(); }
  std::size_t dim() const noexcept { return descriptors.dim(); }
  Dtype dtype() const noexcept { return descriptors.dtype(); }
};

struct CodebookBuild {
  Codebook codebook;
  std::vector<PointId> orphaned_points;  // points without observations
};

// d_i = (1/N_i) sum_j fuse(cfg, local_ij, reduce(global_j)).
// Observations are visited in (point_id, image_id, descriptor_row) order and
// accumulated in float, so the result does not depend on input order or
// thread count. The cast to `dtype` happens once per finished mean.
CodebookBuild build_codebook(const MapDatabase& db, const Reducer& reducer,
                             const FusionConfig& cfg, Dtype dtype = Dtype::f16);

struct MemoryReport {
  std::uint64_t entries = 0;
  std::uint64_t dim = 0;
  std::uint64_t dtype_size = 0;
  std::uint64_t descriptor_bytes = 0;
  std::uint64_t coord_bytes = 0;
  std::uint64_t id_bytes = 0;
  std::uint64_t codebook_payload_bytes = 0;  // .lcb size minus header
  std::uint64_t header_bytes = 0;
  std::uint64_t heavy_global_bytes = 0;  // 0 for the light variant
  std::uint64_t total_light_bytes = 0;  // .lcb file size
  std::uint64_t total_heavy_bytes = 0;  // plus database globals
};

MemoryReport codebook_memory_report(const Codebook& cb,
                                    const DescriptorBank* heavy_globals = nullptr);

}  // namespace locfuse
