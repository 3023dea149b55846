#include "locfuse/codebook.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <unordered_map>

#include "locfuse/io.hpp"
#include "locfuse/parallel.hpp"

namespace locfuse {

CodebookBuild build_codebook(const MapDatabase& db, const Reducer& reducer,
                             const FusionConfig& cfg, Dtype dtype) {
  cfg.validate();
  const std::size_t dim = reducer.out_dim();

  std::unordered_map<PointId, std::size_t> point_index;
  for (std::size_t i = 0; i < db.points.size(); ++i) {
    if (!db.points[i].coord.allFinite()) {
      throw Error(ErrorCode::NonFiniteValue,
                  "point " + std::to_string(db.points[i].id) + " has non-finite coords");
    }
    point_index.emplace(db.points[i].id, i);
  }
  std::unordered_map<ImageId, std::size_t> global_row;
  for (std::size_t r = 0; r < db.global_image_ids.size(); ++r) {
    global_row.emplace(db.global_image_ids[r], r);
  }

  std::vector<std::size_t> order(db.observations.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& oa = db.observations[a];
    const auto& ob = db.observations[b];
    return std::tie(oa.point_id, oa.image_id, oa.descriptor_row, a) <
           std::tie(ob.point_id, ob.image_id, ob.descriptor_row, b);
  });

  // Resolve references and reduce each image's global once.
  std::map<ImageId, Descriptor> reduced_globals;
  for (std::size_t n = 0; n < order.size(); ++n) {
    const auto& obs = db.observations[order[n]];
    const auto describe = [&] {
      return "observation (point " + std::to_string(obs.point_id) + ", image " +
             std::to_string(obs.image_id) + ", row " +
             std::to_string(obs.descriptor_row) + ")";
    };
    if (!point_index.contains(obs.point_id)) {
      throw Error(ErrorCode::DanglingReference, describe() + ": unknown point",
                  order[n]);
    }
    const auto bank = db.local_banks.find(obs.image_id);
    if (bank == db.local_banks.end()) {
      throw Error(ErrorCode::DanglingReference, describe() + ": unknown image",
                  order[n]);
    }
    if (obs.descriptor_row >= bank->second.rows()) {
      throw Error(ErrorCode::DanglingReference, describe() + ": row out of bounds",
                  order[n]);
    }
    if (bank->second.dim() != dim) {
      throw Error(ErrorCode::ReducerMismatch,
                  "local bank of image " + std::to_string(obs.image_id) +
                      " has dim " + std::to_string(bank->second.dim()) +
                      ", reducer outputs " + std::to_string(dim));
    }
    if (!reduced_globals.contains(obs.image_id)) {
      const auto g = global_row.find(obs.image_id);
      if (g == global_row.end() || g->second >= db.globals.rows()) {
        throw Error(ErrorCode::MissingGlobal,
                    "image " + std::to_string(obs.image_id) +
                        " has no global descriptor",
                    obs.image_id);
      }
      reduced_globals.emplace(obs.image_id, reducer.reduce(db.globals.row(g->second)));
    }
  }

  // Group boundaries in the sorted order.
  std::vector<std::size_t> group_start;
  for (std::size_t n = 0; n < order.size(); ++n) {
    if (n == 0 || db.observations[order[n]].point_id !=
                      db.observations[order[n - 1]].point_id) {
      group_start.push_back(n);
    }
  }
  const std::size_t groups = group_start.size();
  group_start.push_back(order.size());

  std::vector<float> means(groups * dim);
  parallel_for(groups, [&](std::size_t begin, std::size_t end) {
    std::vector<float> local(dim);
    for (std::size_t g = begin; g < end; ++g) {
      float* acc = means.data() + g * dim;
      for (std::size_t n = group_start[g]; n < group_start[g + 1]; ++n) {
        const auto& obs = db.observations[order[n]];
        db.local_banks.at(obs.image_id).read_row(obs.descriptor_row, local);
        const Descriptor fused = fuse(cfg, local, reduced_globals.at(obs.image_id));
        for (std::size_t k = 0; k < dim; ++k) acc[k] += fused[k];
      }
      const float count = static_cast<float>(group_start[g + 1] - group_start[g]);
      for (std::size_t k = 0; k < dim; ++k) acc[k] /= count;
    }
  });

  CodebookBuild out;
  Codebook& cb = out.codebook;
  cb.descriptors = DescriptorBank(dim, BankKind::local, dtype);
  cb.descriptors.reserve(groups);
  cb.fusion = cfg;
  cb.reducer = reducer.spec();
  for (std::size_t g = 0; g < groups; ++g) {
    const PointId id = db.observations[order[group_start[g]]].point_id;
    cb.point_ids.push_back(id);
    cb.coords.push_back(db.points[point_index.at(id)].coord.cast<float>());
    cb.descriptors.append(std::span<const float>(means.data() + g * dim, dim));
  }

  for (const auto& p : db.points) {
    if (!std::binary_search(cb.point_ids.begin(), cb.point_ids.end(), p.id)) {
      out.orphaned_points.push_back(p.id);
    }
  }
  std::sort(out.orphaned_points.begin(), out.orphaned_points.end());
  out.orphaned_points.erase(
      std::unique(out.orphaned_points.begin(), out.orphaned_points.end()),
      out.orphaned_points.end());
  return out;
}

MemoryReport codebook_memory_report(const Codebook& cb,
                                    const DescriptorBank* heavy_globals) {
  MemoryReport r;
  r.entries = cb.size();
  r.dim = cb.dim();
  r.dtype_size = dtype_size(cb.dtype());
  r.descriptor_bytes = r.entries * r.dim * r.dtype_size;
  r.coord_bytes = r.entries * 12;
  r.id_bytes = r.entries * 8;
  r.codebook_payload_bytes = r.descriptor_bytes + r.coord_bytes + r.id_bytes;
  r.header_bytes = kCodebookHeaderBytes;
  if (heavy_globals != nullptr) {
    r.heavy_global_bytes =
        static_cast<std::uint64_t>(heavy_globals->rows()) * heavy_globals->dim() * 4;
  }
  r.total_light_bytes = r.header_bytes + r.codebook_payload_bytes;
  r.total_heavy_bytes = r.total_light_bytes + r.heavy_global_bytes;
  return r;
}

}  // namespace locfuse
