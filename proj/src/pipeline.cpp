#include "locfuse/pipeline.hpp"

#include <string>

#include "locfuse/fuse.hpp"
#include "locfuse/parallel.hpp"

namespace locfuse {

Localizer::Localizer(const Codebook& codebook, const LocalizerConfig& cfg,
                     const DescriptorBank* db_globals,
                     std::vector<ImageId> db_image_ids)
    : codebook_(&codebook),
      cfg_(cfg),
      reducer_(codebook.reducer),
      index_(SearchIndex::build(codebook, cfg.search)),
      db_globals_(db_globals),
      db_image_ids_(std::move(db_image_ids)) {
  if (reducer_.out_dim() != codebook.dim()) {
    throw Error(ErrorCode::ReducerMismatch,
                "reducer output dim " + std::to_string(reducer_.out_dim()) +
                    " != codebook dim " + std::to_string(codebook.dim()));
  }
  if (cfg.variant == QueryVariant::heavy) {
    if (db_globals == nullptr || db_globals->empty()) {
      throw Error(ErrorCode::EmptyDatabase,
                  "heavy variant needs the database global descriptors");
    }
    if (db_globals->dim() != reducer_.in_dim()) {
      throw Error(ErrorCode::ReducerMismatch,
                  "database globals have dim " + std::to_string(db_globals->dim()) +
                      ", reducer expects " + std::to_string(reducer_.in_dim()));
    }
  }
}

DescriptorBank Localizer::fuse_query(const DescriptorBank& local,
                                     std::span<const float> global,
                                     std::optional<ImageId>* matched_image) const {
  if (local.dim() != codebook_->dim()) {
    throw Error(ErrorCode::ReducerMismatch,
                "query local dim " + std::to_string(local.dim()) +
                    " != codebook dim " + std::to_string(codebook_->dim()));
  }
  if (global.size() != reducer_.in_dim()) {
    throw Error(ErrorCode::ReducerMismatch,
                "query global dim " + std::to_string(global.size()) +
                    ", codebook reducer expects " + std::to_string(reducer_.in_dim()));
  }
  Descriptor reduced;
  if (cfg_.variant == QueryVariant::heavy) {
    const std::size_t k = nearest_global(global, *db_globals_, db_image_ids_);
    reduced = reducer_.reduce(db_globals_->row(k));
    if (matched_image != nullptr) {
      *matched_image = db_image_ids_.empty() ? static_cast<ImageId>(k) : db_image_ids_[k];
    }
  } else {
    reduced = reducer_.reduce(global);
  }
  DescriptorBank out(local.dim(), BankKind::local, Dtype::f32);
  out.reserve(local.rows());
  std::vector<float> row(local.dim());
  for (std::size_t i = 0; i < local.rows(); ++i) {
    local.read_row(i, row);
    out.append(fuse(codebook_->fusion, row, reduced));
  }
  return out;
}

QueryOutcome Localizer::localize(const DescriptorBank& local,
                                 std::span<const float> global,
                                 const CameraIntrinsics& intrinsics,
                                 std::uint64_t ransac_seed_offset) const {
  QueryOutcome out;
  const DescriptorBank fused = fuse_query(local, global, &out.matched_image);
  std::vector<Eigen::Vector2d> keypoints;
  keypoints.reserve(local.rows());
  for (const auto& kp : local.keypoints()) keypoints.push_back(kp.cast<double>());
  if (keypoints.size() != local.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "query bank carries no keypoints");
  }
  out.matches = index_.match(fused, keypoints);
  if (out.matches.size() >= 3) {
    RansacConfig rc = cfg_.ransac;
    rc.seed += ransac_seed_offset;
    out.pose = ransac_pnp(out.matches, intrinsics, rc);
  }
  return out;
}

std::vector<QueryOutcome> localize_all(const Localizer& localizer,
                                       const QuerySet& queries,
                                       std::uint64_t seed_base) {
  std::vector<QueryOutcome> outcomes(queries.size());
  parallel_for(queries.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      outcomes[q] = localizer.localize(queries.locals[q], queries.globals.row(q),
                                       queries.intrinsics[q], seed_base + q);
    }
  });
  return outcomes;
}

ExperimentResult run_experiment(const MapDatabase& db, const QuerySet& queries,
                                const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.codebook = build_codebook(db, Reducer(cfg.reducer), cfg.fusion, cfg.dtype).codebook;
  const Localizer localizer(res.codebook, cfg.localizer, &db.globals, db.global_image_ids);
  res.outcomes = localize_all(localizer, queries);
  res.poses.reserve(res.outcomes.size());
  for (const auto& o : res.outcomes) {
    res.poses.push_back(o.success() ? std::optional<Pose>(o.pose->pose) : std::nullopt);
  }
  return res;
}

BenchmarkReport evaluate_poses(std::span<const std::optional<Pose>> estimates,
                               std::span<const Pose> ground_truth,
                               const ThresholdSpec& thresholds) {
  if (estimates.size() != ground_truth.size()) {
    throw Error(ErrorCode::DimensionMismatch, "estimate and ground-truth counts differ");
  }
  std::vector<std::optional<PoseError>> errors;
  errors.reserve(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    errors.push_back(estimates[i] ? std::optional(pose_error(*estimates[i], ground_truth[i]))
                                  : std::nullopt);
  }
  return aggregate(errors, thresholds);
}

}  // namespace locfuse
