#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locfuse/codebook.hpp"
#include "locfuse/metrics.hpp"
#include "locfuse/pose.hpp"
#include "locfuse/search.hpp"

namespace locfuse {

enum class QueryVariant : std::uint8_t { light, heavy };

struct LocalizerConfig {
  QueryVariant variant = QueryVariant::light;
  SearchParams search;
  RansacConfig ransac;
};

struct QueryOutcome {
  MatchSet matches;
  std::optional<PoseResult> pose;  // nullopt when fewer than 3 matches
  std::optional<ImageId> matched_image;  // heavy variant only
  bool success() const { return pose && pose->success; }
};

// Query-side half of the system: fuses query descriptors the same way the
// codebook was built, matches them and estimates a pose.
class Localizer {
 public:
  // `db_globals` (full dimension) is required for the heavy variant.
  Localizer(const Codebook& codebook, const LocalizerConfig& cfg,
            const DescriptorBank* db_globals = nullptr,
            std::vector<ImageId> db_image_ids = {});

  const Reducer& reducer() const noexcept { return reducer_; }
  const SearchIndex& index() const noexcept { return index_; }

  // Fused query descriptors (f32), one row per local row.
  DescriptorBank fuse_query(const DescriptorBank& local,
                            std::span<const float> global,
                            std::optional<ImageId>* matched_image = nullptr) const;

  // `ransac_seed_offset` is added to the configured RANSAC seed.
  QueryOutcome localize(const DescriptorBank& local, std::span<const float> global,
                        const CameraIntrinsics& intrinsics,
                        std::uint64_t ransac_seed_offset = 0) const;

 private:
  const Codebook* codebook_;
  LocalizerConfig cfg_;
  Reducer reducer_;
  SearchIndex index_;
  const DescriptorBank* db_globals_;
  std::vector<ImageId> db_image_ids_;
};

struct QuerySet {
  std::vector<std::string> names;
  std::vector<DescriptorBank> locals;  // with keypoints
  DescriptorBank globals{1, BankKind::global};
  std::vector<CameraIntrinsics> intrinsics;

  std::size_t size() const noexcept { return names.size(); }
};

struct ExperimentConfig {
  FusionConfig fusion;
  ReducerSpec reducer;
  Dtype dtype = Dtype::f16;
  LocalizerConfig localizer;
};

struct ExperimentResult {
  Codebook codebook;
  std::vector<QueryOutcome> outcomes;
  std::vector<std::optional<Pose>> poses;  // successful estimates only
};

// Builds the codebook and localizes every query. Query i uses RANSAC seed
// cfg.localizer.ransac.seed + i. Queries run in parallel; the output does
// not depend on the thread count.
ExperimentResult run_experiment(const MapDatabase& db, const QuerySet& queries,
                                const ExperimentConfig& cfg);

std::vector<QueryOutcome> localize_all(const Localizer& localizer,
                                       const QuerySet& queries,
                                       std::uint64_t seed_base = 0);

BenchmarkReport evaluate_poses(std::span<const std::optional<Pose>> estimates,
                               std::span<const Pose> ground_truth,
                               const ThresholdSpec& thresholds);

}  // namespace locfuse
