#include <vector>

#include "doctest.h"
#include "locfuse/io.hpp"
#include "locfuse/metrics.hpp"
#include "locfuse/pipeline.hpp"
#include "locfuse/synth.hpp"
#include "support/errors.hpp"

using namespace locfuse;

namespace {

SyntheticScene scene(std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  c.points_per_region = 60;
  c.n_db_images = 8;
  c.n_query_images = 4;
  return generate(c);
}

ExperimentConfig config(const SyntheticScene& s, double lambda) {
  ExperimentConfig e;
  e.fusion.lambda = lambda;
  e.reducer = {ReduceMethod::random0, static_cast<std::uint32_t>(s.config.global_dim),
               static_cast<std::uint32_t>(s.config.local_dim), 0, true};
  return e;
}

}  // namespace

TEST_CASE("fused localization recovers every synthetic query") {
  const SyntheticScene s = scene(1);
  const ExperimentResult r = run_experiment(s.db, s.queries, config(s, 0.5));
  const BenchmarkReport rep = evaluate_poses(r.poses, s.query_poses, ThresholdSpec{}.scaled(0.1));
  CHECK(rep.localized == s.queries.size());
  CHECK(rep.percent_within[0] == 100.0);
  CHECK(*rep.median_rotation_deg < 1.0);
}

TEST_CASE("experiments are deterministic across thread counts") {
  const SyntheticScene s = scene(2);
  const ExperimentResult a = run_experiment(s.db, s.queries, config(s, 0.5));
  setenv("LOCFUSE_THREADS", "1", 1);
  const ExperimentResult b = run_experiment(s.db, s.queries, config(s, 0.5));
  unsetenv("LOCFUSE_THREADS");
  CHECK(encode_codebook(a.codebook) == encode_codebook(b.codebook));
  REQUIRE(a.poses.size() == b.poses.size());
  for (std::size_t q = 0; q < a.poses.size(); ++q) {
    REQUIRE(a.poses[q].has_value() == b.poses[q].has_value());
    if (!a.poses[q]) continue;
    CHECK(a.poses[q]->rotation().coeffs() == b.poses[q]->rotation().coeffs());
    CHECK(a.poses[q]->translation() == b.poses[q]->translation());
  }
}

TEST_CASE("heavy variant reports the retrieved image and matches light on database globals") {
  SyntheticScene s = scene(3);
  const ExperimentConfig cfg = config(s, 0.5);
  const Codebook cb = build_codebook(s.db, Reducer(cfg.reducer), cfg.fusion).codebook;
  LocalizerConfig heavy;
  heavy.variant = QueryVariant::heavy;
  const Localizer lh(cb, heavy, &s.db.globals, s.db.global_image_ids);
  const Localizer ll(cb, {});
  for (std::size_t j = 0; j < s.db.globals.rows(); ++j) {
    const Descriptor g = s.db.globals.row(j);
    std::optional<ImageId> matched;
    const DescriptorBank h = lh.fuse_query(s.queries.locals[0], g, &matched);
    CHECK(matched == s.db.global_image_ids[j]);
    CHECK(h == ll.fuse_query(s.queries.locals[0], g));
  }
  // Retrieval picks an image of the query's own region.
  const QueryOutcome o = lh.localize(s.queries.locals[1], s.queries.globals.row(1),
                                     s.queries.intrinsics[1]);
  REQUIRE(o.matched_image);
  std::size_t row = 0;
  while (s.db.global_image_ids[row] != *o.matched_image) ++row;
  CHECK(s.db_regions[row] == s.query_regions[1]);
}

TEST_CASE("localizer input checks") {
  const SyntheticScene s = scene(4);
  const ExperimentConfig cfg = config(s, 0.5);
  const Codebook cb = build_codebook(s.db, Reducer(cfg.reducer), cfg.fusion).codebook;
  LocalizerConfig heavy;
  heavy.variant = QueryVariant::heavy;
  CHECK_ERROR(EmptyDatabase, Localizer(cb, heavy));
  const DescriptorBank wrong(s.config.global_dim + 1, BankKind::global);
  DescriptorBank wrong_rows = wrong;
  wrong_rows.append(std::vector<float>(s.config.global_dim + 1, 1.0f));
  CHECK_ERROR(ReducerMismatch, Localizer(cb, heavy, &wrong_rows));
  const Localizer ll(cb, {});
  const std::vector<float> short_global(s.config.global_dim - 1, 1.0f);
  CHECK_ERROR(ReducerMismatch, ll.fuse_query(s.queries.locals[0], short_global));
  // Fewer than three matches: no pose attempt.
  DescriptorBank two(s.config.local_dim, BankKind::local);
  two.append(s.queries.locals[0].row(0));
  two.append(s.queries.locals[0].row(1));
  two.set_keypoints({s.queries.locals[0].keypoints()[0], s.queries.locals[0].keypoints()[1]});
  const QueryOutcome o = ll.localize(two, s.queries.globals.row(0), s.queries.intrinsics[0]);
  CHECK(o.matches.size() == 2);
  CHECK_FALSE(o.pose);
  CHECK_FALSE(o.success());
}

TEST_CASE("evaluate poses counts missing estimates as failures") {
  const std::vector<Pose> gt = {Pose(), Pose()};
  const std::vector<std::optional<Pose>> est = {Pose(), std::nullopt};
  const BenchmarkReport r = evaluate_poses(est, gt, {});
  CHECK(r.total == 2);
  CHECK(r.localized == 1);
  CHECK(r.percent_within[0] == 50.0);
  const std::vector<std::optional<Pose>> short_est = {Pose()};
  CHECK_ERROR(DimensionMismatch, evaluate_poses(short_est, gt, {}));
}
