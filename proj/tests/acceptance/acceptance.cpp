// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <unistd.h>

#include "locfuse/analyze.hpp"
#include "locfuse/codebook.hpp"
#include "locfuse/error.hpp"
#include "locfuse/io.hpp"
#include "locfuse/metrics.hpp"
#include "locfuse/pipeline.hpp"
#include "locfuse/search.hpp"
#include "locfuse/synth.hpp"
#include "support/fixtures.hpp"

using namespace locfuse;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeeds[] = {0, 1, 2, 3, 4};

// Synthetic translation units: a region is a unit box, so one scene unit
// stands for about ten metres of a real map.
constexpr double kSceneScale = 0.1;

struct Outcome {
  bool pass;
  std::string detail;
};

SynthConfig aliased_scene(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n_regions = 4;
  cfg.aliasing = 0.8;
  cfg.local_noise_sigma = 0.05;
  cfg.seed = seed;
  return cfg;
}

ExperimentConfig experiment(const SyntheticScene& s, double lambda) {
  ExperimentConfig cfg;
  cfg.fusion.lambda = lambda;
  cfg.reducer = {ReduceMethod::random0, static_cast<std::uint32_t>(s.config.global_dim),
                 static_cast<std::uint32_t>(s.config.local_dim), 0, true};
  cfg.dtype = Dtype::f16;
  return cfg;
}

struct SceneRun {
  std::size_t wrong_region = 0;
  std::size_t matched = 0;
  std::vector<std::optional<PoseError>> errors;
};

SceneRun run_scene(const SyntheticScene& s, double lambda) {
  const ExperimentResult r = run_experiment(s.db, s.queries, experiment(s, lambda));
  SceneRun out;
  for (std::size_t q = 0; q < s.queries.size(); ++q) {
    const auto& m = r.outcomes[q].matches;
    const double rate = false_match_rate(s, q, m);
    out.wrong_region += static_cast<std::size_t>(std::llround(rate * m.size()));
    out.matched += m.size();
    if (r.poses[q]) {
      out.errors.push_back(pose_error(*r.poses[q], s.query_poses[q]));
    } else {
      out.errors.push_back(std::nullopt);
    }
  }
  return out;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<SyntheticScene>& scenes() {
  static std::vector<SyntheticScene> all = [] {
    std::vector<SyntheticScene> v;
    for (auto seed : kSeeds) v.push_back(generate(aliased_scene(seed)));
    return v;
  }();
  return all;
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t wrong_local = 0, wrong_fused = 0, matched_local = 0, matched_fused = 0;
  std::vector<std::optional<PoseError>> err_local, err_fused;
  for (const auto& s : scenes()) {
    const SceneRun l = run_scene(s, 1.0);
    const SceneRun f = run_scene(s, 0.5);
    wrong_local += l.wrong_region;
    matched_local += l.matched;
    wrong_fused += f.wrong_region;
    matched_fused += f.matched;
    err_local.insert(err_local.end(), l.errors.begin(), l.errors.end());
    err_fused.insert(err_fused.end(), f.errors.begin(), f.errors.end());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double fmr_local = double(wrong_local) / double(matched_local);
  const double fmr_fused = double(wrong_fused) / double(matched_fused);
  const BenchmarkReport rl = aggregate(err_local);
  const BenchmarkReport rf = aggregate(err_fused);
  const double med_l = rl.median_translation.value_or(INFINITY);
  const double med_f = rf.median_translation.value_or(INFINITY);
  const bool a = fmr_fused <= 0.5 * fmr_local;
  const bool b = med_f * 2.0 <= med_l;
  const bool c = seconds < 60.0;
  return {a && b && c,
          fmt("false-match local %.4f fused %.4f (%s); median translation local %.5g "
              "(%zu/%zu localized) fused %.5g (%zu/%zu) ratio %.3g (%s); %.1f s (%s)",
              fmr_local, fmr_fused, a ? "ok" : "no", med_l, rl.localized, rl.total, med_f,
              rf.localized, rf.total, med_l / med_f, b ? "ok" : "no", seconds,
              c ? "ok" : "no")};
}

Outcome criterion2() {
  const ThresholdSpec thr = ThresholdSpec{}.scaled(kSceneScale);
  auto success_at = [&](double lambda) {
    double sum = 0.0;
    for (const auto& s : scenes()) {
      const SceneRun r = run_scene(s, lambda);
      sum += aggregate(r.errors, thr).percent_within[0];
    }
    return sum / static_cast<double>(scenes().size());
  };
  const double base = success_at(1.0);
  std::string detail = fmt("lambda=1.0: %.2f%%;", base);
  bool ok = true;
  for (int i = 2; i <= 7; ++i) {
    const double v = success_at(i / 10.0);
    ok = ok && v >= base;
    detail += fmt(" %.1f: %.2f%%", i / 10.0, v);
  }
  return {ok, detail};
}

Outcome criterion3() {
  double worst32 = 0.0;
  double worst16_ulps = 0.0;
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MapDatabase db = fixtures::random_database(seed, 50, 12, 16, 40);
    const Reducer reducer = build_reducer(ReduceMethod::random0, 40, 16, seed);
    FusionConfig fc;
    fc.lambda = 0.5;
    std::vector<PointId> ids;
    const auto oracle = fixtures::naive_codebook(db, reducer, fc.lambda, ids);
    for (Dtype dt : {Dtype::f32, Dtype::f16}) {
      const Codebook cb = build_codebook(db, reducer, fc, dt).codebook;
      if (cb.point_ids != ids) {
        ok = false;
        continue;
      }
      for (std::size_t i = 0; i < cb.size(); ++i) {
        for (std::size_t k = 0; k < cb.dim(); ++k) {
          const double got = cb.descriptors.value(i, k);
          const double err = std::abs(got - oracle[i][k]);
          if (dt == Dtype::f32) {
            worst32 = std::max(worst32, err);
            ok = ok && err <= 1e-6;
          } else {
            const double ulp = half_ulp(static_cast<float>(oracle[i][k]));
            worst16_ulps = std::max(worst16_ulps, err / ulp);
            ok = ok && err <= ulp;
          }
        }
      }
    }
  }
  return {ok, fmt("max f32 error %.3g; max f16 error %.3g ulp", worst32, worst16_ulps)};
}

Outcome criterion4() {
  bool ok = true;
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SplitMix64 rng(seed + 100);
    const std::size_t D = 32;
    Codebook cb;
    std::vector<Descriptor> rows;
    for (std::size_t i = 0; i < 1000; ++i) {
      cb.point_ids.push_back(5 + 3 * i);
      cb.coords.push_back(Eigen::Vector3f::Zero());
      rows.push_back(fixtures::random_unit(rng, D));
    }
    cb.descriptors = DescriptorBank::from_rows(rows, D, BankKind::local,
                                               seed % 2 ? Dtype::f16 : Dtype::f32);
    cb.reducer = {ReduceMethod::first, static_cast<std::uint32_t>(D),
                  static_cast<std::uint32_t>(D), 0, true};
    std::vector<Descriptor> q;
    std::vector<Eigen::Vector2d> kps;
    for (std::size_t i = 0; i < 100; ++i) {
      q.push_back(fixtures::random_unit(rng, D));
      kps.emplace_back(i, i);
    }
    const DescriptorBank qb = DescriptorBank::from_rows(q, D, BankKind::local);

    SearchParams exact_p;
    const SearchIndex exact = SearchIndex::build(cb, exact_p);
    SearchParams ivf_p;
    ivf_p.mode = IndexMode::ivf;
    ivf_p.n_cells = 16;
    ivf_p.n_probe = 16;
    ivf_p.seed = seed;
    const SearchIndex ivf = SearchIndex::build(cb, ivf_p);
    const MatchSet me = exact.match(qb, kps);
    const MatchSet mi = ivf.match(qb, kps);
    if (me.size() != 100 || mi.size() != 100) {
      ok = false;
      continue;
    }
    for (std::size_t i = 0; i < 100; ++i) {
      // Naive scan: widen, accumulate squared differences in float.
      float best = INFINITY;
      std::size_t best_row = 0;
      for (std::size_t r = 0; r < 1000; ++r) {
        float d = 0.0f;
        for (std::size_t k = 0; k < D; ++k) {
          const float diff = cb.descriptors.value(r, k) - q[i][k];
          d += diff * diff;
        }
        if (d < best) {
          best = d;
          best_row = r;
        }
      }
      const bool same = me[i].point_id == cb.point_ids[best_row] && me[i].distance == best;
      const bool same_ivf =
          mi[i].point_id == me[i].point_id &&
          std::bit_cast<std::uint32_t>(mi[i].distance) == std::bit_cast<std::uint32_t>(me[i].distance);
      if (!same || !same_ivf) ++mismatches;
    }
  }
  ok = ok && mismatches == 0;
  return {ok, fmt("%zu mismatches over 1000 queries (exact vs naive, ivf full-probe vs exact)",
                  mismatches)};
}

Outcome criterion5() {
  const CameraIntrinsics K = fixtures::test_camera();
  std::size_t good = 0;
  double worst_rot = 0.0, worst_rel = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto p = fixtures::make_pnp_problem(seed, 100, 0.6, 1.0);
    RansacConfig cfg;
    cfg.seed = seed;
    const PoseResult r = ransac_pnp(p.matches, K, cfg);
    if (!r.success) continue;
    const PoseError e = pose_error(r.pose, p.truth);
    worst_rot = std::max(worst_rot, e.rotation_deg);
    worst_rel = std::max(worst_rel, e.translation / p.diameter);
    if (e.rotation_deg < 0.5 && e.translation < 0.01 * p.diameter) ++good;
  }
  double clean_err = 0.0;
  bool clean_ok = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = fixtures::make_pnp_problem(1000 + seed, 100, 0.0, 0.0);
    RansacConfig cfg;
    cfg.seed = seed;
    const PoseResult r = ransac_pnp(p.matches, K, cfg);
    const Eigen::Matrix3d dR = r.pose.rotation_matrix() - p.truth.rotation_matrix();
    const double err = std::max(dR.cwiseAbs().maxCoeff(),
                                (r.pose.translation() - p.truth.translation()).cwiseAbs().maxCoeff());
    clean_err = std::max(clean_err, err);
    clean_ok = clean_ok && r.success && r.num_inliers == 100 && err <= 1e-6;
  }
  return {good >= 99 && clean_ok,
          fmt("%zu/100 within 0.5 deg and 1%% diameter (worst %.3g deg, %.3g of diameter); "
              "noise-free max error %.3g",
              good, worst_rot, worst_rel, clean_err)};
}

Outcome criterion6() {
  bool ok = true;
  std::size_t checked = 0;
  for (auto seed : {0ull, 1ull}) {
    SyntheticScene s = generate(aliased_scene(seed));
    // Give every query the global of a database image from its own region.
    DescriptorBank qg(s.config.global_dim, BankKind::global);
    for (std::size_t q = 0; q < s.queries.size(); ++q) {
      std::size_t j = 0;
      while (s.db_regions[j] != s.query_regions[q]) ++j;
      qg.append(s.db.globals.row(j));
    }
    s.queries.globals = qg;
    const ExperimentConfig cfg = experiment(s, 0.5);
    const Codebook cb = build_codebook(s.db, Reducer(cfg.reducer), cfg.fusion).codebook;
    LocalizerConfig light = cfg.localizer;
    LocalizerConfig heavy = cfg.localizer;
    heavy.variant = QueryVariant::heavy;
    const Localizer ll(cb, light);
    const Localizer lh(cb, heavy, &s.db.globals, s.db.global_image_ids);
    for (std::size_t q = 0; q < s.queries.size(); ++q) {
      const Descriptor g = s.queries.globals.row(q);
      ok = ok && ll.fuse_query(s.queries.locals[q], g) == lh.fuse_query(s.queries.locals[q], g);
      const auto a = ll.localize(s.queries.locals[q], g, s.queries.intrinsics[q], q);
      const auto b = lh.localize(s.queries.locals[q], g, s.queries.intrinsics[q], q);
      ok = ok && a.success() == b.success();
      if (a.pose && b.pose) {
        ok = ok && a.pose->pose.rotation().coeffs() == b.pose->pose.rotation().coeffs() &&
             a.pose->pose.translation() == b.pose->pose.translation() &&
             a.pose->inlier_mask == b.pose->inlier_mask;
      }
      ++checked;
    }
  }
  return {ok, fmt("%zu queries compared", checked)};
}

Outcome criterion7(const fs::path& tmp) {
  const SyntheticScene& s = scenes()[0];
  const ExperimentConfig cfg = experiment(s, 0.5);
  const Reducer reducer(cfg.reducer);
  bool ok = true;
  std::string detail;
  MemoryReport r16, r32;
  for (Dtype dt : {Dtype::f16, Dtype::f32}) {
    const Codebook cb = build_codebook(s.db, reducer, cfg.fusion, dt).codebook;
    const fs::path path = tmp / (dt == Dtype::f16 ? "c16.lcb" : "c32.lcb");
    write_codebook(path, cb);
    const auto size = fs::file_size(path);
    const std::uint64_t entry = 8 + 12 + cb.dim() * dtype_size(dt);
    const MemoryReport light = codebook_memory_report(cb);
    const MemoryReport heavy = codebook_memory_report(cb, &s.db.globals);
    ok = ok && size == kCodebookHeaderBytes + cb.size() * entry;
    ok = ok && size == light.header_bytes + light.codebook_payload_bytes;
    ok = ok && light.heavy_global_bytes == 0 && light.total_light_bytes == size;
    ok = ok && heavy.heavy_global_bytes == s.db.globals.rows() * s.config.global_dim * 4;
    ok = ok && heavy.total_heavy_bytes == size + heavy.heavy_global_bytes;
    detail += fmt("%s file %llu bytes; ", dt == Dtype::f16 ? "f16" : "f32",
                  static_cast<unsigned long long>(size));
    (dt == Dtype::f16 ? r16 : r32) = heavy;
  }
  ok = ok && r32.descriptor_bytes == 2 * r16.descriptor_bytes;
  // The worked example from the format description.
  Codebook big;
  big.descriptors = DescriptorBank(512, BankKind::local, Dtype::f16);
  std::vector<float> zero(512, 0.0f);
  for (std::size_t i = 0; i < 1000; ++i) {
    big.point_ids.push_back(i);
    big.coords.push_back(Eigen::Vector3f::Zero());
    big.descriptors.append(zero);
  }
  big.reducer = {ReduceMethod::first, 512, 512, 0, true};
  const MemoryReport br = codebook_memory_report(big);
  ok = ok && br.descriptor_bytes == 1'024'000 &&
       encode_codebook(big).size() == kCodebookHeaderBytes + 1000 * (8 + 12 + 1024);
  detail += fmt("heavy extra %llu bytes; f32/f16 descriptor payload %llu/%llu",
                static_cast<unsigned long long>(r16.heavy_global_bytes),
                static_cast<unsigned long long>(r32.descriptor_bytes),
                static_cast<unsigned long long>(r16.descriptor_bytes));
  return {ok, detail};
}

template <typename Fn>
bool throws_code(ErrorCode code, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  } catch (...) {
    return false;
  }
  return false;
}

Outcome criterion9(const fs::path& tmp) {
  bool ok = true;
  std::vector<std::string> failed;
  auto check = [&](bool cond, const char* what) {
    if (!cond) failed.push_back(what);
    ok = ok && cond;
  };
  const SyntheticScene& s = scenes()[0];

  for (const auto& [id, bank] : s.db.local_banks) {
    check(decode_descriptor_bank(encode_descriptor_bank(bank)) == bank, "dsb local");
    break;
  }
  check(decode_descriptor_bank(encode_descriptor_bank(s.queries.locals[0])) ==
            s.queries.locals[0],
        "dsb keypoints");
  check(decode_descriptor_bank(encode_descriptor_bank(s.db.globals)) == s.db.globals,
        "dsb global");
  {
    SplitMix64 rng(9);
    std::vector<Descriptor> rows;
    for (int i = 0; i < 20; ++i) rows.push_back(fixtures::random_unit(rng, 24));
    const auto b16 = DescriptorBank::from_rows(rows, 24, BankKind::local, Dtype::f16);
    check(decode_descriptor_bank(encode_descriptor_bank(b16)) == b16, "dsb f16");
    write_descriptor_bank(tmp / "b.dsb", b16);
    check(read_descriptor_bank(tmp / "b.dsb") == b16, "dsb file");
  }
  const ExperimentConfig cfg = experiment(s, 0.5);
  for (Dtype dt : {Dtype::f16, Dtype::f32}) {
    const Codebook cb = build_codebook(s.db, Reducer(cfg.reducer), cfg.fusion, dt).codebook;
    write_codebook(tmp / "rt.lcb", cb);
    const Codebook back = read_codebook(tmp / "rt.lcb");
    check(codebooks_identical(cb, back) && back.descriptors == cb.descriptors &&
              back.reducer == cb.reducer,
          "lcb");
  }

  {
    SplitMix64 rng(17);
    std::vector<NamedPose> poses;
    for (int i = 0; i < 100; ++i) {
      poses.push_back({"img" + std::to_string(i),
                       Pose(fixtures::random_rotation(rng),
                            Eigen::Vector3d(rng.uniform(-20, 20), rng.uniform(-20, 20),
                                            rng.uniform(-20, 20)))});
    }
    write_poses(tmp / "poses.txt", poses);
    const auto back = read_poses(tmp / "poses.txt");
    bool same = back.size() == poses.size();
    for (std::size_t i = 0; same && i < poses.size(); ++i) {
      same = back[i].name == poses[i].name;
      const auto& a = poses[i].pose;
      const auto& b = back[i].pose;
      for (int k = 0; k < 4; ++k) {
        same = same && std::abs(a.rotation().coeffs()[k] - b.rotation().coeffs()[k]) <= 1e-8;
      }
      for (int k = 0; k < 3; ++k) {
        const double v = a.translation()[k];
        same = same && std::abs(v - b.translation()[k]) <= 1e-8 * std::max(1.0, std::abs(v));
      }
    }
    check(same, "pose text");
  }
  check(parse_points(format_points(s.db.points)).size() == s.db.points.size(), "points count");
  {
    const auto back = parse_points(format_points(s.db.points));
    bool same = true;
    for (std::size_t i = 0; i < back.size(); ++i) {
      same = same && back[i].id == s.db.points[i].id && back[i].coord == s.db.points[i].coord;
    }
    check(same, "points text");
    const auto obs = parse_observations(format_observations(s.db.observations));
    same = obs.size() == s.db.observations.size();
    for (std::size_t i = 0; same && i < obs.size(); ++i) {
      const auto& a = obs[i];
      const auto& b = s.db.observations[i];
      same = a.point_id == b.point_id && a.image_id == b.image_id &&
             a.keypoint == b.keypoint && a.descriptor_row == b.descriptor_row;
    }
    check(same, "observations text");
  }
  {
    std::map<std::string, CameraIntrinsics> k{{"a", fixtures::test_camera()}};
    write_intrinsics(tmp / "k.json", k);
    const auto back = read_intrinsics(tmp / "k.json");
    const auto& b = back.at("a");
    const auto& a = k.at("a");
    check(a.fx == b.fx && a.fy == b.fy && a.cx == b.cx && a.cy == b.cy &&
              a.width == b.width && a.height == b.height,
          "intrinsics json");
    check(throws_code(ErrorCode::MissingIntrinsics, [&] { intrinsics_for(back, "b"); }),
          "missing intrinsics");
  }

  // Corrupted fixtures.
  const std::string dsb = encode_descriptor_bank(s.queries.locals[0]);
  check(throws_code(ErrorCode::TruncatedFile,
                    [&] { decode_descriptor_bank(std::string_view(dsb).substr(0, 40)); }),
        "dsb truncated mid-row");
  check(throws_code(ErrorCode::TruncatedFile,
                    [&] { decode_descriptor_bank(std::string_view(dsb).substr(0, 10)); }),
        "dsb truncated header");
  {
    std::string bad = dsb;
    bad[0] = 'X';
    check(throws_code(ErrorCode::BadMagic, [&] { decode_descriptor_bank(bad); }), "dsb magic");
    bad = dsb;
    bad[4] = 2;
    check(throws_code(ErrorCode::UnsupportedVersion, [&] { decode_descriptor_bank(bad); }),
          "dsb version");
  }
  const Codebook cb = build_codebook(s.db, Reducer(cfg.reducer), cfg.fusion).codebook;
  const std::string lcb = encode_codebook(cb);
  check(throws_code(ErrorCode::TruncatedFile,
                    [&] { decode_codebook(std::string_view(lcb).substr(0, lcb.size() - 3)); }),
        "lcb truncated");
  {
    std::string bad = lcb;
    bad[3] = '2';
    check(throws_code(ErrorCode::BadMagic, [&] { decode_codebook(bad); }), "lcb magic");
    bad = lcb;
    bad[5] = 1;
    check(throws_code(ErrorCode::UnsupportedVersion, [&] { decode_codebook(bad); }),
          "lcb version");
  }
  {
    // A query bank whose dim disagrees with the codebook reducer.
    const Localizer loc(cb, LocalizerConfig{});
    DescriptorBank wrong(cb.dim() + 1, BankKind::local);
    check(throws_code(ErrorCode::ReducerMismatch,
                      [&] { loc.fuse_query(wrong, s.queries.globals.row(0)); }),
          "reducer mismatch");
  }
  check(throws_code(ErrorCode::ParseError, [] { parse_poses("q 1 0 0 0 0 0\n"); }),
        "pose field count");
  check(throws_code(ErrorCode::ParseError, [] { parse_poses("q 1.01 0 0 0 0 0 0\n"); }),
        "non-unit quaternion");
  {
    bool line_ok = false;
    try {
      parse_points("# header\n1 0 0 0\n2 0 x 0\n");
    } catch (const Error& e) {
      line_ok = e.code() == ErrorCode::ParseError && e.index() == 3;
    }
    check(line_ok, "parse error line number");
  }
  check(throws_code(ErrorCode::ParseError, [] { parse_observations("1 2 3.0 4.0\n"); }),
        "observation field count");
  std::string detail = ok ? "all round-trips and corruption checks hold" : "failed:";
  for (const auto& f : failed) detail += " [" + f + "]";
  return {ok, detail};
}

Outcome criterion8() {
  bool entropy_ok = true;
  bool inertia_ok = true;
  std::string detail;
  double sum_l = 0.0, sum_f = 0.0;
  for (const auto& s : scenes()) {
    double e[2];
    int idx = 0;
    for (double lambda : {1.0, 0.5}) {
      const ExperimentConfig cfg = experiment(s, lambda);
      const Codebook cb = build_codebook(s.db, Reducer(cfg.reducer), cfg.fusion).codebook;
      const KMeansResult km = kmeans(cb.descriptors, 5, s.config.seed);
      for (std::size_t i = 1; i < km.inertia_history.size(); ++i) {
        inertia_ok = inertia_ok && km.inertia_history[i] <= km.inertia_history[i - 1];
      }
      e[idx++] = cluster_spread(km, cb.point_ids, s.region_of).mean_entropy_bits;
    }
    entropy_ok = entropy_ok && e[1] < e[0];
    sum_l += e[0];
    sum_f += e[1];
    detail += fmt("seed %llu: %.3f -> %.3f; ", static_cast<unsigned long long>(s.config.seed),
                  e[0], e[1]);
  }
  detail += fmt("mean %.3f -> %.3f bits; inertia monotone: %s", sum_l / 5, sum_f / 5,
                inertia_ok ? "yes" : "no");
  return {entropy_ok && inertia_ok, detail};
}

std::string pipeline_report(const fs::path& dir) {
  fs::remove_all(dir);
  SynthConfig sc = aliased_scene(7);
  sc.points_per_region = 80;
  write_scene(dir, generate(sc));
  const ScenePaths p = ScenePaths::in(dir);
  const MapDatabase db = load_map_database(p.points, p.observations, p.db_images, p.db_globals);
  ReducerSpec spec{ReduceMethod::random0, static_cast<std::uint32_t>(db.globals.dim()),
                   static_cast<std::uint32_t>(db.local_banks.begin()->second.dim()), 0, true};
  FusionConfig fc;
  write_codebook(dir / "map.lcb", build_codebook(db, Reducer(spec), fc).codebook);
  const Codebook cb = read_codebook(dir / "map.lcb");
  const QuerySet qs = load_query_set(p.queries, p.query_globals, p.query_intrinsics);
  const Localizer loc(cb, LocalizerConfig{});
  const auto outcomes = localize_all(loc, qs, 0);
  std::vector<NamedPose> est;
  for (std::size_t q = 0; q < qs.size(); ++q) {
    if (outcomes[q].success()) est.push_back({qs.names[q], outcomes[q].pose->pose});
  }
  write_poses(dir / "est.txt", est);
  const auto pred = read_poses(dir / "est.txt");
  const auto gt = read_poses(p.query_poses);
  std::vector<std::optional<PoseError>> errors;
  for (const auto& g : gt) {
    auto it = std::find_if(pred.begin(), pred.end(), [&](const NamedPose& n) { return n.name == g.name; });
    if (it == pred.end()) {
      errors.push_back(std::nullopt);
    } else {
      errors.push_back(pose_error(it->pose, g.pose));
    }
  }
  return read_text_file(dir / "map.lcb") + read_text_file(dir / "est.txt") +
         report_to_json(aggregate(errors));
}

Outcome criterion10(const fs::path& tmp) {
  setenv("LOCFUSE_THREADS", "1", 1);
  const std::string a = pipeline_report(tmp / "run_a");
  unsetenv("LOCFUSE_THREADS");
  const std::string b = pipeline_report(tmp / "run_b");
  const std::string c = pipeline_report(tmp / "run_c");
  return {a == b && b == c,
          fmt("three runs (1 thread, default threads x2) %s; %zu bytes of artifacts compared",
              a == b && b == c ? "identical" : "differ", a.size())};
}

}  // namespace

int main() {
  const fs::path tmp = fs::temp_directory_path() / ("locfuse_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "fusion reduces wrong-region matches and pose error", criterion1},
      {2, "lambda sweep 0.2..0.7 at least as good as local-only", criterion2},
      {3, "codebook equals naive per-point mean", criterion3},
      {4, "exact search equals naive scan; full-probe ivf equals exact", criterion4},
      {5, "ransac-pnp recovers pose under 60% outliers", criterion5},
      {6, "light and heavy variants agree when the global is in the database", criterion6},
      {7, "memory accounting matches on-disk sizes", [&] { return criterion7(tmp); }},
      {8, "fused codebook clusters are less region-ambiguous", criterion8},
      {9, "format round-trips and corruption errors", [&] { return criterion9(tmp); }},
      {10, "pipeline is deterministic", [&] { return criterion10(tmp); }},
  };
  int failures = 0;
  for (const auto& c : all) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(tmp);
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}
