#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "locfuse/analyze.hpp"
#include "locfuse/codebook.hpp"
#include "locfuse/error.hpp"
#include "locfuse/io.hpp"
#include "locfuse/metrics.hpp"
#include "locfuse/pipeline.hpp"
#include "locfuse/synth.hpp"

using namespace locfuse;
namespace fs = std::filesystem;

namespace {

// Missing or contradictory flags detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string resolve(const std::string& given, const std::optional<fs::path>& scene_default,
                    const std::string& flag) {
  if (!given.empty()) return given;
  if (scene_default) return scene_default->string();
  throw UsageError(flag + " is required (or pass --scene)");
}

struct ScenePathOptions {
  std::string scene;
  std::string points, observations, db_images, db_globals;
  std::string queries, query_globals, intrinsics, gt;
  std::string regions;

  std::optional<fs::path> from_scene(fs::path ScenePaths::*field) const {
    if (scene.empty()) return std::nullopt;
    return ScenePaths::in(scene).*field;
  }
  void add_scene(CLI::App* app) {
    app->add_option("--scene", scene, "Scene directory supplying default input paths");
  }
  void add_db(CLI::App* app) {
    app->add_option("--points", points, "Points file (point_id x y z)");
    app->add_option("--observations", observations,
                    "Observations file (point_id image_id kp_x kp_y row)");
    app->add_option("--db-images", db_images, "Database image list (image_id path.dsb)");
    app->add_option("--db-globals", db_globals, "Database global descriptors (.dsb)");
  }
  void add_queries(CLI::App* app) {
    app->add_option("--queries", queries, "Query list (name path.dsb)");
    app->add_option("--query-globals", query_globals, "Query global descriptors (.dsb)");
    app->add_option("--intrinsics", intrinsics, "Query intrinsics JSON");
  }
  MapDatabase load_db() const {
    return load_map_database(
        resolve(points, from_scene(&ScenePaths::points), "--points"),
        resolve(observations, from_scene(&ScenePaths::observations), "--observations"),
        resolve(db_images, from_scene(&ScenePaths::db_images), "--db-images"),
        resolve(db_globals, from_scene(&ScenePaths::db_globals), "--db-globals"));
  }
  QuerySet load_queries() const {
    return load_query_set(
        resolve(queries, from_scene(&ScenePaths::queries), "--queries"),
        resolve(query_globals, from_scene(&ScenePaths::query_globals), "--query-globals"),
        resolve(intrinsics, from_scene(&ScenePaths::query_intrinsics), "--intrinsics"));
  }
  std::vector<NamedPose> load_gt() const {
    return read_poses(resolve(gt, from_scene(&ScenePaths::query_poses), "--gt"));
  }
};

struct BuildOptions {
  double lambda = 0.5;
  std::string reduce = "random0";
  std::uint64_t seed = 0;
  std::string dtype = "f16";
  bool no_renorm = false;

  void add(CLI::App* app, bool with_lambda = true, bool with_reduce = true) {
    if (with_lambda) {
      app->add_option("--lambda", lambda, "Fusion weight of the local descriptor")
          ->check(CLI::Range(0.0, 1.0));
    }
    if (with_reduce) {
      app->add_option("--reduce", reduce, "gaussian|random0|first|center|last");
    }
    app->add_option("--seed", seed, "Reducer seed");
    app->add_option("--dtype", dtype, "Codebook storage: f16|f32")
        ->check(CLI::IsMember({"f16", "f32"}));
    app->add_flag("--no-renorm", no_renorm,
                  "Do not L2-normalize reduced global descriptors");
  }
  Dtype storage() const { return dtype == "f32" ? Dtype::f32 : Dtype::f16; }
};

ReduceMethod method_or_throw(const std::string& name) {
  const auto m = parse_reduce_method(name);
  if (!m) throw UsageError("--reduce: unknown method '" + name + "'");
  return *m;
}

ReducerSpec reducer_spec(const MapDatabase& db, ReduceMethod method, std::uint64_t seed,
                         bool normalize) {
  if (db.local_banks.empty()) throw Error(ErrorCode::EmptyDatabase, "no database images");
  ReducerSpec spec;
  spec.method = method;
  spec.in_dim = static_cast<std::uint32_t>(db.globals.dim());
  spec.out_dim = static_cast<std::uint32_t>(db.local_banks.begin()->second.dim());
  spec.seed = seed;
  spec.normalize = normalize;
  return spec;
}

Codebook build_from(const MapDatabase& db, const ReducerSpec& spec, double lambda,
                    Dtype dtype) {
  FusionConfig fc;
  fc.lambda = lambda;
  CodebookBuild built = build_codebook(db, build_reducer(spec.method, spec.in_dim,
                                                          spec.out_dim, spec.seed,
                                                          spec.normalize),
                                       fc, dtype);
  if (!built.orphaned_points.empty()) {
    std::cerr << "warning: " << built.orphaned_points.size()
              << " points have no observations and were skipped\n";
  }
  return std::move(built.codebook);
}

struct LocalizeOptions {
  std::string variant = "light";
  std::string index = "exact";
  std::size_t cells = 16;
  std::size_t probe = 4;
  bool ratio_test = false;
  double ratio = 0.8;
  RansacConfig ransac;

  void add(CLI::App* app) {
    app->add_option("--variant", variant, "light|heavy")
        ->check(CLI::IsMember({"light", "heavy"}));
    app->add_option("--index", index, "exact|ivf")->check(CLI::IsMember({"exact", "ivf"}));
    app->add_option("--cells", cells, "IVF cell count")->check(CLI::PositiveNumber);
    app->add_option("--probe", probe, "IVF cells probed per query")->check(CLI::PositiveNumber);
    app->add_flag("--ratio-test", ratio_test, "Reject ambiguous nearest neighbours");
    app->add_option("--ratio", ratio, "Ratio-test threshold on distances")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--reproj-px", ransac.reproj_threshold_px, "Inlier threshold in pixels")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-iters", ransac.max_iterations, "RANSAC iteration cap")
        ->check(CLI::PositiveNumber);
    app->add_option("--confidence", ransac.confidence, "RANSAC stopping confidence")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--min-inliers", ransac.min_inliers, "Inliers required for success");
    app->add_option("--ransac-seed", ransac.seed, "RANSAC seed (query i uses seed + i)");
  }
  LocalizerConfig config() const {
    LocalizerConfig c;
    c.variant = variant == "heavy" ? QueryVariant::heavy : QueryVariant::light;
    c.search.mode = index == "ivf" ? IndexMode::ivf : IndexMode::exact;
    c.search.n_cells = cells;
    c.search.n_probe = probe;
    c.search.ratio_test = ratio_test;
    c.search.ratio = ratio;
    c.ransac = ransac;
    c.ransac.validate();
    return c;
  }
};

std::vector<std::optional<PoseError>> errors_by_name(const std::vector<NamedPose>& pred,
                                                     const std::vector<NamedPose>& gt) {
  std::map<std::string, Pose> by_name;
  for (const auto& p : pred) by_name[p.name] = p.pose;
  std::vector<std::optional<PoseError>> out;
  for (const auto& g : gt) {
    const auto it = by_name.find(g.name);
    if (it == by_name.end()) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(pose_error(it->second, g.pose));
    }
  }
  return out;
}

std::vector<NamedPose> estimated_poses(const QuerySet& qs,
                                       const std::vector<QueryOutcome>& outcomes) {
  std::vector<NamedPose> out;
  for (std::size_t q = 0; q < qs.size(); ++q) {
    if (outcomes[q].success()) out.push_back({qs.names[q], outcomes[q].pose->pose});
  }
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  double v[3];
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? text.find(':', start) : text.size();
    if (end == std::string::npos) throw UsageError("--grid: expected start:stop:step");
    try {
      std::size_t used = 0;
      const std::string part = text.substr(start, end - start);
      v[i] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("--grid: cannot parse '" + text + "'");
    }
    start = end + 1;
  }
  if (v[2] <= 0 || v[1] < v[0]) throw UsageError("--grid: need start <= stop and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((v[1] - v[0]) / v[2] + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    // Round to suppress accumulated binary noise in printed values.
    out.push_back(std::round((v[0] + i * v[2]) * 1e9) / 1e9);
  }
  for (double l : out) {
    if (l < 0.0 || l > 1.0) throw UsageError("--grid: lambda values must lie in [0, 1]");
  }
  return out;
}

std::string fmt_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Codebook localization with fused local and global descriptors"};
  app.require_subcommand(1);

  // build-codebook
  ScenePathOptions b_paths;
  BuildOptions b_opts;
  std::string b_out;
  auto* build = app.add_subcommand("build-codebook", "Build a fused codebook (.lcb)");
  b_paths.add_scene(build);
  b_paths.add_db(build);
  b_opts.add(build);
  build->add_option("--out", b_out, "Output codebook path")->required();

  // localize
  ScenePathOptions l_paths;
  LocalizeOptions l_opts;
  std::string l_codebook, l_out;
  auto* localize = app.add_subcommand("localize", "Estimate query poses");
  l_paths.add_scene(localize);
  l_paths.add_queries(localize);
  localize->add_option("--codebook", l_codebook, "Codebook (.lcb)")->required();
  localize->add_option("--db-globals", l_paths.db_globals,
                       "Database globals, required for --variant heavy");
  localize->add_option("--db-images", l_paths.db_images,
                       "Database image list giving the image id of each global row");
  l_opts.add(localize);
  localize->add_option("--out", l_out, "Output pose file")->required();

  // eval
  std::string e_pred, e_gt, e_thresholds, e_json;
  double e_scale = 1.0;
  auto* eval = app.add_subcommand("eval", "Compare estimated poses against ground truth");
  eval->add_option("--pred", e_pred, "Estimated poses")->required();
  eval->add_option("--gt", e_gt, "Ground-truth poses")->required();
  eval->add_option("--thresholds", e_thresholds,
                   "Threshold pairs 'meters,degrees;...' (default 0.25,2;0.5,5;5,10)");
  eval->add_option("--translation-scale", e_scale,
                   "Multiplier applied to translation thresholds")
      ->check(CLI::PositiveNumber);
  eval->add_option("--json", e_json, "Also write the JSON report here");

  // ablate-lambda and ablate-reduce share their inputs.
  ScenePathOptions a_paths;
  BuildOptions a_opts;
  LocalizeOptions a_loc;
  std::string a_grid = "0.1:1.0:0.1", a_out, a_thresholds;
  double a_scale = 1.0;
  auto add_ablation = [&](CLI::App* sub, bool with_reduce) {
    a_paths.add_scene(sub);
    a_paths.add_db(sub);
    a_paths.add_queries(sub);
    sub->add_option("--gt", a_paths.gt, "Ground-truth query poses");
    a_opts.add(sub, false, with_reduce);
    a_loc.add(sub);
    sub->add_option("--grid", a_grid, "Lambda grid start:stop:step");
    sub->add_option("--thresholds", a_thresholds, "Threshold pairs 'meters,degrees;...'");
    sub->add_option("--translation-scale", a_scale,
                    "Multiplier applied to translation thresholds")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", a_out, "CSV output (default stdout)");
  };
  auto* ablate_lambda = app.add_subcommand("ablate-lambda", "Evaluate over a lambda grid");
  add_ablation(ablate_lambda, true);
  auto* ablate_reduce =
      app.add_subcommand("ablate-reduce", "Evaluate every reduce method over a lambda grid");
  add_ablation(ablate_reduce, false);

  // synth-gen
  SynthConfig s_cfg;
  std::string s_out;
  auto* synth = app.add_subcommand("synth-gen", "Write a synthetic aliased scene");
  synth->add_option("--regions", s_cfg.n_regions, "Number of regions")->check(CLI::PositiveNumber);
  synth->add_option("--points-per-region", s_cfg.points_per_region)->check(CLI::PositiveNumber);
  synth->add_option("--db-images", s_cfg.n_db_images)->check(CLI::PositiveNumber);
  synth->add_option("--query-images", s_cfg.n_query_images)->check(CLI::PositiveNumber);
  synth->add_option("--local-dim", s_cfg.local_dim)->check(CLI::PositiveNumber);
  synth->add_option("--global-dim", s_cfg.global_dim)->check(CLI::PositiveNumber);
  synth->add_option("--aliasing", s_cfg.aliasing, "Fraction of shared local descriptors")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--sigma", s_cfg.local_noise_sigma, "Local descriptor noise");
  synth->add_option("--kp-noise", s_cfg.keypoint_noise_px, "Keypoint noise in pixels");
  synth->add_option("--spacing", s_cfg.region_spacing, "Distance between regions");
  synth->add_option("--seed", s_cfg.seed);
  synth->add_option("--out", s_out, "Output scene directory")->required();

  // analyze
  std::string an_codebook, an_regions, an_csv, an_json, an_frustum_csv;
  std::size_t an_k = 5;
  std::uint64_t an_seed = 0;
  bool an_frustum = false;
  double an_margin = 0.0;
  ScenePathOptions an_paths;
  LocalizeOptions an_loc;
  auto* analyze = app.add_subcommand("analyze", "Cluster the codebook and classify matches");
  analyze->add_option("--codebook", an_codebook, "Codebook (.lcb)")->required();
  an_paths.add_scene(analyze);
  analyze->add_option("--regions", an_paths.regions, "Point region labels (point_id region)");
  analyze->add_option("--kmeans", an_k, "Number of clusters")->check(CLI::PositiveNumber);
  analyze->add_option("--seed", an_seed, "k-means seed");
  analyze->add_option("--csv", an_csv, "Per-point cluster CSV");
  analyze->add_option("--json", an_json, "Entropy summary JSON (default stdout)");
  analyze->add_flag("--frustum", an_frustum, "Classify query matches against the view frustum");
  analyze->add_option("--margin", an_margin, "Frustum margin in pixels");
  an_paths.add_queries(analyze);
  analyze->add_option("--gt", an_paths.gt, "Ground-truth query poses");
  analyze->add_option("--frustum-csv", an_frustum_csv, "Per-match frustum labels CSV");

  // mem-report
  std::string m_codebook, m_globals;
  auto* mem = app.add_subcommand("mem-report", "Byte accounting for a codebook");
  mem->add_option("--codebook", m_codebook, "Codebook (.lcb)")->required();
  mem->add_option("--db-globals", m_globals, "Database globals stored by the heavy variant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (*build) {
    const MapDatabase db = b_paths.load_db();
    const ReducerSpec spec =
        reducer_spec(db, method_or_throw(b_opts.reduce), b_opts.seed, !b_opts.no_renorm);
    const Codebook cb = build_from(db, spec, b_opts.lambda, b_opts.storage());
    write_codebook(b_out, cb);
    std::cout << "codebook: " << cb.size() << " entries, dim " << cb.dim() << ", "
              << (cb.dtype() == Dtype::f16 ? "f16" : "f32") << ", "
              << fs::file_size(b_out) << " bytes -> " << b_out << "\n";
    return 0;
  }

  if (*localize) {
    const Codebook cb = read_codebook(l_codebook);
    const QuerySet qs = l_paths.load_queries();
    const LocalizerConfig cfg = l_opts.config();
    std::optional<DescriptorBank> globals;
    std::vector<ImageId> ids;
    if (cfg.variant == QueryVariant::heavy) {
      globals = read_descriptor_bank(resolve(l_paths.db_globals,
                                             l_paths.from_scene(&ScenePaths::db_globals),
                                             "--db-globals"));
      const std::string list = l_paths.db_images.empty() && !l_paths.scene.empty()
                                   ? ScenePaths::in(l_paths.scene).db_images.string()
                                   : l_paths.db_images;
      if (!list.empty()) {
        for (const auto& [id, path] : read_file_list(list)) {
          ids.push_back(static_cast<ImageId>(std::stoul(id)));
        }
      }
    }
    const Localizer loc(cb, cfg, globals ? &*globals : nullptr, ids);
    const auto outcomes = localize_all(loc, qs, cfg.ransac.seed);
    const auto poses = estimated_poses(qs, outcomes);
    write_poses(l_out, poses);
    std::cout << "localized " << poses.size() << " of " << qs.size() << " queries -> " << l_out
              << "\n";
    return 0;
  }

  if (*eval) {
    ThresholdSpec thr = e_thresholds.empty() ? ThresholdSpec{} : ThresholdSpec::parse(e_thresholds);
    thr = thr.scaled(e_scale);
    const auto report = aggregate(errors_by_name(read_poses(e_pred), read_poses(e_gt)), thr);
    const std::string json = report_to_json(report);
    std::cout << report_to_table(report) << json << "\n";
    if (!e_json.empty()) write_text_file(e_json, json + "\n");
    return 0;
  }

  if (*ablate_lambda || *ablate_reduce) {
    const std::vector<double> grid = parse_grid(a_grid);
    ThresholdSpec thr = a_thresholds.empty() ? ThresholdSpec{} : ThresholdSpec::parse(a_thresholds);
    thr = thr.scaled(a_scale);
    const MapDatabase db = a_paths.load_db();
    const QuerySet qs = a_paths.load_queries();
    const auto gt = a_paths.load_gt();
    std::vector<ReduceMethod> methods;
    if (*ablate_reduce) {
      methods = {ReduceMethod::gaussian, ReduceMethod::random0, ReduceMethod::first,
                 ReduceMethod::center, ReduceMethod::last};
    } else {
      methods = {method_or_throw(a_opts.reduce)};
    }
    const LocalizerConfig lc = a_loc.config();
    std::vector<std::string> keys = {"method", "lambda"};
    std::string csv = report_csv_header(keys, thr);
    for (ReduceMethod m : methods) {
      const ReducerSpec spec = reducer_spec(db, m, a_opts.seed, !a_opts.no_renorm);
      for (double lambda : grid) {
        const Codebook cb = build_from(db, spec, lambda, a_opts.storage());
        const Localizer loc(cb, lc, &db.globals, db.global_image_ids);
        const auto outcomes = localize_all(loc, qs, lc.ransac.seed);
        const auto report = aggregate(errors_by_name(estimated_poses(qs, outcomes), gt), thr);
        const std::vector<std::string> row = {std::string(to_string(m)), fmt_number(lambda)};
        csv += report_csv_row(row, report);
      }
    }
    write_or_print(a_out, csv);
    return 0;
  }

  if (*synth) {
    s_cfg.validate();
    const SyntheticScene scene = generate(s_cfg);
    write_scene(s_out, scene);
    std::cout << "scene: " << scene.db.points.size() << " points, "
              << scene.db.observations.size() << " observations, "
              << scene.db.local_banks.size() << " database images, " << scene.queries.size()
              << " queries -> " << s_out << "\n";
    return 0;
  }

  if (*analyze) {
    const Codebook cb = read_codebook(an_codebook);
    const KMeansResult km = kmeans(cb.descriptors, an_k, an_seed);
    nlohmann::ordered_json summary;
    summary["k"] = km.k;
    summary["inertia"] = km.inertia;
    summary["iterations"] = km.iterations;
    summary["inertia_history"] = km.inertia_history;
    std::string regions_path = an_paths.regions;
    if (regions_path.empty() && !an_paths.scene.empty()) {
      regions_path = ScenePaths::in(an_paths.scene).regions.string();
    }
    if (!regions_path.empty()) {
      const auto region_of = read_regions(regions_path);
      const ClusterSpread spread = cluster_spread(km, cb.point_ids, region_of);
      summary["cluster_sizes"] = spread.sizes;
      summary["cluster_entropy_bits"] = spread.entropy_bits;
      summary["mean_entropy_bits"] = spread.mean_entropy_bits;
    }
    if (!an_csv.empty()) {
      std::string csv = "point_id,x,y,z,cluster\n";
      for (std::size_t i = 0; i < cb.size(); ++i) {
        csv += std::to_string(cb.point_ids[i]) + ',' + fmt_number(cb.coords[i].x()) + ',' +
               fmt_number(cb.coords[i].y()) + ',' + fmt_number(cb.coords[i].z()) + ',' +
               std::to_string(km.assignment[i]) + '\n';
      }
      write_text_file(an_csv, csv);
    }
    if (an_frustum) {
      const QuerySet qs = an_paths.load_queries();
      const auto gt = an_paths.load_gt();
      std::map<std::string, Pose> gt_by_name;
      for (const auto& g : gt) gt_by_name[g.name] = g.pose;
      const Localizer loc(cb, an_loc.config());
      std::string csv = "query,keypoint_index,point_id,x,y,z,label\n";
      nlohmann::ordered_json per_query = nlohmann::ordered_json::array();
      for (std::size_t q = 0; q < qs.size(); ++q) {
        const auto it = gt_by_name.find(qs.names[q]);
        if (it == gt_by_name.end()) {
          throw Error(ErrorCode::InvalidArgument, "no ground-truth pose for " + qs.names[q]);
        }
        const DescriptorBank fused = loc.fuse_query(qs.locals[q], qs.globals.row(q));
        std::vector<Eigen::Vector2d> kps;
        for (const auto& kp : qs.locals[q].keypoints()) kps.push_back(kp.cast<double>());
        const MatchSet matches = loc.index().match(fused, kps);
        const auto labels = frustum_classify(matches, it->second, qs.intrinsics[q], an_margin);
        std::size_t outside = 0;
        for (std::size_t i = 0; i < matches.size(); ++i) {
          const bool in = labels[i] == FrustumLabel::inside;
          outside += in ? 0 : 1;
          const auto& m = matches[i];
          csv += qs.names[q] + ',' + std::to_string(m.query_index) + ',' +
                 std::to_string(m.point_id) + ',' + fmt_number(m.point_coord.x()) + ',' +
                 fmt_number(m.point_coord.y()) + ',' + fmt_number(m.point_coord.z()) + ',' +
                 (in ? "inside" : "outside") + '\n';
        }
        per_query.push_back({{"query", qs.names[q]},
                             {"matches", matches.size()},
                             {"outside", outside}});
      }
      summary["frustum"] = per_query;
      if (!an_frustum_csv.empty()) write_text_file(an_frustum_csv, csv);
    }
    write_or_print(an_json, summary.dump(2) + "\n");
    return 0;
  }

  if (*mem) {
    const Codebook cb = read_codebook(m_codebook);
    std::optional<DescriptorBank> globals;
    if (!m_globals.empty()) globals = read_descriptor_bank(m_globals);
    const MemoryReport r = codebook_memory_report(cb, globals ? &*globals : nullptr);
    nlohmann::ordered_json j;
    j["entries"] = r.entries;
    j["dim"] = r.dim;
    j["dtype_size"] = r.dtype_size;
    j["descriptor_bytes"] = r.descriptor_bytes;
    j["coord_bytes"] = r.coord_bytes;
    j["id_bytes"] = r.id_bytes;
    j["header_bytes"] = r.header_bytes;
    j["codebook_payload_bytes"] = r.codebook_payload_bytes;
    j["heavy_global_bytes"] = r.heavy_global_bytes;
    j["total_light_bytes"] = r.total_light_bytes;
    j["total_heavy_bytes"] = r.total_heavy_bytes;
    j["file_bytes"] = fs::file_size(m_codebook);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    // Bad inputs: malformed files, inconsistent dims, missing references.
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
