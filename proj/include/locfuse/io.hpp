#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "locfuse/codebook.hpp"
#include "locfuse/core.hpp"
#include "locfuse/pipeline.hpp"

namespace locfuse {

inline constexpr std::uint32_t kFormatVersion = 1;

// .dsb, descriptor bank. All integers little-endian.
//   "DSB1" | version u32 | dim u32 | count u64 | dtype u8 | kind u8 |
//   has_keypoints u8 | count*dim values (f32 or f16) | count*(x f32, y f32)
inline constexpr std::uint64_t kBankHeaderBytes = 4 + 4 + 4 + 8 + 1 + 1 + 1;

// .lcb, codebook.
//   "LCB1" | version u32 | dim u32 | count u64 | dtype u8 | lambda f32 |
//   method u8 | in_dim u32 | out_dim u32 | seed u64 |
//   count * (point_id u64 | x y z f32 | dim values)
// Bits of the method byte: 0-5 method tag, 6 = local descriptors were not
// renormalized before fusion, 7 = reduced globals were not renormalized.
inline constexpr std::uint64_t kCodebookHeaderBytes = 4 + 4 + 4 + 8 + 1 + 4 + 1 + 4 + 4 + 8;

std::string encode_descriptor_bank(const DescriptorBank& bank);
DescriptorBank decode_descriptor_bank(std::string_view bytes);
void write_descriptor_bank(const std::filesystem::path& path, const DescriptorBank& bank);
DescriptorBank read_descriptor_bank(const std::filesystem::path& path);

std::string encode_codebook(const Codebook& cb);
Codebook decode_codebook(std::string_view bytes);
void write_codebook(const std::filesystem::path& path, const Codebook& cb);
Codebook read_codebook(const std::filesystem::path& path);

// Bitwise comparison of everything the .lcb format stores.
bool codebooks_identical(const Codebook& a, const Codebook& b);

struct NamedPose {
  std::string name;
  Pose pose;
};

// `name qw qx qy qz tx ty tz` per line, world-to-camera; '#' starts a
// comment. Quaternions off unit length by more than 1e-3 are rejected,
// smaller deviations are normalized away.
std::vector<NamedPose> parse_poses(std::string_view text);
std::string format_poses(const std::vector<NamedPose>& poses);
std::vector<NamedPose> read_poses(const std::filesystem::path& path);
void write_poses(const std::filesystem::path& path, const std::vector<NamedPose>& poses);

// {"name": {"fx":..,"fy":..,"cx":..,"cy":..,"width":..,"height":..}}
std::map<std::string, CameraIntrinsics> parse_intrinsics(std::string_view json_text);
std::map<std::string, CameraIntrinsics> read_intrinsics(const std::filesystem::path& path);
void write_intrinsics(const std::filesystem::path& path,
                      const std::map<std::string, CameraIntrinsics>& intrinsics);
const CameraIntrinsics& intrinsics_for(const std::map<std::string, CameraIntrinsics>& all,
                                       const std::string& name);

// `point_id x y z`
std::vector<Point3D> parse_points(std::string_view text);
std::string format_points(const std::vector<Point3D>& points);
// `point_id image_id kp_x kp_y row`
std::vector<Observation> parse_observations(std::string_view text);
std::string format_observations(const std::vector<Observation>& observations);

// `key path` lines; relative paths resolve against the list file's folder.
std::vector<std::pair<std::string, std::filesystem::path>> read_file_list(
    const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Scene directory layout shared by synth-gen and the other commands:
//   points.txt observations.txt regions.txt
//   db_images.txt   (image_id local.dsb)    db/<id>.dsb   db_globals.dsb
//   db_poses.txt    db_intrinsics.json
//   queries.txt     (name local.dsb)        query/<name>.dsb  query_globals.dsb
//   query_poses.txt query_intrinsics.json   query_truth.txt
// Globals files hold one row per list entry, in list order.
struct ScenePaths {
  std::filesystem::path points, observations, db_images, db_globals;
  std::filesystem::path queries, query_globals, query_intrinsics, query_poses;
  std::filesystem::path regions;

  static ScenePaths in(const std::filesystem::path& dir);
};

MapDatabase load_map_database(const std::filesystem::path& points,
                              const std::filesystem::path& observations,
                              const std::filesystem::path& db_images,
                              const std::filesystem::path& db_globals);

QuerySet load_query_set(const std::filesystem::path& queries,
                        const std::filesystem::path& query_globals,
                        const std::filesystem::path& intrinsics);

std::map<PointId, int> read_regions(const std::filesystem::path& path);

struct SyntheticScene;
void write_scene(const std::filesystem::path& dir, const SyntheticScene& scene);

}  // namespace locfuse
