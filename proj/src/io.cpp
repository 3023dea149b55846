#include "locfuse/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "locfuse/half.hpp"
#include "locfuse/synth.hpp"

namespace locfuse {

namespace fs = std::filesystem;

namespace {

class ByteWriter {
 public:
  void bytes(std::string_view s) { out_.append(s); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  std::string take() { return std::move(out_); }
  void reserve(std::size_t n) { out_.reserve(n); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::string_view bytes(std::size_t n) {
    need(n);
    const auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(raw() << (8 * i));
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(raw()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(raw()) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  // Fails early on absurd counts before allocating.
  void need(std::size_t n) const {
    if (n > data_.size() - pos_) {
      throw Error(ErrorCode::TruncatedFile,
                  "file ends at byte " + std::to_string(data_.size()) +
                      " while reading " + std::to_string(n) + " bytes at offset " +
                      std::to_string(pos_),
                  pos_);
    }
  }

 private:
  std::uint8_t raw() { return static_cast<std::uint8_t>(data_[pos_++]); }

  std::string_view data_;
  std::size_t pos_ = 0;
};

void check_magic(ByteReader& in, std::string_view magic) {
  if (in.remaining() < magic.size()) in.need(magic.size());
  if (in.bytes(magic.size()) != magic) {
    throw Error(ErrorCode::BadMagic, "expected magic '" + std::string(magic) + "'", 0);
  }
  const std::uint32_t version = in.u32();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::UnsupportedVersion,
                "format version " + std::to_string(version) + " is not supported", 4);
  }
}

Dtype read_dtype(ByteReader& in) {
  const std::size_t at = in.position();
  const std::uint8_t v = in.u8();
  if (v > 1) throw Error(ErrorCode::ParseError, "unknown dtype tag " + std::to_string(v), at);
  return static_cast<Dtype>(v);
}

void write_values(ByteWriter& out, const DescriptorBank& bank) {
  if (bank.dtype() == Dtype::f16) {
    for (std::uint16_t h : bank.f16_data()) out.u16(h);
  } else {
    for (float v : bank.f32_data()) out.f32(v);
  }
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

std::string fmt_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Splits a line into whitespace-separated tokens, dropping '#' comments.
std::vector<std::string_view> tokenize(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) {
    line = line.substr(0, hash);
  }
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    const auto tokens = tokenize(line);
    if (!tokens.empty()) fn(tokens, line_no);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no) {
  T value{};
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": cannot parse '" + std::string(token) + "'",
                line_no);
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": non-finite value", line_no);
    }
  }
  return value;
}

void expect_tokens(const std::vector<std::string_view>& tokens, std::size_t n,
                   std::size_t line_no) {
  if (tokens.size() != n) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                    " fields, found " + std::to_string(tokens.size()),
                line_no);
  }
}

}  // namespace

std::string encode_descriptor_bank(const DescriptorBank& bank) {
  ByteWriter out;
  out.reserve(kBankHeaderBytes + bank.rows() * bank.dim() * dtype_size(bank.dtype()) +
              bank.keypoints().size() * 8);
  out.bytes("DSB1");
  out.u32(kFormatVersion);
  out.u32(static_cast<std::uint32_t>(bank.dim()));
  out.u64(bank.rows());
  out.u8(static_cast<std::uint8_t>(bank.dtype()));
  out.u8(static_cast<std::uint8_t>(bank.kind()));
  out.u8(bank.has_keypoints() ? 1 : 0);
  write_values(out, bank);
  for (const auto& kp : bank.keypoints()) {
    out.f32(kp.x());
    out.f32(kp.y());
  }
  return out.take();
}

DescriptorBank decode_descriptor_bank(std::string_view bytes) {
  ByteReader in(bytes);
  check_magic(in, "DSB1");
  const std::uint32_t dim = in.u32();
  const std::uint64_t count = in.u64();
  const Dtype dtype = read_dtype(in);
  const std::size_t kind_at = in.position();
  const std::uint8_t kind = in.u8();
  if (kind > 1) throw Error(ErrorCode::ParseError, "unknown bank kind", kind_at);
  const bool has_keypoints = in.u8() != 0;
  if (dim == 0) throw Error(ErrorCode::InvalidDims, "bank dim is zero", 8);
  const std::size_t values = count * dim;
  in.need(values * dtype_size(dtype));

  DescriptorBank bank(dim, static_cast<BankKind>(kind), dtype);
  if (dtype == Dtype::f16) {
    std::vector<std::uint16_t> bits(values);
    for (auto& b : bits) b = in.u16();
    bank = DescriptorBank::from_half_bits(std::move(bits), dim, static_cast<BankKind>(kind));
  } else {
    std::vector<float> v(values);
    for (auto& x : v) x = in.f32();
    bank = DescriptorBank::from_floats(std::move(v), dim, static_cast<BankKind>(kind));
  }
  if (has_keypoints) {
    in.need(count * 8);
    std::vector<Eigen::Vector2f> kps(count);
    for (auto& kp : kps) {
      kp.x() = in.f32();
      kp.y() = in.f32();
    }
    bank.set_keypoints(std::move(kps));
  }
  return bank;
}

void write_descriptor_bank(const fs::path& path, const DescriptorBank& bank) {
  dump(path, encode_descriptor_bank(bank));
}

DescriptorBank read_descriptor_bank(const fs::path& path) {
  try {
    return decode_descriptor_bank(slurp(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), path.string() + ": " + e.what(), e.index());
  }
}

std::string encode_codebook(const Codebook& cb) {
  ByteWriter out;
  out.reserve(kCodebookHeaderBytes + cb.size() * (20 + cb.dim() * dtype_size(cb.dtype())));
  out.bytes("LCB1");
  out.u32(kFormatVersion);
  out.u32(static_cast<std::uint32_t>(cb.dim()));
  out.u64(cb.size());
  out.u8(static_cast<std::uint8_t>(cb.dtype()));
  out.f32(static_cast<float>(cb.fusion.lambda));
  std::uint8_t method = static_cast<std::uint8_t>(cb.reducer.method);
  if (!cb.fusion.renormalize_inputs) method |= 0x40;
  if (!cb.reducer.normalize) method |= 0x80;
  out.u8(method);
  out.u32(cb.reducer.in_dim);
  out.u32(cb.reducer.out_dim);
  out.u64(cb.reducer.seed);
  const std::size_t d = cb.dim();
  for (std::size_t i = 0; i < cb.size(); ++i) {
    out.u64(cb.point_ids[i]);
    for (int c = 0; c < 3; ++c) out.f32(cb.coords[i][c]);
    if (cb.dtype() == Dtype::f16) {
      for (std::size_t k = 0; k < d; ++k) out.u16(cb.descriptors.f16_data()[i * d + k]);
    } else {
      for (std::size_t k = 0; k < d; ++k) out.f32(cb.descriptors.f32_data()[i * d + k]);
    }
  }
  return out.take();
}

Codebook decode_codebook(std::string_view bytes) {
  ByteReader in(bytes);
  check_magic(in, "LCB1");
  const std::uint32_t dim = in.u32();
  const std::uint64_t count = in.u64();
  const Dtype dtype = read_dtype(in);
  Codebook cb;
  cb.fusion.lambda = in.f32();
  const std::size_t method_at = in.position();
  const std::uint8_t method = in.u8();
  cb.fusion.renormalize_inputs = (method & 0x40) == 0;
  cb.reducer.normalize = (method & 0x80) == 0;
  if ((method & 0x3f) > 4) {
    throw Error(ErrorCode::ParseError, "unknown reduce method tag", method_at);
  }
  cb.reducer.method = static_cast<ReduceMethod>(method & 0x3f);
  cb.reducer.in_dim = in.u32();
  cb.reducer.out_dim = in.u32();
  cb.reducer.seed = in.u64();
  if (dim == 0) throw Error(ErrorCode::InvalidDims, "codebook dim is zero", 8);
  if (cb.reducer.out_dim != dim) {
    throw Error(ErrorCode::ReducerMismatch,
                "reducer output dim " + std::to_string(cb.reducer.out_dim) +
                    " != codebook dim " + std::to_string(dim));
  }
  cb.fusion.validate();
  in.need(count * (20 + dim * dtype_size(dtype)));

  cb.point_ids.resize(count);
  cb.coords.resize(count);
  std::vector<std::uint16_t> bits;
  std::vector<float> values;
  (dtype == Dtype::f16 ? static_cast<void>(bits.reserve(count * dim))
                       : static_cast<void>(values.reserve(count * dim)));
  for (std::size_t i = 0; i < count; ++i) {
    cb.point_ids[i] = in.u64();
    for (int c = 0; c < 3; ++c) cb.coords[i][c] = in.f32();
    for (std::size_t k = 0; k < dim; ++k) {
      if (dtype == Dtype::f16) {
        bits.push_back(in.u16());
      } else {
        values.push_back(in.f32());
      }
    }
    if (i > 0 && cb.point_ids[i] <= cb.point_ids[i - 1]) {
      throw Error(ErrorCode::ParseError, "codebook entries are not sorted by point id", i);
    }
  }
  cb.descriptors = dtype == Dtype::f16
                       ? DescriptorBank::from_half_bits(std::move(bits), dim, BankKind::local)
                       : DescriptorBank::from_floats(std::move(values), dim, BankKind::local);
  return cb;
}

void write_codebook(const fs::path& path, const Codebook& cb) {
  dump(path, encode_codebook(cb));
}

Codebook read_codebook(const fs::path& path) {
  try {
    return decode_codebook(slurp(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), path.string() + ": " + e.what(), e.index());
  }
}

bool codebooks_identical(const Codebook& a, const Codebook& b) {
  return encode_codebook(a) == encode_codebook(b);
}

std::vector<NamedPose> parse_poses(std::string_view text) {
  std::vector<NamedPose> out;
  for_each_line(text, [&](const std::vector<std::string_view>& t, std::size_t line) {
    expect_tokens(t, 8, line);
    double v[7];
    for (int i = 0; i < 7; ++i) v[i] = parse_number<double>(t[1 + i], line);
    const Eigen::Quaterniond q(v[0], v[1], v[2], v[3]);
    if (std::abs(q.norm() - 1.0) > 1e-3) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line) + ": quaternion is not unit length", line);
    }
    out.push_back({std::string(t[0]), Pose::normalized(q, Eigen::Vector3d(v[4], v[5], v[6]))});
  });
  return out;
}

std::string format_poses(const std::vector<NamedPose>& poses) {
  std::string out = "# name qw qx qy qz tx ty tz (world-to-camera)\n";
  for (const auto& p : poses) {
    const auto& q = p.pose.rotation();
    const auto& t = p.pose.translation();
    out += p.name;
    for (double v : {q.w(), q.x(), q.y(), q.z(), t.x(), t.y(), t.z()}) {
      out += ' ';
      out += fmt_g(v, 9);
    }
    out += '\n';
  }
  return out;
}

std::vector<NamedPose> read_poses(const fs::path& path) {
  return parse_poses(read_text_file(path));
}

void write_poses(const fs::path& path, const std::vector<NamedPose>& poses) {
  write_text_file(path, format_poses(poses));
}

std::map<std::string, CameraIntrinsics> parse_intrinsics(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("intrinsics JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "intrinsics JSON must be an object");
  std::map<std::string, CameraIntrinsics> out;
  for (const auto& [name, v] : j.items()) {
    try {
      CameraIntrinsics k;
      k.fx = v.at("fx").get<double>();
      k.fy = v.at("fy").get<double>();
      k.cx = v.at("cx").get<double>();
      k.cy = v.at("cy").get<double>();
      k.width = v.at("width").get<int>();
      k.height = v.at("height").get<int>();
      k.validate();
      out.emplace(name, k);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, "intrinsics for '" + name + "': " + e.what());
    }
  }
  return out;
}

std::map<std::string, CameraIntrinsics> read_intrinsics(const fs::path& path) {
  return parse_intrinsics(read_text_file(path));
}

void write_intrinsics(const fs::path& path,
                      const std::map<std::string, CameraIntrinsics>& intrinsics) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [name, k] : intrinsics) {
    j[name] = {{"fx", k.fx}, {"fy", k.fy},       {"cx", k.cx},
               {"cy", k.cy}, {"width", k.width}, {"height", k.height}};
  }
  write_text_file(path, j.dump(2) + "\n");
}

const CameraIntrinsics& intrinsics_for(const std::map<std::string, CameraIntrinsics>& all,
                                       const std::string& name) {
  const auto it = all.find(name);
  if (it == all.end()) {
    throw Error(ErrorCode::MissingIntrinsics, "no intrinsics for image '" + name + "'");
  }
  return it->second;
}

std::vector<Point3D> parse_points(std::string_view text) {
  std::vector<Point3D> out;
  for_each_line(text, [&](const std::vector<std::string_view>& t, std::size_t line) {
    expect_tokens(t, 4, line);
    Point3D p;
    p.id = parse_number<PointId>(t[0], line);
    for (int i = 0; i < 3; ++i) p.coord[i] = parse_number<double>(t[1 + i], line);
    out.push_back(p);
  });
  return out;
}

std::string format_points(const std::vector<Point3D>& points) {
  std::string out = "# point_id x y z\n";
  for (const auto& p : points) {
    out += std::to_string(p.id);
    for (int i = 0; i < 3; ++i) out += ' ' + fmt_g(p.coord[i], 17);
    out += '\n';
  }
  return out;
}

std::vector<Observation> parse_observations(std::string_view text) {
  std::vector<Observation> out;
  for_each_line(text, [&](const std::vector<std::string_view>& t, std::size_t line) {
    expect_tokens(t, 5, line);
    Observation o;
    o.point_id = parse_number<PointId>(t[0], line);
    o.image_id = parse_number<ImageId>(t[1], line);
    o.keypoint.x() = parse_number<double>(t[2], line);
    o.keypoint.y() = parse_number<double>(t[3], line);
    o.descriptor_row = parse_number<std::size_t>(t[4], line);
    out.push_back(o);
  });
  return out;
}

std::string format_observations(const std::vector<Observation>& observations) {
  std::string out = "# point_id image_id kp_x kp_y row\n";
  for (const auto& o : observations) {
    out += std::to_string(o.point_id) + ' ' + std::to_string(o.image_id) + ' ' +
           fmt_g(o.keypoint.x(), 17) + ' ' + fmt_g(o.keypoint.y(), 17) + ' ' +
           std::to_string(o.descriptor_row) + '\n';
  }
  return out;
}

std::vector<std::pair<std::string, fs::path>> read_file_list(const fs::path& path) {
  const std::string text = read_text_file(path);
  const fs::path base = path.parent_path();
  std::vector<std::pair<std::string, fs::path>> out;
  for_each_line(text, [&](const std::vector<std::string_view>& t, std::size_t line) {
    expect_tokens(t, 2, line);
    fs::path p{std::string(t[1])};
    if (p.is_relative()) p = base / p;
    out.emplace_back(std::string(t[0]), p);
  });
  return out;
}

std::string read_text_file(const fs::path& path) { return slurp(path); }

void write_text_file(const fs::path& path, std::string_view text) { dump(path, text); }

ScenePaths ScenePaths::in(const fs::path& dir) {
  ScenePaths p;
  p.points = dir / "points.txt";
  p.observations = dir / "observations.txt";
  p.db_images = dir / "db_images.txt";
  p.db_globals = dir / "db_globals.dsb";
  p.queries = dir / "queries.txt";
  p.query_globals = dir / "query_globals.dsb";
  p.query_intrinsics = dir / "query_intrinsics.json";
  p.query_poses = dir / "query_poses.txt";
  p.regions = dir / "regions.txt";
  return p;
}

MapDatabase load_map_database(const fs::path& points, const fs::path& observations,
                              const fs::path& db_images, const fs::path& db_globals) {
  MapDatabase db;
  db.points = parse_points(read_text_file(points));
  db.observations = parse_observations(read_text_file(observations));
  const auto images = read_file_list(db_images);
  db.globals = read_descriptor_bank(db_globals);
  if (db.globals.rows() != images.size()) {
    throw Error(ErrorCode::MissingGlobal,
                std::to_string(images.size()) + " database images but " +
                    std::to_string(db.globals.rows()) + " global descriptors");
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto id = parse_number<ImageId>(images[i].first, i + 1);
    db.local_banks.emplace(id, read_descriptor_bank(images[i].second));
    db.global_image_ids.push_back(id);
  }
  return db;
}

QuerySet load_query_set(const fs::path& queries, const fs::path& query_globals,
                        const fs::path& intrinsics) {
  QuerySet set;
  const auto list = read_file_list(queries);
  set.globals = read_descriptor_bank(query_globals);
  if (set.globals.rows() != list.size()) {
    throw Error(ErrorCode::MissingGlobal,
                std::to_string(list.size()) + " queries but " +
                    std::to_string(set.globals.rows()) + " global descriptors");
  }
  const auto all = read_intrinsics(intrinsics);
  for (const auto& [name, path] : list) {
    set.names.push_back(name);
    set.locals.push_back(read_descriptor_bank(path));
    if (!set.locals.back().has_keypoints() && set.locals.back().rows() > 0) {
      throw Error(ErrorCode::ParseError, path.string() + " has no keypoints");
    }
    set.intrinsics.push_back(intrinsics_for(all, name));
  }
  return set;
}

std::map<PointId, int> read_regions(const fs::path& path) {
  std::map<PointId, int> out;
  for_each_line(read_text_file(path), [&](const std::vector<std::string_view>& t, std::size_t line) {
    expect_tokens(t, 2, line);
    out[parse_number<PointId>(t[0], line)] = parse_number<int>(t[1], line);
  });
  return out;
}

void write_scene(const fs::path& dir, const SyntheticScene& scene) {
  fs::create_directories(dir / "db");
  fs::create_directories(dir / "query");
  const ScenePaths paths = ScenePaths::in(dir);
  write_text_file(paths.points, format_points(scene.db.points));
  write_text_file(paths.observations, format_observations(scene.db.observations));

  std::string regions = "# point_id region\n";
  for (const auto& [id, r] : scene.region_of) {
    regions += std::to_string(id) + ' ' + std::to_string(r) + '\n';
  }
  write_text_file(paths.regions, regions);

  std::string db_list = "# image_id local_bank\n";
  std::vector<NamedPose> db_poses;
  std::map<std::string, CameraIntrinsics> db_k;
  for (std::size_t i = 0; i < scene.db.global_image_ids.size(); ++i) {
    const ImageId id = scene.db.global_image_ids[i];
    const std::string rel = "db/" + std::to_string(id) + ".dsb";
    write_descriptor_bank(dir / rel, scene.db.local_banks.at(id));
    db_list += std::to_string(id) + ' ' + rel + '\n';
    db_poses.push_back({std::to_string(id), scene.db_poses[i]});
    db_k[std::to_string(id)] = scene.intrinsics;
  }
  write_text_file(paths.db_images, db_list);
  write_descriptor_bank(paths.db_globals, scene.db.globals);
  write_poses(dir / "db_poses.txt", db_poses);
  write_intrinsics(dir / "db_intrinsics.json", db_k);

  std::string q_list = "# name local_bank\n";
  std::string truth = "# name keypoint_index point_id\n";
  std::vector<NamedPose> q_poses;
  std::map<std::string, CameraIntrinsics> q_k;
  for (std::size_t q = 0; q < scene.queries.size(); ++q) {
    const std::string& name = scene.queries.names[q];
    const std::string rel = "query/" + name + ".dsb";
    write_descriptor_bank(dir / rel, scene.queries.locals[q]);
    q_list += name + ' ' + rel + '\n';
    q_poses.push_back({name, scene.query_poses[q]});
    q_k[name] = scene.queries.intrinsics[q];
    for (std::size_t i = 0; i < scene.query_truth[q].size(); ++i) {
      truth += name + ' ' + std::to_string(i) + ' ' + std::to_string(scene.query_truth[q][i]) + '\n';
    }
  }
  write_text_file(paths.queries, q_list);
  write_descriptor_bank(paths.query_globals, scene.queries.globals);
  write_poses(paths.query_poses, q_poses);
  write_intrinsics(paths.query_intrinsics, q_k);
  write_text_file(dir / "query_truth.txt", truth);
}

}  // namespace locfuse
