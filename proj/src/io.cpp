// Copyright 2026 The OccGround Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "occground/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace occground {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// little-endian byte buffers

void put_u8(std::string& buf, std::uint8_t v) { buf.push_back(static_cast<char>(v)); }

void put_u16(std::string& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xff));
  buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) {
    buf.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  }
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    buf.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  }
}

void put_f32(std::string& buf, float v) { put_u32(buf, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::string& buf, double v) { put_u64(buf, std::bit_cast<std::uint64_t>(v)); }

struct ByteReader {
  const std::string& data;
  std::size_t pos{0};

  void require(std::size_t n) const {
    if (pos + n > data.size()) {
      throw std::runtime_error("file truncated");
    }
  }
  std::uint8_t u8() {
    require(1);
    return static_cast<std::uint8_t>(data[pos++]);
  }
  std::uint16_t u16() {
    require(2);
    std::uint16_t v = 0;
    for (int b = 0; b < 2; ++b) {
      v |= static_cast<std::uint16_t>(static_cast<std::uint8_t>(data[pos++])) << (8 * b);
    }
    return v;
  }
  std::uint32_t u32() {
    require(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) {
      v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data[pos++])) << (8 * b);
    }
    return v;
  }
  std::uint64_t u64() {
    require(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) {
      v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data[pos++])) << (8 * b);
    }
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t remaining() const { return data.size() - pos; }
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw std::runtime_error("cannot read file: " + path.string());
  }
  return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path.string());
  }
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out.good()) {
    throw std::runtime_error("cannot write file: " + path.string());
  }
}

void check_magic(ByteReader& r, const char* magic, const char* what) {
  r.require(4);
  for (int n = 0; n < 4; ++n) {
    if (r.data[r.pos + n] != magic[n]) {
      throw std::runtime_error(std::string("bad magic for ") + what);
    }
  }
  r.pos += 4;
}

json parse_json_file(const std::filesystem::path& path) {
  return json::parse(read_file(path));
}

void check_version(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != 1) {
    throw std::runtime_error(std::string("unsupported version in ") + what);
  }
}

// ---------------------------------------------------------------------------
// JSON helpers for domain values

json box_to_json(const Box3D& box) {
  return json{{"center", {box.center.x(), box.center.y(), box.center.z()}},
              {"size", {box.size.x(), box.size.y(), box.size.z()}},
              {"yaw", box.yaw}};
}

Vec3 vec3_from_json(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 3) {
    throw std::runtime_error(std::string(field) + " must be an array of 3 numbers");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Box3D box_from_json(const json& j) {
  if (!j.is_object() || !j.contains("center") || !j.contains("size") ||
      !j.contains("yaw")) {
    throw std::runtime_error("box must have center, size and yaw");
  }
  return Box3D(vec3_from_json(j["center"], "center"), vec3_from_json(j["size"], "size"),
               j["yaw"].get<double>());
}

Label label_from_json(const json& j, const char* field) {
  const auto v = j.get<std::int64_t>();
  if (v < 0 || v > 255) {
    throw std::runtime_error(std::string(field) + " must be in [0, 255]");
  }
  return static_cast<Label>(v);
}

json annotated_boxes_to_json(const std::vector<AnnotatedBox>& boxes) {
  json arr = json::array();
  for (const AnnotatedBox& ab : boxes) {
    arr.push_back(json{{"box", box_to_json(ab.box)}, {"category", ab.category}});
  }
  return arr;
}

std::vector<AnnotatedBox> annotated_boxes_from_json(const json& arr) {
  if (!arr.is_array()) {
    throw std::runtime_error("all_boxes must be an array");
  }
  std::vector<AnnotatedBox> out;
  out.reserve(arr.size());
  for (const json& j : arr) {
    if (!j.is_object() || !j.contains("box") || !j.contains("category")) {
      throw std::runtime_error("all_boxes entry must have box and category");
    }
    out.push_back({box_from_json(j["box"]), label_from_json(j["category"], "category")});
  }
  return out;
}

json matrix_to_json(const Mat4& m) {
  json arr = json::array();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      arr.push_back(m(r, c));
    }
  }
  return arr;
}

Mat4 matrix_from_json(const json& arr, const char* field) {
  if (!arr.is_array() || arr.size() != 16) {
    throw std::runtime_error(std::string(field) + " must be an array of 16 numbers");
  }
  Mat4 m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      m(r, c) = arr[4 * r + c].get<double>();
    }
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// OCCG

void write_grid(const std::filesystem::path& path, const OccupancyGrid& grid,
                GridEncoding encoding) {
  const GridMeta& meta = grid.meta();
  std::string buf;
  buf.append("OCCG");
  put_u16(buf, 1);
  put_u8(buf, encoding == GridEncoding::kDense ? 0 : 1);
  for (int a = 0; a < 3; ++a) {
    put_u32(buf, static_cast<std::uint32_t>(meta.dims[a]));
  }
  for (int a = 0; a < 3; ++a) {
    put_f64(buf, meta.origin[a]);
  }
  for (int a = 0; a < 3; ++a) {
    put_f64(buf, meta.voxel_size[a]);
  }

  if (encoding == GridEncoding::kDense) {
    for (const Label l : grid.labels()) {
      put_u8(buf, l);
    }
  } else {
    const VoxelSet occ = grid.occupied_voxels();
    put_u64(buf, occ.size());
    for (const VoxelIndex& v : occ) {
      put_u32(buf, static_cast<std::uint32_t>(v.i));
      put_u32(buf, static_cast<std::uint32_t>(v.j));
      put_u32(buf, static_cast<std::uint32_t>(v.k));
      put_u8(buf, grid.at(v));
    }
  }
  write_file(path, buf);
}

OccupancyGrid read_grid(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  ByteReader r{data};
  check_magic(r, "OCCG", "occupancy grid");
  if (r.u16() != 1) {
    throw std::runtime_error("unsupported occupancy grid version");
  }
  const std::uint8_t mode = r.u8();
  if (mode > 1) {
    throw std::runtime_error("unknown occupancy grid mode");
  }
  std::array<int, 3> dims{};
  for (int a = 0; a < 3; ++a) {
    const std::uint32_t d = r.u32();
    if (d == 0 || d > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
      throw std::runtime_error("grid dims out of range");
    }
    dims[a] = static_cast<int>(d);
  }
  Vec3 origin;
  Vec3 voxel_size;
  for (int a = 0; a < 3; ++a) {
    origin[a] = r.f64();
  }
  for (int a = 0; a < 3; ++a) {
    voxel_size[a] = r.f64();
  }
  const GridMeta meta(dims, origin, voxel_size);

  const double count_check = static_cast<double>(dims[0]) * dims[1] * dims[2];
  if (count_check > 1e12) {
    throw std::runtime_error("grid dims out of range");
  }

  if (mode == 0) {
    const std::size_t count = meta.voxel_count();
    if (r.remaining() != count) {
      throw std::runtime_error("payload length mismatch");
    }
    std::vector<Label> labels(count);
    for (std::size_t n = 0; n < count; ++n) {
      labels[n] = static_cast<Label>(static_cast<std::uint8_t>(data[r.pos + n]));
    }
    return OccupancyGrid(meta, std::move(labels));
  }

  const std::uint64_t count = r.u64();
  if (count > data.size() || r.remaining() != count * 13) {
    throw std::runtime_error("payload length mismatch");
  }
  OccupancyGrid grid(meta);
  for (std::uint64_t n = 0; n < count; ++n) {
    const std::uint32_t i = r.u32();
    const std::uint32_t j = r.u32();
    const std::uint32_t k = r.u32();
    const Label label = r.u8();
    if (i >= static_cast<std::uint32_t>(dims[0]) ||
        j >= static_cast<std::uint32_t>(dims[1]) ||
        k >= static_cast<std::uint32_t>(dims[2])) {
      throw std::runtime_error("sparse index out of dims");
    }
    grid.set({static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)}, label);
  }
  return grid;
}

// ---------------------------------------------------------------------------
// DMAP

void write_depth(const std::filesystem::path& path, const DepthMap& map) {
  std::string buf;
  buf.append("DMAP");
  put_u16(buf, 1);
  put_u32(buf, static_cast<std::uint32_t>(map.width));
  put_u32(buf, static_cast<std::uint32_t>(map.height));
  for (const float v : map.values) {
    put_f32(buf, v);
  }
  write_file(path, buf);
}

DepthMap read_depth(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  ByteReader r{data};
  check_magic(r, "DMAP", "depth map");
  if (r.u16() != 1) {
    throw std::runtime_error("unsupported depth map version");
  }
  const std::uint32_t w = r.u32();
  const std::uint32_t h = r.u32();
  if (w == 0 || h == 0 || w > 1u << 20 || h > 1u << 20) {
    throw std::runtime_error("depth map size out of range");
  }
  const std::size_t count = static_cast<std::size_t>(w) * h;
  if (r.remaining() != count * 4) {
    throw std::runtime_error("payload length mismatch");
  }
  std::vector<float> values(count);
  for (std::size_t n = 0; n < count; ++n) {
    values[n] = r.f32();
  }
  // the DepthMap constructor rejects non-finite or negative entries
  return DepthMap(static_cast<int>(w), static_cast<int>(h), std::move(values));
}

// ---------------------------------------------------------------------------
// PCLD

void write_point_cloud(const std::filesystem::path& path, const PointCloud& pc) {
  if (pc.has_labels() && pc.labels.size() != pc.points.size()) {
    throw std::invalid_argument("point labels length does not match points");
  }
  std::string buf;
  buf.append("PCLD");
  put_u16(buf, 1);
  put_u8(buf, pc.has_labels() ? 1 : 0);
  put_u64(buf, pc.points.size());
  for (const Vec3& p : pc.points) {
    put_f64(buf, p.x());
    put_f64(buf, p.y());
    put_f64(buf, p.z());
  }
  for (const Label l : pc.labels) {
    put_u8(buf, l);
  }
  write_file(path, buf);
}

PointCloud read_point_cloud(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  ByteReader r{data};
  check_magic(r, "PCLD", "point cloud");
  if (r.u16() != 1) {
    throw std::runtime_error("unsupported point cloud version");
  }
  const std::uint8_t flags = r.u8();
  const std::uint64_t count = r.u64();
  if (count > data.size()) {
    throw std::runtime_error("payload length mismatch");
  }
  const std::size_t expect = count * 24 + ((flags & 1) ? count : 0);
  if (r.remaining() != expect) {
    throw std::runtime_error("payload length mismatch");
  }
  PointCloud pc;
  pc.points.reserve(count);
  for (std::uint64_t n = 0; n < count; ++n) {
    Vec3 p;
    p.x() = r.f64();
    p.y() = r.f64();
    p.z() = r.f64();
    if (!p.allFinite()) {
      throw std::runtime_error("non-finite point");
    }
    pc.points.push_back(p);
  }
  if (flags & 1) {
    pc.labels.reserve(count);
    for (std::uint64_t n = 0; n < count; ++n) {
      pc.labels.push_back(r.u8());
    }
  }
  return pc;
}

// ---------------------------------------------------------------------------
// PGM preview

void write_pgm16(const std::filesystem::path& path, const DepthMap& map) {
  std::string buf;
  buf += "P5\n" + std::to_string(map.width) + " " + std::to_string(map.height) +
         "\n65535\n";
  for (const float v : map.values) {
    const double code = std::floor(static_cast<double>(v) * 256.0 + 0.5);
    const auto q = static_cast<std::uint16_t>(std::min(code, 65535.0));
    buf.push_back(static_cast<char>((q >> 8) & 0xff));  // PGM samples are big-endian
    buf.push_back(static_cast<char>(q & 0xff));
  }
  write_file(path, buf);
}

// ---------------------------------------------------------------------------
// annotations

namespace {

const json& require_field(const json& j, const char* field, std::size_t index) {
  if (!j.contains(field)) {
    throw std::runtime_error("missing field \"" + std::string(field) + "\" in sample " +
                             std::to_string(index));
  }
  return j[field];
}

json sample_to_json(const GroundingSample& s, const json& extras) {
  json j = extras.is_object() ? extras : json::object();
  j["sample_id"] = s.sample_id;
  j["prompt"] = s.prompt;
  j["box"] = box_to_json(s.box);
  j["category"] = s.category;
  j["is_unique"] = s.is_unique;
  j["grid_file"] = s.grid_ref;
  j["all_boxes"] = annotated_boxes_to_json(s.all_boxes);
  j["split"] = s.split;
  return j;
}

constexpr const char* kSampleFields[] = {"sample_id", "prompt",    "box",
                                         "category",  "is_unique", "grid_file",
                                         "all_boxes", "split"};

}  // namespace

void write_annotations(const std::filesystem::path& path, const AnnotationsFile& file) {
  json doc = file.file_extras.is_object() ? file.file_extras : json::object();
  doc["version"] = 1;
  json samples = json::array();
  for (std::size_t n = 0; n < file.samples.size(); ++n) {
    const json& extras =
        n < file.sample_extras.size() ? file.sample_extras[n] : json::object();
    samples.push_back(sample_to_json(file.samples[n], extras));
  }
  doc["samples"] = std::move(samples);
  write_file(path, doc.dump(2) + "\n");
}

void write_annotations(const std::filesystem::path& path,
                       const std::vector<GroundingSample>& samples) {
  AnnotationsFile file;
  file.samples = samples;
  write_annotations(path, file);
}

AnnotationsFile read_annotations(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  check_version(doc, "annotations");
  if (!doc.contains("samples") || !doc["samples"].is_array()) {
    throw std::runtime_error("annotations must contain a samples array");
  }

  AnnotationsFile out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "version" && it.key() != "samples") {
      out.file_extras[it.key()] = it.value();
    }
  }

  const json& samples = doc["samples"];
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const json& j = samples[n];
    if (!j.is_object()) {
      throw std::runtime_error("sample " + std::to_string(n) + " is not an object");
    }
    try {
      GroundingSample s;
      s.sample_id = require_field(j, "sample_id", n).get<std::string>();
      s.prompt = require_field(j, "prompt", n).get<std::string>();
      s.box = box_from_json(require_field(j, "box", n));
      s.category = label_from_json(require_field(j, "category", n), "category");
      s.is_unique = require_field(j, "is_unique", n).get<bool>();
      s.grid_ref = require_field(j, "grid_file", n).get<std::string>();
      s.all_boxes = annotated_boxes_from_json(require_field(j, "all_boxes", n));
      s.split = require_field(j, "split", n).get<std::string>();

      json extras = json::object();
      for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* f : kSampleFields) {
          if (it.key() == f) {
            known = true;
            break;
          }
        }
        if (!known) {
          extras[it.key()] = it.value();
        }
      }
      out.samples.push_back(std::move(s));
      out.sample_extras.push_back(std::move(extras));
    } catch (const std::exception& e) {
      const std::string what = e.what();
      if (what.find("sample ") != std::string::npos) {
        throw;
      }
      throw std::runtime_error(what + " in sample " + std::to_string(n));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// predictions

void write_predictions(const std::filesystem::path& path,
                       const std::vector<GroundingPrediction>& preds) {
  json doc;
  doc["version"] = 1;
  json arr = json::array();
  for (const GroundingPrediction& p : preds) {
    json j;
    j["sample_id"] = p.sample_id;
    json voxels = json::array();
    for (const VoxelIndex& v : p.voxels) {
      voxels.push_back({v.i, v.j, v.k});
    }
    j["voxels"] = std::move(voxels);
    if (p.pred_box.has_value()) {
      j["pred_box"] = box_to_json(*p.pred_box);
    }
    arr.push_back(std::move(j));
  }
  doc["predictions"] = std::move(arr);
  write_file(path, doc.dump(2) + "\n");
}

std::vector<GroundingPrediction> read_predictions(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  check_version(doc, "predictions");
  if (!doc.contains("predictions") || !doc["predictions"].is_array()) {
    throw std::runtime_error("predictions file must contain a predictions array");
  }
  std::vector<GroundingPrediction> out;
  std::set<std::string> seen;
  for (const json& j : doc["predictions"]) {
    GroundingPrediction p;
    p.sample_id = j.at("sample_id").get<std::string>();
    if (!seen.insert(p.sample_id).second) {
      throw std::runtime_error("duplicate prediction for sample " + p.sample_id);
    }
    std::vector<VoxelIndex> voxels;
    for (const json& v : j.at("voxels")) {
      if (!v.is_array() || v.size() != 3) {
        throw std::runtime_error("voxel entry must be an array of 3 integers");
      }
      const auto i = v[0].get<std::int64_t>();
      const auto jj = v[1].get<std::int64_t>();
      const auto k = v[2].get<std::int64_t>();
      if (i < 0 || jj < 0 || k < 0) {
        throw std::runtime_error("voxel index must be non-negative");
      }
      voxels.push_back(
          {static_cast<int>(i), static_cast<int>(jj), static_cast<int>(k)});
    }
    p.voxels = VoxelSet(std::move(voxels));
    if (j.contains("pred_box")) {
      p.pred_box = box_from_json(j["pred_box"]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// manifest

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  json doc;
  doc["version"] = 1;
  json accepted = json::object();
  for (const auto& [split, ids] : manifest.accepted_by_split) {
    accepted[split] = ids;
  }
  doc["accepted"] = std::move(accepted);
  json rejected = json::array();
  for (const auto& [id, reason] : manifest.rejected) {
    rejected.push_back({{"sample_id", id}, {"reason", reject_reason_name(reason)}});
  }
  doc["rejected"] = std::move(rejected);
  json counts = json::object();
  for (const auto& [reason, count] : manifest.rejection_counts) {
    counts[reject_reason_name(reason)] = count;
  }
  doc["rejection_counts"] = std::move(counts);
  doc["input_count"] = manifest.input_count;
  doc["accepted_count"] = manifest.accepted_count();
  doc["rejected_count"] = manifest.rejected_count();
  write_file(path, doc.dump(2) + "\n");
}

namespace {
RejectReason reason_from_name(const std::string& name) {
  for (const RejectReason reason :
       {RejectReason::kCenterOutOfRange, RejectReason::kNoOccupiedVoxels,
        RejectReason::kMissingGrid, RejectReason::kMissingPrompt}) {
    if (name == reject_reason_name(reason)) {
      return reason;
    }
  }
  throw std::runtime_error("unknown rejection reason " + name);
}
}  // namespace

DatasetManifest read_manifest(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  check_version(doc, "manifest");
  DatasetManifest m;
  for (const auto& [split, ids] : doc.at("accepted").items()) {
    m.accepted_by_split[split] = ids.get<std::vector<std::string>>();
  }
  for (const json& j : doc.at("rejected")) {
    m.rejected.emplace_back(j.at("sample_id").get<std::string>(),
                            reason_from_name(j.at("reason").get<std::string>()));
  }
  for (const auto& [name, count] : doc.at("rejection_counts").items()) {
    m.rejection_counts[reason_from_name(name)] = count.get<std::size_t>();
  }
  m.input_count = doc.at("input_count").get<std::size_t>();
  return m;
}

// ---------------------------------------------------------------------------
// report

nlohmann::json report_to_json(const EvaluationReport& report) {
  json doc;
  doc["version"] = 1;
  doc["thresholds"] = report.thresholds;
  json counts = json::object();
  json acc = json::object();
  for (const Subset subset : {Subset::kUnique, Subset::kMultiple, Subset::kOverall}) {
    const auto count_it = report.counts.find(subset);
    counts[subset_name(subset)] = count_it == report.counts.end() ? 0 : count_it->second;
    json values = json::array();
    bool any = false;
    for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
      const auto it = report.acc.find({subset, t});
      if (it != report.acc.end()) {
        values.push_back(it->second);
        any = true;
      }
    }
    if (any) {
      acc[subset_name(subset)] = std::move(values);
    }
  }
  doc["counts"] = std::move(counts);
  doc["acc"] = std::move(acc);
  json per_sample = json::array();
  for (const auto& [id, value] : report.per_sample) {
    per_sample.push_back({{"sample_id", id}, {"iou", value}});
  }
  doc["per_sample"] = std::move(per_sample);
  doc["missing_predictions"] = report.missing_predictions;
  doc["unmatched_predictions"] = report.unmatched_predictions;
  return doc;
}

void write_report(const std::filesystem::path& path, const EvaluationReport& report) {
  write_file(path, report_to_json(report).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// label map

LabelMap::LabelMap(std::map<Label, Label> table, bool allow_merges)
    : table_(std::move(table)), allow_merges_(allow_merges) {
  std::size_t free_sources = 0;
  std::map<Label, std::size_t> target_counts;
  for (const auto& [src, dst] : table_) {
    if (dst == kFreeLabel) {
      ++free_sources;
    }
    ++target_counts[dst];
  }
  if (free_sources != 1) {
    throw std::invalid_argument("label map must send exactly one source label to 0");
  }
  if (!allow_merges_) {
    for (const auto& [dst, count] : target_counts) {
      if (count > 1) {
        throw std::invalid_argument("label map merges labels without allow_merges");
      }
    }
  }
}

LabelMap LabelMap::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("map") || !j["map"].is_object()) {
    throw std::runtime_error("label map must contain a map object");
  }
  std::map<Label, Label> table;
  for (const auto& [key, value] : j["map"].items()) {
    const long src = std::stol(key);
    const auto dst = value.get<std::int64_t>();
    if (src < 0 || src > 255 || dst < 0 || dst > 255) {
      throw std::runtime_error("label map entries must be in [0, 255]");
    }
    table[static_cast<Label>(src)] = static_cast<Label>(dst);
  }
  const bool allow_merges = j.value("allow_merges", false);
  return LabelMap(std::move(table), allow_merges);
}

nlohmann::json LabelMap::to_json() const {
  json map = json::object();
  for (const auto& [src, dst] : table_) {
    map[std::to_string(src)] = dst;
  }
  return json{{"map", std::move(map)}, {"allow_merges", allow_merges_}};
}

OccupancyGrid remap_labels(const OccupancyGrid& grid, const LabelMap& map) {
  std::array<int, 256> lookup;
  lookup.fill(-1);
  for (const auto& [src, dst] : map.table()) {
    lookup[src] = dst;
  }
  std::vector<Label> labels(grid.labels().size());
  for (std::size_t n = 0; n < labels.size(); ++n) {
    const int mapped = lookup[grid.labels()[n]];
    if (mapped < 0) {
      throw std::runtime_error("unmapped label " +
                               std::to_string(static_cast<int>(grid.labels()[n])));
    }
    labels[n] = static_cast<Label>(mapped);
  }
  return OccupancyGrid(grid.meta(), std::move(labels));
}

// ---------------------------------------------------------------------------
// camera + transform

CameraModel read_camera(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  check_version(doc, "camera");
  const json& kj = doc.at("intrinsics");
  if (!kj.is_array() || kj.size() != 9) {
    throw std::runtime_error("intrinsics must be an array of 9 numbers");
  }
  Mat3 k;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      k(r, c) = kj[3 * r + c].get<double>();
    }
  }
  const RigidTransform pose =
      RigidTransform::from_matrix(matrix_from_json(doc.at("camera_to_ego"), "camera_to_ego"));
  return CameraModel(k, pose, doc.at("width").get<int>(), doc.at("height").get<int>());
}

void write_camera(const std::filesystem::path& path, const CameraModel& cam) {
  json doc;
  doc["version"] = 1;
  json kj = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      kj.push_back(cam.intrinsics()(r, c));
    }
  }
  doc["intrinsics"] = std::move(kj);
  doc["camera_to_ego"] = matrix_to_json(cam.camera_to_ego().matrix());
  doc["width"] = cam.width();
  doc["height"] = cam.height();
  write_file(path, doc.dump(2) + "\n");
}

RigidTransform read_transform(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  check_version(doc, "transform");
  return RigidTransform::from_matrix(matrix_from_json(doc.at("matrix"), "matrix"));
}

void write_transform(const std::filesystem::path& path, const RigidTransform& t) {
  json doc;
  doc["version"] = 1;
  doc["matrix"] = matrix_to_json(t.matrix());
  write_file(path, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// raw index

RawIndex read_raw_index(const std::filesystem::path& index_path) {
  const json doc = parse_json_file(index_path);
  check_version(doc, "raw index");
  RawIndex index;
  index.base_dir = index_path.parent_path();
  if (doc.contains("label_map")) {
    index.label_map = LabelMap::from_json(doc["label_map"]);
  }
  if (!doc.contains("samples") || !doc["samples"].is_array()) {
    throw std::runtime_error("raw index must contain a samples array");
  }
  const json& samples = doc["samples"];
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const json& j = samples[n];
    try {
      RawSample raw;
      raw.sample_id = require_field(j, "sample_id", n).get<std::string>();
      if (j.contains("prompt") && j["prompt"].is_string()) {
        raw.prompt = j["prompt"].get<std::string>();
      }
      raw.box = box_from_json(require_field(j, "box", n));
      raw.category = label_from_json(require_field(j, "category", n), "category");
      if (j.contains("ego_from_source")) {
        raw.ego_from_source =
            RigidTransform::from_matrix(matrix_from_json(j["ego_from_source"], "ego_from_source"));
      }
      raw.all_boxes = annotated_boxes_from_json(require_field(j, "all_boxes", n));
      raw.split = require_field(j, "split", n).get<std::string>();

      if (j.contains("grid_file")) {
        raw.grid_ref = j["grid_file"].get<std::string>();
        index.grid_files[raw.grid_ref] = raw.grid_ref;
      } else if (j.contains("cloud_file")) {
        raw.grid_ref = j["cloud_file"].get<std::string>();
        index.cloud_files[raw.grid_ref] = raw.grid_ref;
        index.cloud_fill_labels[raw.grid_ref] =
            j.contains("fill_label") ? label_from_json(j["fill_label"], "fill_label")
                                     : Label{1};
      }
      index.samples.push_back(std::move(raw));
    } catch (const std::exception& e) {
      const std::string what = e.what();
      if (what.find("sample ") != std::string::npos) {
        throw;
      }
      throw std::runtime_error(what + " in sample " + std::to_string(n));
    }
  }
  return index;
}

GridLoader make_raw_grid_loader(const RawIndex& index, const GridMeta& meta) {
  return [&index, meta](const std::string& grid_ref) -> std::optional<OccupancyGrid> {
    const auto grid_it = index.grid_files.find(grid_ref);
    if (grid_it != index.grid_files.end()) {
      try {
        OccupancyGrid grid = read_grid(index.base_dir / grid_it->second);
        if (index.label_map.has_value()) {
          grid = remap_labels(grid, *index.label_map);
        }
        return grid;
      } catch (const std::runtime_error&) {
        return std::nullopt;  // missing or unreadable
      }
    }
    const auto cloud_it = index.cloud_files.find(grid_ref);
    if (cloud_it != index.cloud_files.end()) {
      try {
        const PointCloud cloud = read_point_cloud(index.base_dir / cloud_it->second);
        const Label fill = index.cloud_fill_labels.at(grid_ref);
        return voxelize(cloud, meta, fill);
      } catch (const std::runtime_error&) {
        return std::nullopt;
      }
    }
    return std::nullopt;
  };
}

}  // namespace occground
