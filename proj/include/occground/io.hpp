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
//
// File formats. All binary formats are little-endian with a 4-byte magic
// and a u16 version; all writers are deterministic functions of the value
// being written.
//
//   OCCG  occupancy grid   magic "OCCG", version u16=1, mode u8 (0 dense /
//                          1 sparse), dims 3xu32, origin 3xf64, voxel_size
//                          3xf64; dense payload: nx*ny*nz label bytes in
//                          x-major -> y -> z order; sparse payload: u64
//                          count then records of 3xu32 index + u8 label.
//   DMAP  depth map        magic "DMAP", version u16=1, width u32, height
//                          u32, f32 row-major payload.
//   PCLD  point cloud      magic "PCLD", version u16=1, flags u8 (bit 0:
//                          per-point labels), count u64, 3xf64 per point,
//                          then u8 per point when labeled.
//
// Annotations, predictions, manifests, reports, cameras, and rigid
// transforms are JSON documents with a top-level "version" field.

#ifndef OCCGROUND_IO_HPP_
#define OCCGROUND_IO_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "occground/dataset.hpp"
#include "occground/depthmap.hpp"
#include "occground/grounding.hpp"
#include "occground/metrics.hpp"
#include "occground/point_cloud.hpp"

namespace occground {

enum class GridEncoding { kDense = 0, kSparse = 1 };

void write_grid(const std::filesystem::path& path, const OccupancyGrid& grid,
                GridEncoding encoding = GridEncoding::kDense);
OccupancyGrid read_grid(const std::filesystem::path& path);

void write_depth(const std::filesystem::path& path, const DepthMap& map);
DepthMap read_depth(const std::filesystem::path& path);

void write_point_cloud(const std::filesystem::path& path, const PointCloud& pc);
PointCloud read_point_cloud(const std::filesystem::path& path);

/// 16-bit grayscale preview (PGM, maxval 65535): depth quantized at
/// 1/256 m, 0 = invalid, saturating at the maximum code.
void write_pgm16(const std::filesystem::path& path, const DepthMap& map);

/// Annotation document: samples plus any unknown JSON fields found next to
/// them, so foreign extensions survive a read-modify-write cycle.
struct AnnotationsFile {
  std::vector<GroundingSample> samples;
  std::vector<nlohmann::json> sample_extras;  // parallel to samples
  nlohmann::json file_extras = nlohmann::json::object();
};

void write_annotations(const std::filesystem::path& path, const AnnotationsFile& file);
void write_annotations(const std::filesystem::path& path,
                       const std::vector<GroundingSample>& samples);
AnnotationsFile read_annotations(const std::filesystem::path& path);

void write_predictions(const std::filesystem::path& path,
                       const std::vector<GroundingPrediction>& preds);
std::vector<GroundingPrediction> read_predictions(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path);

nlohmann::json report_to_json(const EvaluationReport& report);
void write_report(const std::filesystem::path& path, const EvaluationReport& report);

/// Source-label to canonical-label table. Exactly one source label must map
/// to the canonical free label 0; the table must be injective unless merges
/// are explicitly allowed.
class LabelMap {
 public:
  explicit LabelMap(std::map<Label, Label> table, bool allow_merges = false);

  const std::map<Label, Label>& table() const { return table_; }

  static LabelMap from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  std::map<Label, Label> table_;
  bool allow_merges_;
};

/// Rewrites every voxel label through the table. A label without a mapping
/// is an error naming the offending label.
OccupancyGrid remap_labels(const OccupancyGrid& grid, const LabelMap& map);

CameraModel read_camera(const std::filesystem::path& path);
void write_camera(const std::filesystem::path& path, const CameraModel& cam);

RigidTransform read_transform(const std::filesystem::path& path);
void write_transform(const std::filesystem::path& path, const RigidTransform& t);

/// Raw benchmark index: the ingestion adapter boundary. The JSON document
/// lists samples with source-frame boxes, per-sample grid or cloud
/// references (paths relative to the index directory), and an optional
/// label map applied to grids at load time.
struct RawIndex {
  std::vector<RawSample> samples;
  std::map<std::string, std::string> grid_files;   // grid_ref -> relative path
  std::map<std::string, std::string> cloud_files;  // grid_ref -> relative path
  std::map<std::string, Label> cloud_fill_labels;  // grid_ref -> fill label
  std::optional<LabelMap> label_map;
  std::filesystem::path base_dir;
};

RawIndex read_raw_index(const std::filesystem::path& index_path);

/// Loader over a raw index: reads (and remaps) OCCG grids or voxelizes
/// PCLD clouds, returning nullopt for missing or unreadable inputs.
GridLoader make_raw_grid_loader(const RawIndex& index, const GridMeta& meta);

}  // namespace occground

#endif  // OCCGROUND_IO_HPP_
