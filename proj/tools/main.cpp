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
// Batch entry points: dataset construction, evaluation, random baselines,
// depth rendering, and dataset statistics.
//
// Exit codes: 0 success, 1 validation failures reported in the output,
// 2 hard I/O or format errors.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "occground/dataset.hpp"
#include "occground/depthmap.hpp"
#include "occground/grounding.hpp"
#include "occground/io.hpp"
#include "occground/metrics.hpp"
#include "occground/parallel.hpp"

namespace fs = std::filesystem;
using namespace occground;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitError = 2;

struct GridRangeFlags {
  std::vector<double> min_m{-40.0, -40.0, -1.0};
  std::vector<double> max_m{40.0, 40.0, 5.4};
  std::vector<double> voxel_m{0.4};

  void attach(CLI::App* app) {
    app->add_option("--grid-min-m", min_m, "grid minimum corner, meters (x y z)")
        ->expected(3);
    app->add_option("--grid-max-m", max_m, "grid maximum corner, meters (x y z)")
        ->expected(3);
    app->add_option("--voxel-size-m", voxel_m,
                    "voxel edge length, meters (one value or x y z)")
        ->expected(1, 3);
  }

  GridMeta resolve() const {
    Vec3 vsize;
    if (voxel_m.size() == 1) {
      vsize = Vec3::Constant(voxel_m[0]);
    } else if (voxel_m.size() == 3) {
      vsize = Vec3(voxel_m[0], voxel_m[1], voxel_m[2]);
    } else {
      throw std::invalid_argument("--voxel-size-m takes 1 or 3 values");
    }
    const Vec3 lo(min_m[0], min_m[1], min_m[2]);
    const Vec3 hi(max_m[0], max_m[1], max_m[2]);
    std::array<int, 3> dims{};
    for (int a = 0; a < 3; ++a) {
      const double extent = hi[a] - lo[a];
      if (!(extent > 0.0) || !(vsize[a] > 0.0)) {
        throw std::invalid_argument("grid range must be positive along every axis");
      }
      const double cells = extent / vsize[a];
      dims[a] = static_cast<int>(std::llround(cells));
      if (dims[a] < 1 || std::abs(cells - dims[a]) > 1e-6) {
        throw std::invalid_argument(
            "grid range must be an integer number of voxels along every axis");
      }
    }
    return GridMeta(dims, lo, vsize);
  }
};

std::string sanitize_ref(const std::string& ref) {
  std::string out;
  for (const char c : ref) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  const auto dot = out.rfind('.');
  if (dot != std::string::npos && dot > 0) {
    out = out.substr(0, dot);
  }
  return out.empty() ? "grid" : out;
}

// annotations + every referenced grid, paths resolved against dataset_dir
struct Dataset {
  AnnotationsFile annotations;
  GridStore grids;
};

Dataset load_dataset(const fs::path& dataset_dir) {
  Dataset out;
  out.annotations = read_annotations(dataset_dir / "annotations.json");
  for (const GroundingSample& s : out.annotations.samples) {
    if (!out.grids.count(s.grid_ref)) {
      out.grids.emplace(s.grid_ref, read_grid(dataset_dir / s.grid_ref));
    }
  }
  return out;
}

int cmd_build(const fs::path& raw_dir, const fs::path& out_dir,
              const GridRangeFlags& range, bool uniqueness_over_raw) {
  const RawIndex index = read_raw_index(raw_dir / "raw_index.json");

  BuildOptions options;
  options.meta = range.resolve();
  options.uniqueness_over_raw = uniqueness_over_raw;
  const GridLoader loader = make_raw_grid_loader(index, options.meta);
  BuildResult result = build_dataset(index.samples, loader, options);

  fs::create_directories(out_dir / "grids");

  // one output grid per referenced source, deduplicated and renamed
  std::map<std::string, std::string> out_ref;
  std::set<std::string> used_names;
  for (const GroundingSample& s : result.samples) {
    if (out_ref.count(s.grid_ref)) {
      continue;
    }
    std::string name = sanitize_ref(s.grid_ref);
    int suffix = 1;
    while (!used_names.insert(name).second) {
      name = sanitize_ref(s.grid_ref) + "_" + std::to_string(++suffix);
    }
    const std::string rel = "grids/" + name + ".occg";
    const auto grid = loader(s.grid_ref);
    if (!grid.has_value()) {
      throw std::runtime_error("grid vanished during build: " + s.grid_ref);
    }
    write_grid(out_dir / rel, *grid, GridEncoding::kSparse);
    out_ref.emplace(s.grid_ref, rel);
  }
  for (GroundingSample& s : result.samples) {
    s.grid_ref = out_ref.at(s.grid_ref);
  }

  write_annotations(out_dir / "annotations.json", result.samples);
  write_manifest(out_dir / "manifest.json", result.manifest);

  std::cout << "accepted " << result.manifest.accepted_count() << " of "
            << result.manifest.input_count << " samples";
  for (const auto& [split, ids] : result.manifest.accepted_by_split) {
    std::cout << "  " << split << "=" << ids.size();
  }
  std::cout << '\n';
  for (const auto& [reason, count] : result.manifest.rejection_counts) {
    if (count > 0) {
      std::cout << "rejected " << count << " (" << reject_reason_name(reason) << ")\n";
    }
  }
  return kExitOk;
}

int cmd_eval(const fs::path& dataset_dir, const fs::path& pred_path,
             const std::vector<double>& thresholds, const fs::path& report_path) {
  for (const double t : thresholds) {
    if (!(t > 0.0 && t < 1.0)) {
      throw std::invalid_argument("thresholds must lie in (0, 1)");
    }
  }
  const Dataset data = load_dataset(dataset_dir);
  const auto preds = read_predictions(pred_path);
  const EvaluationReport report =
      evaluate(data.annotations.samples, data.grids, preds, thresholds);

  std::cout << format_report_table(report);
  for (const std::string& id : report.missing_predictions) {
    std::cerr << "warning: no prediction for sample " << id << " (scored 0)\n";
  }
  for (const std::string& id : report.unmatched_predictions) {
    std::cerr << "warning: prediction for unknown sample " << id << '\n';
  }
  if (!report_path.empty()) {
    write_report(report_path, report);
  }
  const bool clean =
      report.missing_predictions.empty() && report.unmatched_predictions.empty();
  return clean ? kExitOk : kExitValidation;
}

int cmd_baseline(const fs::path& dataset_dir, const std::string& method,
                 std::uint64_t seed, const fs::path& out_path,
                 const std::string& candidates) {
  const Dataset data = load_dataset(dataset_dir);
  const BaselineCandidates pool = candidates == "all" ? BaselineCandidates::kAllBoxes
                                                      : BaselineCandidates::kSameClass;
  std::vector<GroundingPrediction> preds(data.annotations.samples.size());
  parallel_for(preds.size(), 0, [&](std::size_t n) {
    const GroundingSample& s = data.annotations.samples[n];
    const OccupancyGrid& grid = data.grids.at(s.grid_ref);
    const std::uint64_t sample_seed = baseline_seed(seed, s.sample_id);
    preds[n] = method == "gt-rand" ? gt_rand_baseline(s, grid, sample_seed, pool)
                                   : box_rand_baseline(s, grid, sample_seed);
  });
  write_predictions(out_path, preds);
  std::cout << "wrote " << preds.size() << " predictions to " << out_path.string()
            << '\n';
  return kExitOk;
}

int cmd_render(const fs::path& grid_path, const fs::path& camera_path,
               const std::string& mode, double step_m, double max_range_m,
               const fs::path& out_path, const fs::path& gray_path,
               const std::vector<std::string>& cloud_paths,
               const std::vector<std::string>& cloud_pose_paths, unsigned workers) {
  const CameraModel cam = read_camera(camera_path);

  DepthMap map;
  if (mode == "lidar") {
    if (cloud_paths.empty()) {
      throw std::invalid_argument("lidar mode needs at least one --cloud");
    }
    if (!cloud_pose_paths.empty() && cloud_pose_paths.size() != cloud_paths.size()) {
      throw std::invalid_argument("--cloud-to-ego count must match --cloud count");
    }
    std::vector<std::pair<PointCloud, RigidTransform>> clouds;
    for (std::size_t n = 0; n < cloud_paths.size(); ++n) {
      const RigidTransform pose = n < cloud_pose_paths.size()
                                      ? read_transform(cloud_pose_paths[n])
                                      : RigidTransform();
      clouds.emplace_back(read_point_cloud(cloud_paths[n]), pose);
    }
    map = project_lidar_depth(clouds, cam);
  } else {
    const OccupancyGrid grid = read_grid(grid_path);
    const double step = step_m > 0.0 ? step_m : default_step(grid.meta());
    map = mode == "fixed" ? raycast_depth_fixed(grid, cam, step, max_range_m, workers)
                          : raycast_depth_exact(grid, cam, max_range_m, workers);
  }

  if (!out_path.empty()) {
    write_depth(out_path, map);
  }
  if (!gray_path.empty()) {
    write_pgm16(gray_path, map);
  }
  std::printf("valid_pixel_fraction %.6f\n", valid_fraction(map));
  return kExitOk;
}

int cmd_stats(const fs::path& dataset_dir, const fs::path& json_path) {
  const Dataset data = load_dataset(dataset_dir);
  const auto stats = compute_statistics(data.annotations.samples, data.grids);

  std::printf("%-8s%12s%16s\n", "class", "objects", "mean voxels");
  for (const auto& [category, cs] : stats) {
    std::printf("%-8d%12zu%16ld\n", static_cast<int>(category), cs.count,
                cs.rounded_mean);
  }
  if (!json_path.empty()) {
    nlohmann::json doc;
    doc["version"] = 1;
    nlohmann::json classes = nlohmann::json::object();
    for (const auto& [category, cs] : stats) {
      classes[std::to_string(category)] = {{"count", cs.count},
                                           {"mean_voxels", cs.mean_voxels},
                                           {"rounded_mean", cs.rounded_mean}};
    }
    doc["classes"] = std::move(classes);
    std::ofstream out(json_path);
    if (!out) {
      throw std::runtime_error("cannot write file: " + json_path.string());
    }
    out << doc.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D occupancy grounding toolkit"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "construct a dataset from a raw index");
  std::string build_raw, build_out;
  GridRangeFlags build_range;
  bool uniqueness_over_raw = false;
  build->add_option("raw_dir", build_raw, "directory containing raw_index.json")
      ->required();
  build->add_option("out_dir", build_out, "output dataset directory")->required();
  build_range.attach(build);
  build->add_flag("--uniqueness-over-raw", uniqueness_over_raw,
                  "count Unique/Multiple categories over raw annotations instead of "
                  "filtered ones");

  // eval
  auto* eval = app.add_subcommand("eval", "score predictions against a dataset");
  std::string eval_dataset, eval_preds, eval_report;
  std::vector<double> eval_thresholds{0.25, 0.5};
  eval->add_option("dataset_dir", eval_dataset, "dataset directory")->required();
  eval->add_option("predictions", eval_preds, "prediction JSON file")->required();
  eval->add_option("--thresholds", eval_thresholds, "IoU thresholds in (0, 1)")
      ->expected(1, 8);
  eval->add_option("--report-json", eval_report, "write the full report here");

  // baseline
  auto* baseline = app.add_subcommand("baseline", "generate random-baseline predictions");
  std::string base_dataset, base_method, base_out = "predictions.json";
  std::string base_candidates = "same-class";
  std::uint64_t base_seed = 0;
  baseline->add_option("dataset_dir", base_dataset, "dataset directory")->required();
  baseline->add_option("--method", base_method, "gt-rand or box-rand")
      ->required()
      ->check(CLI::IsMember({"gt-rand", "box-rand"}));
  baseline->add_option("--seed", base_seed, "global RNG seed");
  baseline->add_option("--out", base_out, "output prediction file");
  baseline
      ->add_option("--candidates", base_candidates,
                   "gt-rand box pool: same-class (default) or all")
      ->check(CLI::IsMember({"same-class", "all"}));

  // render
  auto* render = app.add_subcommand("render", "render a depth map");
  std::string render_grid, render_camera, render_mode = "exact";
  std::string render_out, render_gray;
  std::vector<std::string> render_clouds, render_cloud_poses;
  double step_m = 0.0;
  double max_range_m = kDefaultMaxRange;
  unsigned workers = 0;
  render->add_option("grid", render_grid, "occupancy grid (OCCG)")->required();
  render->add_option("camera", render_camera, "camera JSON")->required();
  render->add_option("--mode", render_mode, "exact, fixed or lidar")
      ->check(CLI::IsMember({"exact", "fixed", "lidar"}));
  render->add_option("--step-m", step_m,
                     "fixed-mode marching step, meters (default: half the smallest "
                     "voxel edge)");
  render->add_option("--max-range-m", max_range_m, "marching range, meters");
  render->add_option("--out", render_out, "output depth map (DMAP)");
  render->add_option("--gray", render_gray, "optional 16-bit grayscale preview (PGM)");
  render->add_option("--cloud", render_clouds, "point cloud (PCLD) for lidar mode");
  render->add_option("--cloud-to-ego", render_cloud_poses,
                     "per-cloud rigid transform JSON (default identity)");
  render->add_option("--workers", workers, "worker threads (0 = hardware)");

  // stats
  auto* stats = app.add_subcommand("stats", "per-class referent statistics");
  std::string stats_dataset, stats_json;
  stats->add_option("dataset_dir", stats_dataset, "dataset directory")->required();
  stats->add_option("--json", stats_json, "write statistics JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (build->parsed()) {
      return cmd_build(build_raw, build_out, build_range, uniqueness_over_raw);
    }
    if (eval->parsed()) {
      return cmd_eval(eval_dataset, eval_preds, eval_thresholds, eval_report);
    }
    if (baseline->parsed()) {
      return cmd_baseline(base_dataset, base_method, base_seed, base_out,
                          base_candidates);
    }
    if (render->parsed()) {
      return cmd_render(render_grid, render_camera, render_mode, step_m, max_range_m,
                        render_out, render_gray, render_clouds, render_cloud_poses,
                        workers);
    }
    if (stats->parsed()) {
      return cmd_stats(stats_dataset, stats_json);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
