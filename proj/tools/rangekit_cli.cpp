/* Copyright 2026 The Rangekit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command-line frontend. Exit codes: 0 success, 1 usage error, 2 data error
// (malformed input files, failed validation, I/O failures).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rangekit/codec.hpp"
#include "rangekit/config.hpp"
#include "rangekit/errors.hpp"
#include "rangekit/metrics.hpp"
#include "rangekit/pointcloud.hpp"
#include "rangekit/raw_frame_io.hpp"
#include "rangekit/scenario.hpp"
#include "rangekit/synthetic_frames.hpp"

namespace {

namespace fs = std::filesystem;
using namespace rangekit;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

size_t batch_size(int workers) {
  const size_t per_worker = 4;
  return std::max<size_t>(static_cast<size_t>(resolve_workers(workers)) *
                              per_worker,
                          8);
}

// Dense float32 baseline for the stats: six channels over every pixel.
uint64_t raw_plane_bytes(const SensorGeometry& geom) {
  return static_cast<uint64_t>(kNumChannels) * 4 *
         static_cast<uint64_t>(geom.height) *
         static_cast<uint64_t>(geom.width);
}

int run_compress(const std::string& input_dir, const std::string& output,
                 const std::string& profile_path, int level, int workers) {
  const QuantizationProfile profile =
      profile_path.empty() ? QuantizationProfile{}
                           : load_profile(profile_path);
  const auto paths = list_raw_frames(input_dir);
  if (paths.empty()) {
    throw std::runtime_error("no .wlri frames found in " + input_dir);
  }

  const auto start = std::chrono::steady_clock::now();
  const size_t batch = batch_size(workers);
  std::vector<std::vector<uint8_t>> blobs;
  blobs.reserve(paths.size());
  uint64_t raw_bytes = 0;

  for (size_t begin = 0; begin < paths.size(); begin += batch) {
    const size_t end = std::min(begin + batch, paths.size());
    std::vector<RangeImage> images;
    images.reserve(end - begin);
    for (size_t i = begin; i < end; ++i) {
      images.push_back(read_raw_frame(read_file(paths[i])));
      raw_bytes += raw_plane_bytes(images.back().geometry);
    }
    auto encoded = encode_frames(images, profile, level, workers);
    for (auto& blob : encoded) {
      blobs.push_back(std::move(blob));
    }
  }

  const auto archive = assemble_archive(blobs);
  write_file(output, archive);
  const double wall = seconds_since(start);

  std::array<uint64_t, kNumChannels> channel_bytes{};
  for (const auto& blob : blobs) {
    const auto info = inspect_frame(blob);
    for (int c = 0; c < kNumChannels; ++c) {
      channel_bytes[static_cast<size_t>(c)] +=
          info.payload_bytes[static_cast<size_t>(c)];
    }
  }

  std::printf("frames=%zu\n", blobs.size());
  std::printf("raw_bytes=%llu\n",
              static_cast<unsigned long long>(raw_bytes));
  std::printf("compressed_bytes=%zu\n", archive.size());
  std::printf("ratio=%.6g\n",
              static_cast<double>(raw_bytes) /
                  static_cast<double>(archive.size()));
  for (int c = 0; c < kNumChannels; ++c) {
    std::printf("channel.%s_bytes=%llu\n", channel_name(c),
                static_cast<unsigned long long>(
                    channel_bytes[static_cast<size_t>(c)]));
  }
  std::printf("wall_time_s=%.6g\n", wall);
  std::printf("throughput_mb_s=%.6g\n",
              static_cast<double>(raw_bytes) / 1.0e6 / wall);
  return 0;
}

int run_decompress(const std::string& archive_path,
                   const std::string& out_dir, bool points,
                   const std::string& format,
                   const std::string& geometry_path, int workers) {
  std::array<SensorGeometry, kNumSensors> geometries;
  if (geometry_path.empty()) {
    for (int i = 0; i < kNumSensors; ++i) {
      geometries[static_cast<size_t>(i)] =
          SensorGeometry::for_sensor(static_cast<SensorId>(i));
    }
  } else {
    geometries = load_geometries(geometry_path);
  }

  const auto bytes = read_file(archive_path);
  const auto extents = archive_frame_extents(bytes);
  fs::create_directories(out_dir);

  const size_t batch = batch_size(workers);
  char name[64];
  for (size_t begin = 0; begin < extents.size(); begin += batch) {
    const size_t end = std::min(begin + batch, extents.size());
    const auto frames = decode_frames(
        bytes,
        std::span(extents).subspan(begin, end - begin), workers, begin);
    for (size_t i = 0; i < frames.size(); ++i) {
      const size_t index = begin + i;
      const RangeImage img = frames[i].to_image(
          geometries[static_cast<size_t>(frames[i].header.sensor_id)]);
      std::snprintf(name, sizeof(name), "frame_%06zu.wlri", index);
      write_file(fs::path(out_dir) / name, write_raw_frame(img));
      if (points) {
        const PointCloud cloud = project_to_world(img);
        if (format == "csv") {
          std::snprintf(name, sizeof(name), "points_%06zu.csv", index);
          write_pointcloud_csv(fs::path(out_dir) / name, cloud);
        } else {
          std::snprintf(name, sizeof(name), "points_%06zu.bin", index);
          write_pointcloud_binary(fs::path(out_dir) / name, cloud);
        }
      }
    }
  }
  std::printf("frames=%zu\n", extents.size());
  return 0;
}

int run_gen_scenes(const std::string& output, uint64_t seed, int count,
                   int agents) {
  ScenarioGenConfig config;
  config.seed = seed;
  config.num_scenarios = count;
  config.agents_per_scenario = agents;
  const auto scenarios = generate_scenarios(config);
  write_scenarios(output, scenarios);

  size_t train = 0, val = 0, test = 0;
  for (size_t i = 0; i < scenarios.size(); ++i) {
    switch (split_for_index(i, scenarios.size())) {
      case Split::kTrain:
        ++train;
        break;
      case Split::kVal:
        ++val;
        break;
      case Split::kTest:
        ++test;
        break;
    }
  }
  std::printf("scenarios=%zu\n", scenarios.size());
  std::printf("train=%zu\n", train);
  std::printf("val=%zu\n", val);
  std::printf("test=%zu\n", test);
  return 0;
}

int run_gen_frames(const std::string& out_dir, uint64_t seed, int count,
                   const std::string& sensor_name, int returns,
                   int workers) {
  StreetSceneConfig config;
  config.sensor = sensor_from_string(sensor_name);
  config.seed = seed;
  fs::create_directories(out_dir);

  char name[64];
  size_t files = 0;
  for (int i = 0; i < count; ++i) {
    for (int r = 0; r < returns; ++r) {
      config.return_index = static_cast<ReturnIndex>(r);
      const RangeImage img =
          generate_street_frame(config, static_cast<uint64_t>(i), workers);
      std::snprintf(name, sizeof(name), "frame_%06d_r%d.wlri", i, r);
      write_file(fs::path(out_dir) / name, write_raw_frame(img));
      ++files;
    }
  }
  std::printf("frames=%d\n", count);
  std::printf("files=%zu\n", files);
  return 0;
}

int run_eval(const std::string& scenario_path,
             const std::string& prediction_path,
             const std::string& thresholds_path, const std::string& csv_path,
             int workers) {
  EvalConfig config;
  if (!thresholds_path.empty()) {
    config.thresholds = load_thresholds(thresholds_path);
  }
  config.workers = workers;

  const auto scenarios = read_scenarios(scenario_path);
  const auto predictions = read_predictions(prediction_path);
  const MetricsReport report = evaluate(scenarios, predictions, config);

  std::fputs(render_table(report).c_str(), stdout);
  std::printf("overall min_ade=%.6f miss_rate=%.6f map=%.6f\n",
              report.overall_min_ade, report.overall_miss_rate,
              report.overall_map);
  if (!csv_path.empty()) {
    const std::string csv = render_csv(report);
    write_file(csv_path,
               std::span(reinterpret_cast<const uint8_t*>(csv.data()),
                         csv.size()));
  }
  return 0;
}

int run_inspect(const std::string& archive_path) {
  const auto bytes = read_file(archive_path);
  const auto extents = archive_frame_extents(bytes);
  std::printf("archive=%s\n", archive_path.c_str());
  std::printf("bytes=%zu\n", bytes.size());
  std::printf("frames=%zu\n", extents.size());
  for (size_t i = 0; i < extents.size(); ++i) {
    const auto info =
        inspect_frame(std::span(bytes).subspan(extents[i].first,
                                               extents[i].second));
    std::printf(
        "frame=%zu sensor=%s return=%d level=%d dims=%dx%d valid=%zu "
        "bytes=%zu",
        i, to_string(info.header.sensor_id),
        static_cast<int>(info.header.return_index),
        static_cast<int>(info.header.deflate_level), info.header.height,
        info.header.width, info.valid_pixels, info.total_bytes);
    for (int c = 0; c < kNumChannels; ++c) {
      std::printf(" %s=%zu", channel_name(c),
                  info.payload_bytes[static_cast<size_t>(c)]);
    }
    std::printf("\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LiDAR range image compression and forecast evaluation"};
  app.require_subcommand(1);

  // compress
  std::string in_dir, out_path, profile_path;
  int level = kDefaultDeflateLevel;
  int workers = 0;
  auto* compress =
      app.add_subcommand("compress", "Pack .wlri frames into an archive");
  compress->add_option("input_dir", in_dir, "directory of .wlri frames")
      ->required();
  compress->add_option("output", out_path, "output .wlra archive")
      ->required();
  compress->add_option("--profile", profile_path,
                       "quantization profile config file");
  compress->add_option("--level", level, "deflate level")
      ->check(CLI::Range(0, 9));
  compress->add_option("--workers", workers, "worker threads (0 = auto)");

  // decompress
  std::string archive_path, decomp_dir, geometry_path;
  std::string format = "binary";
  bool points = false;
  auto* decompress = app.add_subcommand(
      "decompress", "Unpack an archive back to .wlri frames");
  decompress->add_option("archive", archive_path, "input .wlra archive")
      ->required();
  decompress->add_option("output_dir", decomp_dir, "output directory")
      ->required();
  decompress->add_flag("--points", points,
                       "also write world-frame point clouds");
  decompress->add_option("--format", format, "point cloud format")
      ->check(CLI::IsMember({"binary", "csv"}));
  decompress->add_option("--geometry", geometry_path,
                         "beam inclination config file");
  decompress->add_option("--workers", workers, "worker threads (0 = auto)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate synthetic data");
  gen->require_subcommand(1);

  std::string scenes_out;
  uint64_t seed = 0;
  int count = 1;
  int agents = 4;
  auto* scenes =
      gen->add_subcommand("scenes", "Generate a scenario corpus (JSONL)");
  scenes->add_option("output", scenes_out, "output .jsonl path")->required();
  scenes->add_option("--seed", seed, "generator seed");
  scenes->add_option("--count", count, "number of scenarios")
      ->check(CLI::PositiveNumber);
  scenes->add_option("--agents", agents, "agents per scenario")
      ->check(CLI::PositiveNumber);

  std::string frames_dir;
  std::string sensor_name = "top";
  int returns = 1;
  auto* frames =
      gen->add_subcommand("frames", "Generate street-scene .wlri frames");
  frames->add_option("output_dir", frames_dir, "output directory")
      ->required();
  frames->add_option("--seed", seed, "generator seed");
  frames->add_option("--count", count, "number of frames")
      ->check(CLI::PositiveNumber);
  frames->add_option("--sensor", sensor_name, "sensor name")
      ->check(CLI::IsMember(
          {"top", "front_left", "front_right", "side_left", "side_right"}));
  frames->add_option("--returns", returns, "returns per frame")
      ->check(CLI::Range(1, 2));
  frames->add_option("--workers", workers, "worker threads (0 = auto)");

  // eval
  std::string eval_scenarios, eval_predictions, thresholds_path, csv_path;
  auto* eval =
      app.add_subcommand("eval", "Score predictions against a corpus");
  eval->add_option("scenarios", eval_scenarios, "scenario corpus .jsonl")
      ->required();
  eval->add_option("predictions", eval_predictions, "predictions .jsonl")
      ->required();
  eval->add_option("--thresholds", thresholds_path,
                   "matching thresholds config file");
  eval->add_option("--csv", csv_path, "write machine-readable report here");
  eval->add_option("--workers", workers, "worker threads (0 = auto)");

  // inspect
  std::string inspect_path;
  auto* inspect =
      app.add_subcommand("inspect", "Show per-frame archive accounting");
  inspect->add_option("archive", inspect_path, "input .wlra archive")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(compress)) {
      return run_compress(in_dir, out_path, profile_path, level, workers);
    }
    if (app.got_subcommand(decompress)) {
      return run_decompress(archive_path, decomp_dir, points, format,
                            geometry_path, workers);
    }
    if (app.got_subcommand(gen)) {
      if (gen->got_subcommand(scenes)) {
        return run_gen_scenes(scenes_out, seed, count, agents);
      }
      return run_gen_frames(frames_dir, seed, count, sensor_name, returns,
                            workers);
    }
    if (app.got_subcommand(eval)) {
      return run_eval(eval_scenarios, eval_predictions, thresholds_path,
                      csv_path, workers);
    }
    if (app.got_subcommand(inspect)) {
      return run_inspect(inspect_path);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
