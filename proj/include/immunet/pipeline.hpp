#pragma once

#include <filesystem>
#include <string>

#include "immunet/serialize.hpp"

namespace immunet {

/// End-to-end mitigation run described by a JSON config:
///
///   {
///     "inputs":   {"trees": DIR | "edges": FILE, "delimiter": "\t",
///                  "harmful": FILE | "labels": FILE},
///     "sample":   {"fraction": 0.05, "seed": 7},
///     "immunize": {"algorithm": "sparseshield", "k": 134, "seed": 1},
///     "spread":   {"p": 0.1, "trials": 1000, "master_seed": 42, "max_steps": 64},
///     "output_dir": "out"
///   }
///
/// Relative paths resolve against the config file's directory. A manifest
/// written by an earlier run is accepted in place of a config (its "config"
/// member is used), which reproduces that run exactly.
struct PipelineResult {
  std::filesystem::path plan_path;
  std::filesystem::path report_path;
  std::filesystem::path manifest_path;
  Json plan;
  Json report;
  Json manifest;
};

PipelineResult run_pipeline(const std::filesystem::path& config_path);
PipelineResult run_pipeline(const Json& config, const std::filesystem::path& base_dir);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

}  // namespace immunet
