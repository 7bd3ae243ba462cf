#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nsl/initial_data.hpp"

namespace nsl {

/// Parsed experiment configuration. File format: `key = value` lines,
/// `#` comments, unknown keys rejected. See schema_text() for the key list.
struct ExperimentConfig {
  std::string experiment;  // energy|norms|riesz-check|cz|hardy|solve|weak-strong

  int n = 2;
  int N = 64;
  double L = 6.283185307179586476925286766559;  // 2*pi
  std::uint64_t seed = 0;
  std::string out = ".";

  double dt = 1e-3;
  double T = 1.0;
  bool dealias = true;
  double picard_tol = 1e-12;
  int picard_max = 50;
  int store_every = 1;

  InitialDataSpec initial;
  std::string field_path;  // optional input field file (norms)

  std::vector<double> p_list{1.5, 2.0, 3.0, 7.0};
  std::vector<double> q_list;  // empty: use q = p and q = inf per p
  std::vector<double> alpha_list;
  std::vector<double> eps_list;  // riesz-check sweep; empty: L/4..L/32

  std::string ws_mode = "perturb";  // perturb | resolution
  double ws_p = 4.0;
  double ws_C = 0.0;  // 0: calibrate empirically
  double perturb = 1e-3;

  double energy_tol = 1e-6;  // relative energy defect threshold

  bool parallel = false;

  static ExperimentConfig parse_file(const std::filesystem::path& path);
  static ExperimentConfig parse_text(const std::string& text);

  /// Documented schema for --print-schema.
  static std::string schema_text();
};

}  // namespace nsl
