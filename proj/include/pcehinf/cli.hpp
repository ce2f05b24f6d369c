#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pcehinf/common.hpp"

namespace pcehinf {

inline const std::vector<std::string> kCommands = {"transform", "synthesize", "analyze",
                                                    "evaluate", "reproduce-table1"};

/// Everything a command needs. Relative paths from a config file are resolved
/// against that file's directory.
struct RunConfig {
  std::string command;
  std::filesystem::path plant;
  std::filesystem::path out = ".";

  // synthesis
  std::string mode = "nominal-pce";
  int degree = 2;
  double rho2 = 0.0;
  std::optional<double> rho2_hi;  // set: bisect ρ² on [0, rho2_hi]
  int restarts = 4;
  int max_outer_iters = 60;
  double tol = 1e-4;
  double relax = 0.05;
  std::string k_init = "auto";
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> sdpa;

  // analysis / evaluation
  std::optional<std::filesystem::path> gain_file;
  std::optional<Matrix> gain;
  int grid = 1000;
  int mc = 5000;
  double T = 10.0;
  double dt = 1e-3;
  std::vector<double> x0;  // empty selects e_1
  int nodes = 101;
  int output_stride = 10;
  double hinf_tol = 1e-6;
  int stability_grid = 1001;
  bool with_synthesis = false;
};

/// Reads a JSON config; unknown keys are schema errors.
RunConfig load_run_config(const std::filesystem::path& path);
/// Throws InvalidArgument when a field is outside its documented range.
void validate(const RunConfig& cfg);
/// Canonical JSON of the effective settings (hashed into output metadata).
std::string canonical_config(const RunConfig& cfg);

/// Executes cfg.command, writing artifacts under cfg.out and a short report to
/// `log`. Throws Error; the caller maps ErrorKind to the exit status.
void run(const RunConfig& cfg, std::ostream& log);

}  // namespace pcehinf
