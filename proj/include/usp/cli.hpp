#pragma once

#include <string>
#include <vector>

#include "usp/poisson.hpp"

namespace usp {

struct RunConfig {
  ProblemSpec problem;
  std::string coeff_path;      // coefficients CSV (empty: skip)
  std::string grid_path;       // grid evaluation CSV (empty: skip)
  std::string report_path;     // JSON run report (empty: skip)
  std::string benchmark_path;  // benchmark CSV (empty: skip)
  int grid_size = 101;
  std::vector<int> benchmark_sizes;
};

struct CliOptions {
  bool oracle = false;     // force the dense Kronecker solver
  bool benchmark = false;  // fixed-size timing runs instead of solve_auto
  bool check = false;      // print residual / boundary-condition norms
  bool quiet = false;
};

// Parses the sectioned key = value problem file. Throws ParseError with the
// line number on bad input.
RunConfig parse_config(const std::string& text);

// Executes a run; returns the process exit status (0 success). Configuration
// errors surface as ParseError/InvalidArgumentError (exit 2 in main), solver
// failures as other usp exceptions (exit 3).
int run(const RunConfig& config, const CliOptions& opts);

}  // namespace usp
