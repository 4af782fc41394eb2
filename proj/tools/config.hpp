#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ngpde/ngpde.h"

namespace cli {

/// Bad input detected by the command-line layer; maps to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InitialSpec {
  std::string name;  // config section
  std::string kind;  // polynomial | geometric | explicit
  std::vector<double> coefficients;
  double a = 0.0;
  double ratio = 0.0;
  std::vector<double> head;
  double tail_a = 0.0;
  double tail_ratio = 0.0;
};

struct GridSpec {
  double x_min = -1.0;
  double x_max = 1.0;
  double x_step = 0.05;
  double t_max = 1.0;
  double t_step = 0.1;
};

struct OracleSpec {
  std::size_t kmax = 200;
  double rtol = 1e-10;
  double atol = 1e-13;
  double mass_tol = 1e-6;
};

struct McSpec {
  std::size_t nodes = 1000;
  std::size_t replicas = 10;
  std::uint64_t seed = 1;
  int graph = NGP_GRAPH_RING;
  double graph_param = 0.0;
  std::vector<double> times;
  std::size_t kmax = 50;
  unsigned threads = 0;
};

struct SteadySpec {
  std::optional<std::vector<double>> constants;  // c1, c2, c3, c4 given directly
  int m = 0;
  double residual_step = 1e-5;
};

struct CompareSpec {
  double t_lo = 1.0;
  double t_hi = 5.0;
  std::string norm = "sup";
  double margin = 0.01;
  double min_jump = 0.1;
  bool oracle = true;
};

struct ExperimentConfig {
  bool has_rates = false;
  ngp_rates rates{};
  std::vector<InitialSpec> initials;
  GridSpec grid;
  ngp_solver_options solver{};
  OracleSpec oracle;
  McSpec mc;
  SteadySpec steady;
  CompareSpec compare;
  std::string out_dir = ".";
  std::uint64_t hash = 0;

  const ngp_rates& require_rates() const;
};

struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> kmax;
  std::optional<double> tol;
  std::optional<std::string> constants;  // "c1,c2,c3,c4,m"
};

/// Reads the INI file (empty path: defaults only) and applies overrides.
/// The hash covers the file bytes and the overrides.
ExperimentConfig load_config(const std::string& path, const Overrides& o);

std::vector<double> parse_list(const std::string& text, const std::string& what);
double parse_double(const std::string& text, const std::string& what);

/// Uniform grid lo, lo+step, ..., hi (hi always included).
std::vector<double> grid(double lo, double hi, double step);

}  // namespace cli
