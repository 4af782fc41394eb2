#pragma once

#include <stdexcept>
#include <string>

#include "config.hpp"
#include "ngpde/ngpde.h"

namespace cli {

/// Failed library call; carries the status as the process exit code.
struct ApiError : std::runtime_error {
  ApiError(ngp_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  ngp_status status;
};

void cmd_solve(const ExperimentConfig& c);
void cmd_steady(const ExperimentConfig& c);
void cmd_ode(const ExperimentConfig& c);
void cmd_mc(const ExperimentConfig& c);
void cmd_compare(const ExperimentConfig& c);

}  // namespace cli
