#pragma once

#include <string>
#include <utility>
#include <vector>

#include "condlight/cli.hpp"

namespace condlight::cli {

/// tool / version / command entries that open every table's metadata.
std::vector<std::pair<std::string, Cell>> base_metadata(const std::string& command);

/// Throws UsageError unless lambda in [0, 1), x0 >= 0, eta in (0, 1], n_bar >= 0.
void validate_point(double lambda, double x0, double eta, double n_bar);
void validate_tol(double tol);

}  // namespace condlight::cli
