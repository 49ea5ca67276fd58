#pragma once

#include <array>
#include <string>
#include <vector>

#include "molt/fastconv.hpp"
#include "molt/geometry.hpp"

namespace molt {

/// CSV "x,y,u" over interior nodes, rows ordered by y then x, 17 significant digits.
void write_snapshot(const std::vector<double>& field, const EmbeddedMesh& mesh, const std::string& path);
/// CSV "x,u" over the line nodes.
void write_snapshot_1d(const std::vector<double>& field, const SweepLine& line, const std::string& path);

/// Rows of a snapshot file; 1D files give y = 0.
std::vector<std::array<double, 3>> read_snapshot(const std::string& path);

}  // namespace molt
