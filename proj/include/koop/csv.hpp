// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "koop/systems.hpp"

namespace koop
{

/// Reads a headerless numeric CSV. All rows must have the same column count.
/// Throws IoError on unreadable files and ContractViolation on malformed
/// values.
RealMatrix read_csv_matrix(const std::filesystem::path &path);

/// Writes rows with 17 significant digits so values round-trip exactly.
void write_csv_matrix(const std::filesystem::path &path, const RealMatrix &M,
                      const std::vector<std::string> &header = {});

/// Loads X.csv, Y.csv and the optional weights.csv from a directory. Missing
/// weights default to 1/M.
SnapshotSet load_snapshot_dir(const std::filesystem::path &dir);

void save_snapshot_dir(const std::filesystem::path &dir, const SnapshotSet &data);

/// Formats a double for CSV output.
std::string format_number(double v);

}  // namespace koop
