// csv.hpp — Trajectory CSV ingestion and emission

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nmrelax/model.hpp"

namespace nmrelax::io {

/// Reads `t_s,re,im` rows (the `im` column is optional, default 0).
/// Lines starting with `#` are comments. Malformed rows and non-monotone
/// times throw std::invalid_argument with the offending line number.
Trajectory read_trajectory_csv(std::istream& in);
Trajectory read_trajectory_csv_file(const std::string& path);

/// Writes `# key = value` metadata lines, then a header row, then the data.
/// Column names are caller-chosen (e.g. re_beta/im_beta for FID output).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<std::pair<std::string, std::string>>& metadata,
                          const std::string& re_name = "re",
                          const std::string& im_name = "im");

}  // namespace nmrelax::io
