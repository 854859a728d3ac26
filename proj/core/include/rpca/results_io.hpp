#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rpca/rpca.hpp"

namespace rpca {

struct ResultMeta {
  std::string method = "rpca";
  std::optional<Index> k;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_names;
  std::optional<std::vector<int>> labels;
};

/// Writes components.csv, circle.csv, eigen.csv, summary.json, scores.svg
/// and circle.svg into `out_dir` (created if missing). Returns the written
/// paths in that order.
std::vector<std::filesystem::path> write_results(
    const RpcaResult& result, const ResultMeta& meta,
    const std::filesystem::path& out_dir);

/// "method=<m> k=<k> plane_inertia_pct=<xx.xx>"
std::string summary_line(const RpcaResult& result, const ResultMeta& meta);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace rpca
