#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rpca {

using Index = Eigen::Index;

/// n x p numeric table. Rows are observations, columns are variables.
struct DataMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_names;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }

  /// Throws std::invalid_argument if the table is empty, has non-finite
  /// entries, or the label vectors are mis-sized or contain duplicates.
  void validate() const;

  /// Wraps a bare matrix with synthesized labels ("0".."n-1", "V1".."Vp").
  static DataMatrix from_values(Eigen::MatrixXd values);
};

struct LabeledDataset {
  DataMatrix data;
  std::optional<std::vector<int>> labels;
};

/// Raised by any stage that needs a nonzero spread in every column.
class DegenerateVariable : public std::invalid_argument {
 public:
  DegenerateVariable(Index column, const std::string& what)
      : std::invalid_argument(what), column_(column) {}
  Index column() const { return column_; }

 private:
  Index column_;
};

/// Reads a comma-separated numeric table.
///
/// The first header cell may be empty or "row_id", in which case the first
/// column holds row identifiers. When `label_column` is given that column is
/// removed from the values and parsed as integer labels.
LabeledDataset load_matrix(const std::filesystem::path& path,
                           bool has_header = true,
                           const std::optional<std::string>& label_column = {});

/// Writes `dataset` as CSV; labels (if any) go to a trailing column named
/// `label_column`. Numbers use the shortest round-trip representation.
void save_matrix(const LabeledDataset& dataset,
                 const std::filesystem::path& path,
                 const std::string& label_column = "cluster",
                 bool write_row_ids = false);

/// Centers every column and divides by its n-denominator standard deviation.
DataMatrix standardize(const DataMatrix& x);

/// Geometry of the synthetic five-cluster benchmark table.
struct BenchmarkGeometry {
  double outer_radius = 4.0;
  double inner_radius = 1.5;
  double second_pair_offset = 12.0;
  double parabola_curvature = 0.15;
  double parabola_vertex_x = 6.0;
  double parabola_vertex_y = -14.0;
  double parabola_x_min = -2.0;
  double parabola_x_max = 14.0;
  double jitter_sd = 0.25;
  int noise_columns = 8;
};

/// Synthetic 10-column table: (x, y) trace two nested circle pairs and a
/// parabolic arc, var1..var8 are independent N(0,1). Labels are 1..5.
///
/// Randomness comes from std::mt19937_64 seeded with `seed`; uniforms are the
/// top 53 bits of each draw and normals use the Box-Muller transform, so the
/// output is bit-identical across platforms.
LabeledDataset generate_benchmark(std::uint64_t seed, Index n = 2900,
                                  const BenchmarkGeometry& geometry = {});

}  // namespace rpca
