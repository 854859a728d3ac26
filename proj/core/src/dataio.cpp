#include "rpca/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_set>

#include "rpca/results_io.hpp"

namespace rpca {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s.remove_prefix(1);
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_blank(std::string_view line) {
  return trim(line).empty();
}

}  // namespace

void DataMatrix::validate() const {
  if (values.rows() < 1 || values.cols() < 1)
    throw std::invalid_argument("data matrix must have at least one row and one column");
  if (!values.allFinite())
    throw std::invalid_argument("data matrix contains non-finite entries");
  if (static_cast<Index>(row_ids.size()) != values.rows())
    throw std::invalid_argument("row_ids size does not match the number of rows");
  if (static_cast<Index>(col_names.size()) != values.cols())
    throw std::invalid_argument("col_names size does not match the number of columns");
  std::unordered_set<std::string> seen(col_names.begin(), col_names.end());
  if (seen.size() != col_names.size())
    throw std::invalid_argument("duplicate column names");
  seen = {row_ids.begin(), row_ids.end()};
  if (seen.size() != row_ids.size())
    throw std::invalid_argument("duplicate row ids");
}

DataMatrix DataMatrix::from_values(Eigen::MatrixXd values) {
  DataMatrix m;
  m.row_ids.reserve(values.rows());
  for (Index i = 0; i < values.rows(); ++i) m.row_ids.push_back(std::to_string(i));
  m.col_names.reserve(values.cols());
  for (Index j = 0; j < values.cols(); ++j) m.col_names.push_back("V" + std::to_string(j + 1));
  m.values = std::move(values);
  return m;
}

LabeledDataset load_matrix(const std::filesystem::path& path, bool has_header,
                           const std::optional<std::string>& label_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!is_blank(line)) lines.push_back(std::move(line));
  }
  if (lines.empty()) throw std::invalid_argument(path.string() + ": empty file");

  std::vector<std::string> header;
  std::size_t first_data = 0;
  if (has_header) {
    for (auto f : split_fields(lines[0])) header.emplace_back(f);
    first_data = 1;
  } else {
    auto width = split_fields(lines[0]).size();
    for (std::size_t j = 0; j < width; ++j) header.push_back("V" + std::to_string(j + 1));
  }

  const bool has_ids = has_header && (header[0].empty() || header[0] == "row_id");
  std::optional<std::size_t> label_pos;
  if (label_column) {
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == *label_column) label_pos = j;
    if (!label_pos) throw std::invalid_argument("label column '" + *label_column + "' not found");
  }

  std::unordered_set<std::string> names;
  std::vector<std::size_t> value_pos;
  LabeledDataset out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (!names.insert(header[j]).second)
      throw std::invalid_argument("duplicate column name '" + header[j] + "'");
    if ((has_ids && j == 0) || (label_pos && j == *label_pos)) continue;
    value_pos.push_back(j);
    out.data.col_names.push_back(header[j]);
  }

  const auto n = static_cast<Index>(lines.size() - first_data);
  const auto p = static_cast<Index>(value_pos.size());
  if (n < 1 || p < 1) throw std::invalid_argument(path.string() + ": no numeric data");
  out.data.values.resize(n, p);
  if (label_pos) out.labels.emplace(n);

  for (Index i = 0; i < n; ++i) {
    auto fields = split_fields(lines[first_data + i]);
    const auto file_row = first_data + i + 1;
    if (fields.size() != header.size())
      throw std::invalid_argument(path.string() + ": row " + std::to_string(file_row) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(header.size()));
    out.data.row_ids.emplace_back(has_ids ? std::string(fields[0]) : std::to_string(i));
    for (Index j = 0; j < p; ++j) {
      auto cell = fields[value_pos[j]];
      double v;
      if (!parse_double(cell, v) || !std::isfinite(v))
        throw std::invalid_argument(path.string() + ": non-numeric value '" + std::string(cell) +
                                    "' at row " + std::to_string(file_row) + ", column '" +
                                    header[value_pos[j]] + "'");
      out.data.values(i, j) = v;
    }
    if (label_pos) {
      auto cell = fields[*label_pos];
      int label = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), label);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw std::invalid_argument(path.string() + ": non-integer label '" + std::string(cell) +
                                    "' at row " + std::to_string(file_row));
      (*out.labels)[i] = label;
    }
  }
  out.data.validate();
  return out;
}

void save_matrix(const LabeledDataset& dataset, const std::filesystem::path& path,
                 const std::string& label_column, bool write_row_ids) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto& d = dataset.data;

  std::vector<std::string> header;
  if (write_row_ids) header.push_back("row_id");
  header.insert(header.end(), d.col_names.begin(), d.col_names.end());
  if (dataset.labels) header.push_back(label_column);
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';

  for (Index i = 0; i < d.rows(); ++i) {
    bool first = true;
    auto sep = [&] {
      if (!first) out << ',';
      first = false;
    };
    if (write_row_ids) {
      sep();
      out << d.row_ids[i];
    }
    for (Index j = 0; j < d.cols(); ++j) {
      sep();
      out << format_double(d.values(i, j));
    }
    if (dataset.labels) {
      sep();
      out << (*dataset.labels)[i];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

DataMatrix standardize(const DataMatrix& x) {
  DataMatrix out = x;
  const auto n = static_cast<double>(x.rows());
  for (Index j = 0; j < x.cols(); ++j) {
    auto col = out.values.col(j);
    const double mean = col.sum() / n;
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / n);
    if (!(sd > 0.0))
      throw DegenerateVariable(j, "column '" + x.col_names[j] + "' has zero variance");
    col /= sd;
  }
  return out;
}

namespace {

// Deterministic draws on top of mt19937_64, whose output sequence is fixed by
// the standard. The std distributions are implementation-defined, so uniforms
// and normals are derived here.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

LabeledDataset generate_benchmark(std::uint64_t seed, Index n, const BenchmarkGeometry& geo) {
  constexpr int kClusters = 5;
  if (n < kClusters) throw std::invalid_argument("benchmark size must be at least 5");

  PortableRng rng(seed);
  const Index p = 2 + geo.noise_columns;
  LabeledDataset out;
  out.data.values.resize(n, p);
  out.labels.emplace(n);
  out.data.col_names = {"x", "y"};
  for (int v = 1; v <= geo.noise_columns; ++v) out.data.col_names.push_back("var" + std::to_string(v));

  Index row = 0;
  for (int c = 1; c <= kClusters; ++c) {
    const Index share = n / kClusters + (c <= n % kClusters ? 1 : 0);
    for (Index r = 0; r < share; ++r, ++row) {
      double px = 0.0, py = 0.0;
      if (c == 5) {
        px = rng.uniform(geo.parabola_x_min, geo.parabola_x_max);
        const double dx = px - geo.parabola_vertex_x;
        py = geo.parabola_curvature * dx * dx + geo.parabola_vertex_y;
      } else {
        // 1: outer left, 2: inner left, 3: inner right, 4: outer right
        const bool outer = (c == 1 || c == 4);
        const double cx = (c <= 2) ? 0.0 : geo.second_pair_offset;
        const double radius = outer ? geo.outer_radius : geo.inner_radius;
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        px = cx + radius * std::cos(theta);
        py = radius * std::sin(theta);
      }
      out.data.values(row, 0) = px + geo.jitter_sd * rng.normal();
      out.data.values(row, 1) = py + geo.jitter_sd * rng.normal();
      (*out.labels)[row] = c;
    }
  }
  // Noise columns are drawn after the geometry so they do not depend on it.
  for (Index i = 0; i < n; ++i)
    for (Index j = 2; j < p; ++j) out.data.values(i, j) = rng.normal();

  for (Index i = 0; i < n; ++i) out.data.row_ids.push_back(std::to_string(i));
  return out;
}

}  // namespace rpca
