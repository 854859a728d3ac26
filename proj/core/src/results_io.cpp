#include "rpca/results_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace rpca {

namespace fs = std::filesystem;

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return {buf.data(), ptr};
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

void write_scores_svg(const RpcaResult& result, const ResultMeta& meta, const fs::path& path) {
  constexpr double kSize = 600.0;
  constexpr double kPad = 50.0;
  const Index n = result.scores.rows();
  const bool two_d = result.scores.cols() >= 2;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (n > 0) {
    xmin = result.scores.col(0).minCoeff();
    xmax = result.scores.col(0).maxCoeff();
    ymin = two_d ? result.scores.col(1).minCoeff() : -1.0;
    ymax = two_d ? result.scores.col(1).maxCoeff() : 1.0;
  }
  if (xmax - xmin <= 0.0) { xmin -= 1.0; xmax += 1.0; }
  if (ymax - ymin <= 0.0) { ymin -= 1.0; ymax += 1.0; }
  auto sx = [&](double v) { return kPad + (v - xmin) / (xmax - xmin) * (kSize - 2 * kPad); };
  auto sy = [&](double v) { return kSize - kPad - (v - ymin) / (ymax - ymin) * (kSize - 2 * kPad); };

  std::map<int, std::size_t> color_of;
  if (meta.labels)
    for (int l : *meta.labels) color_of.emplace(l, 0);
  std::size_t c = 0;
  for (auto& [label, idx] : color_of) idx = c++ % kPalette.size();

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kSize / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << xml_escape(meta.method) << " principal plane</text>\n";
  if (xmin < 0 && xmax > 0)
    out << "<line x1=\"" << fixed(sx(0), 2) << "\" y1=\"" << kPad << "\" x2=\"" << fixed(sx(0), 2)
        << "\" y2=\"" << kSize - kPad << "\" stroke=\"#bbb\"/>\n";
  if (ymin < 0 && ymax > 0)
    out << "<line x1=\"" << kPad << "\" y1=\"" << fixed(sy(0), 2) << "\" x2=\"" << kSize - kPad
        << "\" y2=\"" << fixed(sy(0), 2) << "\" stroke=\"#bbb\"/>\n";
  for (Index i = 0; i < n; ++i) {
    const double y = two_d ? result.scores(i, 1) : 0.0;
    const char* color = meta.labels ? kPalette[color_of[(*meta.labels)[i]]] : kPalette[0];
    out << "<circle cx=\"" << fixed(sx(result.scores(i, 0)), 2) << "\" cy=\"" << fixed(sy(y), 2)
        << "\" r=\"2\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
  }
  const auto pct = [&](Index s) {
    return s < result.inertia.size() ? fixed(100.0 * result.inertia(s), 2) : std::string("0.00");
  };
  out << "<text x=\"" << kSize / 2 << "\" y=\"" << kSize - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">PC1 (" << pct(0) << "%)</text>\n";
  out << "<text x=\"14\" y=\"" << kSize / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 14 " << kSize / 2 << ")\">PC2 (" << pct(1) << "%)</text>\n";
  if (meta.labels) {
    double ly = kPad;
    for (const auto& [label, idx] : color_of) {
      out << "<circle cx=\"" << kSize - kPad + 10 << "\" cy=\"" << ly << "\" r=\"4\" fill=\""
          << kPalette[idx] << "\"/><text x=\"" << kSize - kPad + 18 << "\" y=\"" << ly + 4
          << "\" font-size=\"11\">" << label << "</text>\n";
      ly += 16;
    }
  }
  out << "</svg>\n";
}

void write_circle_svg(const RpcaResult& result, const ResultMeta& meta, const fs::path& path) {
  constexpr double kSize = 600.0;
  constexpr double kRadius = 240.0;
  constexpr double kCenter = kSize / 2;
  const Index p = result.circle.rows();
  const bool two_d = result.circle.cols() >= 2;

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  out << "<defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" "
         "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#d62728\"/></marker></defs>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kCenter << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << xml_escape(meta.method) << " correlation circle</text>\n";
  out << "<circle cx=\"" << kCenter << "\" cy=\"" << kCenter << "\" r=\"" << kRadius
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<line x1=\"" << kCenter - kRadius << "\" y1=\"" << kCenter << "\" x2=\""
      << kCenter + kRadius << "\" y2=\"" << kCenter << "\" stroke=\"#bbb\"/>\n";
  out << "<line x1=\"" << kCenter << "\" y1=\"" << kCenter - kRadius << "\" x2=\"" << kCenter
      << "\" y2=\"" << kCenter + kRadius << "\" stroke=\"#bbb\"/>\n";
  for (Index j = 0; j < p; ++j) {
    const double cx = result.circle(j, 0);
    const double cy = two_d ? result.circle(j, 1) : 0.0;
    const double ex = kCenter + kRadius * cx;
    const double ey = kCenter - kRadius * cy;
    const std::string name = j < static_cast<Index>(meta.col_names.size())
                                 ? meta.col_names[j]
                                 : "V" + std::to_string(j + 1);
    out << "<line x1=\"" << kCenter << "\" y1=\"" << kCenter << "\" x2=\"" << fixed(ex, 2)
        << "\" y2=\"" << fixed(ey, 2) << "\" stroke=\"#d62728\" marker-end=\"url(#head)\"/>\n";
    out << "<text x=\"" << fixed(ex + (cx >= 0 ? 6 : -6), 2) << "\" y=\"" << fixed(ey - 4, 2)
        << "\" font-size=\"12\" text-anchor=\"" << (cx >= 0 ? "start" : "end") << "\">"
        << xml_escape(name) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

std::string summary_line(const RpcaResult& result, const ResultMeta& meta) {
  return "method=" + meta.method + " k=" + (meta.k ? std::to_string(*meta.k) : std::string("-")) +
         " plane_inertia_pct=" + fixed(plane_inertia_pct(result), 2);
}

std::vector<fs::path> write_results(const RpcaResult& result, const ResultMeta& meta,
                                    const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw std::runtime_error("cannot create output directory " + out_dir.string());

  const Index n = result.scores.rows();
  const Index m = result.scores.cols();
  const Index p = result.circle.rows();
  auto row_id = [&](Index i) {
    return i < static_cast<Index>(meta.row_ids.size()) ? meta.row_ids[i] : std::to_string(i);
  };
  auto col_name = [&](Index j) {
    return j < static_cast<Index>(meta.col_names.size()) ? meta.col_names[j]
                                                         : "V" + std::to_string(j + 1);
  };

  std::vector<fs::path> written;

  {
    const auto path = out_dir / "components.csv";
    auto out = open_out(path);
    out << "row_id";
    for (Index s = 0; s < m; ++s) out << ",PC" << s + 1;
    out << '\n';
    for (Index i = 0; i < n; ++i) {
      out << row_id(i);
      for (Index s = 0; s < m; ++s) out << ',' << format_double(result.scores(i, s));
      out << '\n';
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "circle.csv";
    auto out = open_out(path);
    out << "variable";
    for (Index s = 0; s < m; ++s) out << ",PC" << s + 1;
    out << '\n';
    for (Index j = 0; j < p; ++j) {
      out << col_name(j);
      for (Index s = 0; s < m; ++s) out << ',' << format_double(result.circle(j, s));
      out << '\n';
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "eigen.csv";
    auto out = open_out(path);
    out << "component,eigenvalue,inertia,cumulative\n";
    double cum = 0.0;
    for (Index s = 0; s < result.inertia.size(); ++s) {
      cum += result.inertia(s);
      out << s + 1 << ',' << format_double(result.eigen.values(s)) << ','
          << format_double(result.inertia(s)) << ',' << format_double(cum) << '\n';
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "summary.json";
    nlohmann::ordered_json j;
    j["n"] = n;
    j["p"] = p;
    j["k"] = meta.k ? nlohmann::ordered_json(*meta.k) : nlohmann::ordered_json(nullptr);
    j["mean_index"] = result.mean_index ? nlohmann::ordered_json(*result.mean_index)
                                        : nlohmann::ordered_json(nullptr);
    j["inertia_plane_pct"] = plane_inertia_pct(result);
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    written.push_back(path);
  }
  {
    const auto path = out_dir / "scores.svg";
    write_scores_svg(result, meta, path);
    written.push_back(path);
  }
  {
    const auto path = out_dir / "circle.svg";
    write_circle_svg(result, meta, path);
    written.push_back(path);
  }
  return written;
}

}  // namespace rpca
