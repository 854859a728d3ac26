#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rpca/dataio.hpp"
#include "rpca/knngraph.hpp"
#include "rpca/results_io.hpp"
#include "rpca/rpca.hpp"

namespace rpca::cli {

namespace fs = std::filesystem;

namespace {

constexpr Index kDefaultK = 15;

struct Config {
  std::string input;
  std::string out;
  std::optional<Index> k;
  std::optional<Index> clusters;
  Index components = 2;
  bool components_given = false;
  bool no_standardize = false;
  bool baseline = false;
  bool rho_one = false;
  bool center_medoid = false;
  bool dump_matrices = false;
  std::optional<std::uint64_t> seed;
  Index n = 2900;
  std::string label_column = "cluster";
};

bool header_has(const fs::path& path, const std::string& name) {
  std::ifstream in(path);
  std::string line;
  if (!std::getline(in, line)) return false;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"')
      cell = cell.substr(1, cell.size() - 2);
    if (cell == name) return true;
  }
  return false;
}

struct Input {
  LabeledDataset dataset;
  Eigen::MatrixXd x;  // possibly standardized
};

Input load_input(const Config& cfg) {
  if (!fs::exists(cfg.input)) throw std::runtime_error("input file not found: " + cfg.input);
  std::optional<std::string> label;
  if (header_has(cfg.input, cfg.label_column)) label = cfg.label_column;
  Input in;
  in.dataset = load_matrix(cfg.input, true, label);
  if (cfg.no_standardize) {
    in.x = in.dataset.data.values;
  } else {
    in.x = standardize(in.dataset.data).values;
  }
  return in;
}

Index resolve_k(const Config& cfg, Index n) {
  Index k = kDefaultK;
  if (cfg.k) {
    k = *cfg.k;
  } else if (cfg.clusters) {
    if (*cfg.clusters < 1) throw std::invalid_argument("--clusters must be at least 1");
    k = n / *cfg.clusters;
  }
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (k >= n)
    throw std::invalid_argument("k must be < n (k=" + std::to_string(k) + ", n=" +
                                std::to_string(n) + ")");
  return k;
}

Index resolve_components(const Config& cfg, Index p) {
  if (cfg.components_given) return cfg.components;
  return std::min(cfg.components, p);
}

ResultMeta make_meta(const Input& in, const std::string& method, std::optional<Index> k) {
  ResultMeta meta;
  meta.method = method;
  meta.k = k;
  meta.row_ids = in.dataset.data.row_ids;
  meta.col_names = in.dataset.data.col_names;
  meta.labels = in.dataset.labels;
  return meta;
}

std::string name_of(const Input& in, Index column) {
  const auto& names = in.dataset.data.col_names;
  return column >= 0 && column < static_cast<Index>(names.size()) ? names[column]
                                                                  : std::to_string(column);
}

struct MethodRun {
  RpcaResult result;
  ResultMeta meta;
};

MethodRun run_rpca(const Config& cfg, const Input& in, const fs::path& out_dir,
                   std::ostream& err) {
  const Index n = in.x.rows();
  GraphParams params;
  FitOptions opts;
  opts.components = resolve_components(cfg, in.x.cols());
  opts.unit_rho = cfg.rho_one;
  std::optional<Index> k;
  if (!cfg.rho_one) {
    params.k = resolve_k(cfg, n);
    k = params.k;
  }

  RpcaFit fit;
  try {
    fit = fit_rpca(in.x, params, opts);
  } catch (const DegenerateVariable& e) {
    throw std::invalid_argument("variable '" + name_of(in, e.column()) +
                                "' has zero Riemannian variance");
  }
  if (fit.graph && fit.graph->degenerate_rows() > 0)
    err << "warning: " << fit.graph->degenerate_rows()
        << " rows have only zero-distance neighbors; their weights were set to 1\n";

  MethodRun run{std::move(fit.result), make_meta(in, "rpca", k)};
  write_results(run.result, run.meta, out_dir);
  if (cfg.dump_matrices && fit.graph) {
    write_coordinate(fit.graph->weights, out_dir / "A.coo");
    write_coordinate(fit.model.similarity.values, out_dir / "B.coo");
    write_coordinate(fit.model.rho.values, out_dir / "P.coo");
    write_coordinate(fit.model.distances, out_dir / "D.coo");
  }
  return run;
}

MethodRun run_pca(const Config& cfg, const Input& in, const fs::path& out_dir) {
  const auto centering = cfg.center_medoid ? Centering::medoid : Centering::mean;
  MethodRun run;
  try {
    run.result = classical_pca(in.x, resolve_components(cfg, in.x.cols()), centering);
  } catch (const DegenerateVariable& e) {
    throw std::invalid_argument("variable '" + name_of(in, e.column()) + "' has zero variance");
  }
  run.meta = make_meta(in, "pca", std::nullopt);
  write_results(run.result, run.meta, out_dir);
  return run;
}

int cmd_generate(const Config& cfg, std::ostream& out) {
  if (!cfg.seed) throw std::invalid_argument("generate requires an explicit --seed");
  const auto data = generate_benchmark(*cfg.seed, cfg.n);
  const fs::path path(cfg.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_matrix(data, path, "cluster");
  out << "wrote " << data.data.rows() << " rows x " << data.data.cols() + 1 << " columns to "
      << path.string() << '\n';
  return 0;
}

int cmd_fit(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Input in = load_input(cfg);
  const fs::path out_dir(cfg.out);
  const MethodRun run = cfg.baseline ? run_pca(cfg, in, out_dir) : run_rpca(cfg, in, out_dir, err);
  out << summary_line(run.result, run.meta) << '\n';
  return 0;
}

int cmd_compare(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Input in = load_input(cfg);
  const fs::path out_dir(cfg.out);
  const MethodRun pca = run_pca(cfg, in, out_dir / "pca");
  const MethodRun rpca = run_rpca(cfg, in, out_dir / "rpca", err);

  out << "method k     plane_inertia_pct eigenvalues\n";
  for (const MethodRun* r : {&pca, &rpca}) {
    char head[96];
    std::snprintf(head, sizeof head, "%-6s %-5s %17.2f", r->meta.method.c_str(),
                  r->meta.k ? std::to_string(*r->meta.k).c_str() : "-",
                  plane_inertia_pct(r->result));
    out << head;
    for (Index s = 0; s < r->result.eigen.values.size(); ++s) {
      char v[32];
      std::snprintf(v, sizeof v, " %.6f", r->result.eigen.values(s));
      out << v;
    }
    out << '\n';
  }
  return 0;
}

void add_common_fit_options(CLI::App* sub, Config& cfg) {
  sub->add_option("--input", cfg.input, "Input CSV (header row required)")->required();
  sub->add_option("--k", cfg.k, "Number of nearest neighbors");
  sub->add_option("--clusters", cfg.clusters, "Expected cluster count; k = floor(n / clusters)");
  sub->add_option("--components", cfg.components, "Number of reported components");
  sub->add_flag("--no-standardize", cfg.no_standardize, "Use the columns as given");
  sub->add_flag("--rho-one", cfg.rho_one, "Debug: force P = 1 (no graph)");
  sub->add_option("--label-column", cfg.label_column,
                  "Integer label column excluded from the variables (if present)");
  sub->add_flag("--dump-matrices", cfg.dump_matrices,
                "Also write A, B, P, D in coordinate format");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Riemannian principal component analysis"};
  app.require_subcommand(1);
  Config cfg;

  auto* gen = app.add_subcommand("generate", "Write the synthetic five-cluster benchmark table");
  gen->add_option("--seed", cfg.seed, "PRNG seed (required)");
  gen->add_option("--out", cfg.out, "Output CSV path")->required();
  gen->add_option("--n", cfg.n, "Number of rows")->check(CLI::PositiveNumber);

  auto* fit = app.add_subcommand("fit", "Fit R-PCA (or classical PCA with --baseline)");
  add_common_fit_options(fit, cfg);
  fit->add_option("--out", cfg.out, "Output directory")->default_val("rpca_out");
  fit->add_flag("--baseline", cfg.baseline, "Fit classical correlation PCA instead");
  fit->add_flag("--center-medoid", cfg.center_medoid,
                "With --baseline: center at the Euclidean medoid");

  auto* cmp = app.add_subcommand("compare", "Fit both methods and print a comparison table");
  add_common_fit_options(cmp, cfg);
  cmp->add_option("--out", cfg.out, "Output directory")->default_val("compare_out");
  cmp->add_flag("--center-medoid", cfg.center_medoid,
                "Center classical PCA at the Euclidean medoid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code;
  }

  cfg.components_given = fit->count("--components") + cmp->count("--components") > 0;

  try {
    if (*gen) return cmd_generate(cfg, out);
    if (*fit) return cmd_fit(cfg, out, err);
    if (*cmp) return cmd_compare(cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"rpca"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rpca::cli
