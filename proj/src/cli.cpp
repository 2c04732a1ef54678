#include "longmem/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "longmem/errors.hpp"
#include "longmem/estimators.hpp"
#include "longmem/montecarlo.hpp"
#include "longmem/sampler.hpp"
#include "longmem/spectral_model.hpp"

#ifndef LONGMEM_VERSION
#define LONGMEM_VERSION "0.0.0"
#endif

namespace longmem::cli {
namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shortest decimal that reads back to the same double; used for echoed parameters.
std::string format_param(double v) {
  char buf[40];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

TransformPath path_of(const RunConfig& cfg) {
  return cfg.dense_oracle ? TransformPath::dense : TransformPath::fast;
}

std::vector<std::pair<std::string, std::string>> parameter_echo(const RunConfig& cfg, std::size_t rn) {
  return {
      {"command", command_name(cfg.command)},
      {"version", LONGMEM_VERSION},
      {"beta", format_param(cfg.beta)},
      {"n", std::to_string(cfg.n)},
      {"rn", std::to_string(rn)},
      {"seed", std::to_string(cfg.seed)},
      {"replicates", std::to_string(cfg.replicates)},
      {"bins", std::to_string(cfg.bins)},
      {"workers", std::to_string(cfg.workers)},
      {"format", cfg.format == Format::csv ? "csv" : "json"},
      {"dense_oracle", cfg.dense_oracle ? "true" : "false"},
      {"generator", std::string(kGeneratorName)},
  };
}

nlohmann::ordered_json eigen_summary(const EigenReport& r) {
  return {{"d_raw", r.d_raw},         {"E", r.E},         {"d_est", r.d_est},
          {"alpha_est", r.alpha_est}, {"var_est", r.var_est}, {"kappa", r.kappa},
          {"slope_fit", r.slope_fit}};
}

Table generate_table(const RunConfig& cfg, const SpectralModel& model) {
  RngStream rng(cfg.seed, 0);
  const SeriesSample s = generate(model, rng);
  Table t;
  t.columns = {"index", "epsilon", "series", "cosvec", "standardized"};
  for (std::size_t i = 0; i < s.series.size(); ++i) {
    t.rows.push_back({static_cast<long long>(i), s.epsilon[i], s.series[i], s.cosvec[i], s.standardized[i]});
  }
  return t;
}

Table spectrum_table(const SpectralModel& model) {
  Table t;
  t.columns = {"frequency", "density", "first_row"};
  for (std::size_t i = 0; i < model.rn(); ++i) {
    t.rows.push_back({model.grid().frequencies[i], model.density()[i], model.first_row()[i]});
  }
  return t;
}

Table eigen_table(const SpectralModel& model) {
  Table t;
  t.columns = {"rank", "eigenvalue", "log10_rank", "log10_eigenvalue"};
  const auto& lambda = model.eigenvalues();
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    const auto rank = static_cast<double>(k + 1);
    t.rows.push_back({static_cast<long long>(k + 1), lambda[k], std::log10(rank), std::log10(lambda[k])});
  }
  t.summary = eigen_summary(eigen_report(model));
  return t;
}

Table hist_table(const RunConfig& cfg, const SpectralModel& model) {
  const Histogram h = histogram_study(model, cfg.replicates, cfg.bins, cfg.seed, cfg.workers);
  Table t;
  t.columns = {"bin_left", "bin_right", "density"};
  const RealVector dens = h.densities();
  for (std::size_t i = 0; i < h.bin_count(); ++i) t.rows.push_back({h.edges()[i], h.edges()[i + 1], dens[i]});
  t.summary = {{"sample_count", h.sample_count()}};
  if (h.sample_count() >= kMinFitSamples) {
    const double alpha = fit_alpha_from_histogram(h);
    t.summary["fit_alpha"] = alpha;
    t.summary["shape"] = std::string(classify_shape(alpha));
  }
  return t;
}

Table study_table(const RunConfig& cfg, const SpectralModel& model) {
  const MonteCarloReport r = run_study(model, cfg.replicates, cfg.seed, cfg.workers);
  Table t;
  t.columns = {"beta", "statistic", "eigen_estimate", "measured_mean", "measured_cv"};
  t.rows.push_back({cfg.beta, std::string("d"), r.eigen.d_est, r.mean_d, r.cv_d});
  t.rows.push_back({cfg.beta, std::string("alpha"), r.eigen.alpha_est, r.mean_alpha, r.cv_alpha});
  t.rows.push_back({cfg.beta, std::string("variance"), r.eigen.var_est, r.mean_var, r.cv_var});
  t.summary = eigen_summary(r.eigen);
  return t;
}

void error_line(std::ostream& err, const std::string& kind, const std::string& message) {
  const nlohmann::ordered_json j = {{"kind", kind}, {"message", message}};
  err << "error: " << j.dump() << '\n';
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::generate: return "generate";
    case Command::spectrum: return "spectrum";
    case Command::eigen: return "eigen";
    case Command::hist: return "hist";
    case Command::study: return "study";
  }
  return "unknown";
}

Table build_table(const RunConfig& cfg) {
  const SpectralModel model = build_model(cfg.beta, cfg.n, path_of(cfg));
  Table t;
  switch (cfg.command) {
    case Command::generate: t = generate_table(cfg, model); break;
    case Command::spectrum: t = spectrum_table(model); break;
    case Command::eigen: t = eigen_table(model); break;
    case Command::hist: t = hist_table(cfg, model); break;
    case Command::study: t = study_table(cfg, model); break;
  }
  t.metadata = parameter_echo(cfg, model.rn());
  return t;
}

std::string render_csv(const Table& t) {
  std::ostringstream os;
  os << "# longmem";
  for (const auto& [k, v] : t.metadata) os << ' ' << k << '=' << v;
  os << '\n';
  if (!t.summary.is_null()) os << "# summary " << t.summary.dump() << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string render_json(const Table& t) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata) {
    if (k == "version" || k == "generator") continue;
    params[k] = v;
  }
  j["version"] = LONGMEM_VERSION;
  j["generator"] = std::string(kGeneratorName);
  j["parameters"] = params;
  j["columns"] = t.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) std::visit([&r](const auto& v) { r.push_back(v); }, c);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  if (!t.summary.is_null()) j["summary"] = t.summary;
  return j.dump(2) + "\n";
}

std::vector<std::vector<double>> read_numeric_csv(std::istream& in) {
  std::vector<std::vector<double>> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') throw InvalidArgument("read_numeric_csv: bad cell '" + cell + "'");
      row.push_back(v);
    }
    out.push_back(std::move(row));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string format = "csv";

  CLI::App app{"Long-memory circulant model: series, spectra, eigen statistics, histograms, studies", "longmem"};
  app.require_subcommand(1);

  struct Spec {
    Command command;
    const char* name;
    const char* help;
  };
  const Spec specs[] = {
      {Command::generate, "generate", "one realization: epsilon, series, cosine and standardized forms"},
      {Command::spectrum, "spectrum", "frequency grid, power-law density and circulant first row"},
      {Command::eigen, "eigen", "sorted eigenvalues on log-log axes plus eigenvalue statistics"},
      {Command::hist, "hist", "pooled histogram of standardized series over replicates"},
      {Command::study, "study", "Monte Carlo study of d, alpha and variance against eigen estimates"},
  };
  for (const auto& spec : specs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("--beta", cfg.beta, "spectral slope in [0, 10]")->required();
    sub->add_option("--n", cfg.n, "frequency resolution (>= 2); series length is n, or n+1 when n is even")
        ->required();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--replicates", cfg.replicates, "replicate count (hist, study)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100'000'000}))
        ->capture_default_str();
    sub->add_option("--bins", cfg.bins, "histogram bins")->check(CLI::Range(2, 1 << 20))->capture_default_str();
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--output", cfg.output_path, "output path, '-' for stdout")->capture_default_str();
    sub->add_option("--workers", cfg.workers, "worker threads (hist, study)")
        ->envname("LONGMEM_WORKERS")
        ->check(CLI::Range(std::size_t{1}, std::size_t{4096}))
        ->capture_default_str();
    sub->add_flag("--dense-oracle", cfg.dense_oracle, "use the O(n^2) transform and convolution paths");
    sub->callback([&cfg, c = spec.command] { cfg.command = c; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << app.help();
    error_line(err, "usage", e.what());
    return 2;
  }
  cfg.format = format == "json" ? Format::json : Format::csv;

  try {
    const Table table = build_table(cfg);
    const std::string text = cfg.format == Format::csv ? render_csv(table) : render_json(table);
    if (cfg.output_path == kStdout) {
      out << text;
    } else {
      std::ofstream file(cfg.output_path, std::ios::binary);
      if (!file) throw IoError("cannot open output file '" + cfg.output_path + "'");
      file << text;
      file.close();
      if (!file) throw IoError("failed writing output file '" + cfg.output_path + "'");
    }
  } catch (const InvalidArgument& e) {
    error_line(err, e.kind(), e.what());
    return 2;
  } catch (const RuntimeFailure& e) {
    error_line(err, e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    error_line(err, "runtime", e.what());
    return 1;
  }
  return 0;
}

}  // namespace longmem::cli
