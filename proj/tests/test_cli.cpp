#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "longmem/cli.hpp"
#include "longmem/spectral_model.hpp"

using namespace longmem;
using namespace longmem::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_args(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> numeric(const std::string& csv) {
  std::istringstream in(csv);
  return read_numeric_csv(in);
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

nlohmann::json summary_of(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# summary ", 0) == 0) return nlohmann::json::parse(line.substr(10));
  }
  return nullptr;
}

// Golden comparison: comment lines verbatim, numbers to 1e-12 relative.
void check_against_golden(const std::string& produced, const std::string& golden_name) {
  const std::string golden = read_file(std::filesystem::path(LONGMEM_GOLDEN_DIR) / golden_name);
  REQUIRE(!golden.empty());
  CHECK(first_line(produced) == first_line(golden));
  CHECK(summary_of(produced) == summary_of(golden));
  const auto a = numeric(produced);
  const auto b = numeric(golden);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].size() == b[i].size());
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      CHECK(std::abs(a[i][j] - b[i][j]) <= 1e-12 * std::max(1.0, std::abs(b[i][j])));
    }
  }
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(LONGMEM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("generate emits one row per sample with a full parameter echo") {
  const auto r = run_args({"generate", "--beta", "7", "--n", "500", "--seed", "5"});
  REQUIRE(r.code == 0);
  const std::string meta = first_line(r.out);
  CHECK(meta.rfind("# longmem command=generate", 0) == 0);
  CHECK(meta.find(" beta=7 ") != std::string::npos);
  CHECK(meta.find(" n=500 ") != std::string::npos);
  CHECK(meta.find(" seed=5 ") != std::string::npos);
  CHECK(meta.find("generator=mt19937_64/box-muller") != std::string::npos);
  CHECK(r.out.find("index,epsilon,series,cosvec,standardized\n") != std::string::npos);
  const auto rows = numeric(r.out);
  CHECK(rows.size() == 501);
  CHECK(rows.front().size() == 5);
}

TEST_CASE("generate at beta = 0 echoes epsilon as the series") {
  const auto r = run_args({"generate", "--beta", "0", "--n", "50"});
  REQUIRE(r.code == 0);
  for (const auto& row : numeric(r.out)) CHECK(std::abs(row[2] - row[1]) <= 1e-9);
}

TEST_CASE("usage errors exit with 2 and print usage on the error stream") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"generate", "--beta", "abc", "--n", "5"},
           {"generate", "--n", "5"},
           {"bogus"},
           {},
           {"hist", "--beta", "1", "--n", "200", "--replicates", "0"},
           {"spectrum", "--beta", "1", "--n", "5", "--format", "xml"},
           {"spectrum", "--beta", "12", "--n", "5"},
           {"spectrum", "--beta", "1", "--n", "1"},
           {"study", "--beta", "1", "--n", "20", "--replicates", "1"},
       }) {
    const auto r = run_args(args);
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("error: {\"kind\":") != std::string::npos);
  }
  const auto r = run_args({"generate", "--beta", "abc", "--n", "5"});
  CHECK(r.err.find("Usage:") != std::string::npos);
}

TEST_CASE("process exit codes") {
  CHECK(run_binary("spectrum --beta 1 --n 5") == 0);
  CHECK(run_binary("spectrum --beta x --n 5") == 2);
  CHECK(run_binary("spectrum --beta 1 --n 5 --output /nonexistent-dir/out.csv") == 1);
}

TEST_CASE("unwritable output path is an I/O error naming the path") {
  const auto r = run_args({"spectrum", "--beta", "1", "--n", "5", "--output", "/nonexistent-dir/x.csv"});
  CHECK(r.code == 1);
  CHECK(r.err.find("\"kind\":\"io\"") != std::string::npos);
  CHECK(r.err.find("/nonexistent-dir/x.csv") != std::string::npos);
}

TEST_CASE("spectrum reproduces the reference small-model rows and round-trips exactly") {
  const auto r = run_args({"spectrum", "--beta", "7", "--n", "5"});
  REQUIRE(r.code == 0);
  const auto rows = numeric(r.out);
  const auto model = build_model(7.0, 5);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(rows[i][0] == model.grid().frequencies[i]);
    CHECK(rows[i][1] == model.density()[i]);
    CHECK(rows[i][2] == model.first_row()[i]);
  }
  CHECK(rows[0][2] == doctest::Approx(664).epsilon(0.005));
  CHECK(rows[2][1] == doctest::Approx(3162.3).epsilon(0.005));

  const auto identity = numeric(run_args({"spectrum", "--beta", "0", "--n", "5"}).out);
  CHECK(identity[0][2] == doctest::Approx(1.0));
  for (std::size_t i = 1; i < 5; ++i) CHECK(std::abs(identity[i][2]) < 1e-10);

  const auto seven = numeric(run_args({"spectrum", "--beta", "3", "--n", "7"}).out);
  CHECK(seven[0][2] == doctest::Approx(12.510).epsilon(5e-4));
  CHECK(seven[3][2] == doctest::Approx(5.543).epsilon(5e-4));
}

TEST_CASE("spectrum golden file") {
  check_against_golden(run_args({"spectrum", "--beta", "7", "--n", "5"}).out, "spectrum_beta7_n5.csv");
}

TEST_CASE("CSV round-trips full double precision") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> mant(1.0, 2.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  Table t;
  t.columns = {"a", "b"};
  std::vector<std::vector<double>> values;
  for (int i = 0; i < 2000; ++i) {
    const double a = std::ldexp(mant(gen), expo(gen));
    const double b = -std::ldexp(mant(gen), expo(gen) / 10);
    values.push_back({a, b});
    t.rows.push_back({a, b});
  }
  CHECK(numeric(render_csv(t)) == values);
}

TEST_CASE("eigen output") {
  SUBCASE("near-flat spectrum at beta = 0.001") {
    const auto r = run_args({"eigen", "--beta", "0.001", "--n", "200"});
    REQUIRE(r.code == 0);
    const auto rows = numeric(r.out);
    CHECK(rows.size() == 201);
    CHECK(rows.front()[1] / rows.back()[1] < 1.01);
    CHECK(summary_of(r.out)["d_raw"].get<double>() > 199.0);
  }
  SUBCASE("two dominant eigenvalues at beta = 10") {
    const auto r = run_args({"eigen", "--beta", "10", "--n", "200"});
    const auto rows = numeric(r.out);
    double total = 0.0;
    for (const auto& row : rows) total += row[1];
    CHECK((rows[0][1] + rows[1][1]) / total > 0.96);
    CHECK((rows[0][1] + rows[1][1] + rows[2][1]) / total > 0.99);
    for (const auto& row : rows) {
      CHECK(row[2] == doctest::Approx(std::log10(row[0])));
      CHECK(row[3] == doctest::Approx(std::log10(row[1])));
    }
    const double kappa = summary_of(r.out)["kappa"].get<double>();
    CHECK(kappa > 3.2e11 / 1.5);
    CHECK(kappa < 3.2e11 * 1.5);
  }
}

TEST_CASE("hist classifies the four shapes") {
  struct Case {
    const char* beta;
    const char* shape;
  };
  for (const Case& c : {Case{"0.001", "truncated-normal"}, Case{"2.2", "wigner-semicircle"}, Case{"3", "uniform"},
                        Case{"10", "arcsine"}}) {
    CAPTURE(c.beta);
    const auto r = run_args({"hist", "--beta", c.beta, "--n", "200", "--replicates", "200", "--workers", "2"});
    REQUIRE(r.code == 0);
    CHECK(summary_of(r.out)["shape"] == c.shape);
    const auto rows = numeric(r.out);
    CHECK(rows.size() == 100);
    double area = 0.0;
    for (const auto& row : rows) area += row[2] * (row[1] - row[0]);
    CHECK(std::abs(area - 1.0) <= 1e-9);
  }
}

TEST_CASE("hist golden file at seed 5") {
  check_against_golden(run_args({"hist", "--beta", "2.2", "--n", "200", "--replicates", "200"}).out,
                       "hist_beta2.2_n200_seed5.csv");
}

TEST_CASE("study output mirrors the table layout") {
  const auto r = run_args({"study", "--beta", "2.2", "--n", "200", "--replicates", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("beta,statistic,eigen_estimate,measured_mean,measured_cv\n") != std::string::npos);
  CHECK(r.out.find("\n2.2000000000000002,d,") != std::string::npos);
  CHECK(r.out.find("\n2.2000000000000002,alpha,") != std::string::npos);
  CHECK(r.out.find("\n2.2000000000000002,variance,") != std::string::npos);
}

TEST_CASE("commands are deterministic, including across worker counts") {
  const std::vector<std::string> base{"study", "--beta", "3", "--n", "200", "--replicates", "40"};
  const auto a = run_args(base);
  const auto b = run_args(base);
  CHECK(a.out == b.out);
  auto with_workers = base;
  with_workers.insert(with_workers.end(), {"--workers", "4"});
  const auto c = run_args(with_workers);
  // Only the echoed worker count differs.
  CHECK(a.out.substr(a.out.find('\n')) == c.out.substr(c.out.find('\n')));
  CHECK(first_line(c.out).find(" workers=4 ") != std::string::npos);

  const auto h1 = run_args({"hist", "--beta", "10", "--n", "100", "--replicates", "30", "--workers", "1"});
  const auto h3 = run_args({"hist", "--beta", "10", "--n", "100", "--replicates", "30", "--workers", "3"});
  CHECK(h1.out.substr(h1.out.find('\n')) == h3.out.substr(h3.out.find('\n')));
}

TEST_CASE("LONGMEM_WORKERS is the fallback for --workers") {
  ::setenv("LONGMEM_WORKERS", "3", 1);
  const auto r = run_args({"study", "--beta", "1", "--n", "20", "--replicates", "4"});
  const auto explicit_flag = run_args({"study", "--beta", "1", "--n", "20", "--replicates", "4", "--workers", "2"});
  ::unsetenv("LONGMEM_WORKERS");
  CHECK(first_line(r.out).find(" workers=3 ") != std::string::npos);
  CHECK(first_line(explicit_flag.out).find(" workers=2 ") != std::string::npos);
}

TEST_CASE("json format carries the same payload with a metadata envelope") {
  const auto csv = run_args({"eigen", "--beta", "2.2", "--n", "30"});
  const auto js = run_args({"eigen", "--beta", "2.2", "--n", "30", "--format", "json"});
  REQUIRE(js.code == 0);
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j["version"].is_string());
  CHECK(j["generator"] == "mt19937_64/box-muller");
  CHECK(j["parameters"]["beta"] == "2.2");
  CHECK(j["parameters"]["command"] == "eigen");
  CHECK(j["columns"] == nlohmann::json({"rank", "eigenvalue", "log10_rank", "log10_eigenvalue"}));
  const auto rows = numeric(csv.out);
  REQUIRE(j["rows"].size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(j["rows"][i][1].get<double>() == rows[i][1]);
  CHECK(j["summary"] == summary_of(csv.out));
}

TEST_CASE("output file matches standard output") {
  const auto path = std::filesystem::temp_directory_path() / "longmem_cli_test.csv";
  const auto r = run_args({"spectrum", "--beta", "2", "--n", "9", "--output", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(read_file(path) == run_args({"spectrum", "--beta", "2", "--n", "9"}).out);
  std::filesystem::remove(path);
}

TEST_CASE("dense oracle flag reaches the same spectrum") {
  const auto fast = numeric(run_args({"eigen", "--beta", "3", "--n", "60"}).out);
  const auto dense = numeric(run_args({"eigen", "--beta", "3", "--n", "60", "--dense-oracle"}).out);
  REQUIRE(fast.size() == dense.size());
  for (std::size_t i = 0; i < fast.size(); ++i) CHECK(dense[i][1] == doctest::Approx(fast[i][1]).epsilon(1e-9));
}
