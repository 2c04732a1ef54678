#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace longmem::cli {

enum class Command { generate, spectrum, eigen, hist, study };
enum class Format { csv, json };

inline constexpr const char* kStdout = "-";

struct RunConfig {
  Command command = Command::generate;
  double beta = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 5;
  std::size_t replicates = 500;
  std::size_t bins = 100;
  Format format = Format::csv;
  std::string output_path = kStdout;
  std::size_t workers = 1;
  bool dense_oracle = false;
};

const char* command_name(Command c);

using Cell = std::variant<double, long long, std::string>;

/// Everything one command emits: parameter echo, column table and an
/// optional summary object.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json summary;  // null when the command has none
};

Table build_table(const RunConfig& cfg);

/// CSV: "# longmem k=v ..." line, optional "# summary {json}" line, header,
/// rows. Doubles use 17 significant digits.
std::string render_csv(const Table& t);
std::string render_json(const Table& t);

/// Numeric body of a CSV written by render_csv. Comment lines and the
/// header are skipped; non-numeric cells are an error.
std::vector<std::vector<double>> read_numeric_csv(std::istream& in);

/// Full command-line entry point. Returns the process exit code:
/// 0 success, 2 usage error, 1 runtime error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace longmem::cli
