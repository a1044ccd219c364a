#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace homodyne::cli {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> provenance;  // written as '#' lines
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool violation = false;  // witness domination failure

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& col) const;
};

enum class Format { Csv, Pretty };

std::string render(const Table& t, Format f);

struct RunOptions {
  int threads = 0;
  std::uint64_t seed = 0;
};

// Each takes the parsed config document.
Table cmd_bound(const nlohmann::json& cfg, const RunOptions& opts = {});
Table cmd_gkp_plan(const nlohmann::json& cfg, const RunOptions& opts = {});
Table cmd_gkp_fidelity(const nlohmann::json& cfg, const RunOptions& opts = {});
Table cmd_witness(const nlohmann::json& cfg, const RunOptions& opts = {});

// Parse JSON text; syntax errors become ConfigError with a line number.
nlohmann::json parse_config(const std::string& text);

std::uint64_t config_hash(const nlohmann::json& cfg);

// Expand a grid spec: number, list, {"linspace":[a,b,n]} or {"logspace":[a,b,n]}.
std::vector<double> expand_axis(const nlohmann::json& spec, const std::string& where);

// Full CLI; returns the process exit code.
int run(int argc, char** argv);

}  // namespace homodyne::cli
