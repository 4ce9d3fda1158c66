#pragma once

// Library side of the `posmap` command-line tool. Each command writes its
// machine output to `out` and returns a process exit code.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "posmap/map_core.hpp"
#include "posmap/positivity.hpp"

namespace posmap::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageOrIo = 1,
  kConstraintViolation = 2,
  kDisagreement = 3,
};

// Closed-form and numerical verdicts are compared only where the closed-form
// margin exceeds this band.
inline constexpr double kMarginBand = 1e-4;

/// Runs `body`, mapping library exceptions onto exit codes (message to err).
int guarded(std::ostream& err, const std::function<int()>& body);

enum class Method { Closed, Numerical, Oracle, All };

Method parse_method(const std::string& name);
std::string to_string(Method m);

struct CheckOptions {
  Method method = Method::All;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  bool json = false;
};

struct CheckReport {
  PositivityVerdict verdict;
  std::optional<PositivityVerdict> closed;
  std::optional<PositivityVerdict> numerical;
  std::optional<OracleResult> oracle;
  bool cp = false;
  std::optional<bool> indecomposable;  // n = 3 circulant, positive only
  bool disagreement = false;
  std::string diagnostic;
};

CheckReport run_check(const DiagonalTypeMap& map, const CheckOptions& opts);
nlohmann::json to_json(const CheckReport& report);

int cmd_check(const std::string& path, const CheckOptions& opts,
              std::ostream& out, std::ostream& err);

int cmd_construct_kossakowski(int n, std::optional<std::uint64_t> seed,
                              const std::vector<double>& rotation,
                              std::ostream& out);
int cmd_construct_frame(int n, std::ostream& out);
int cmd_construct_from_b(const std::string& path, std::ostream& out);
int cmd_construct_circulant(int n, const std::vector<double>& phases,
                            std::optional<int> sign, std::ostream& out);

nlohmann::json spectrum_json(const DiagonalTypeMap& map);
int cmd_spectrum(const std::string& path, bool json, std::ostream& out,
                 std::ostream& err);

int cmd_torus_sample(int n, int count, std::uint64_t seed,
                     const OptimizerConfig& cfg, std::ostream& csv);

struct ScanConfig {
  int n = 3;
  int grid = 40;          // points per axis, >= 2
  double a_max = 3.0;
  Method mode = Method::All;  // All = closed + numerical
  std::size_t samples = 1000;  // oracle samples per point (Oracle mode)
  std::uint64_t seed = 0;
};

struct ScanRow {
  double a = 0, b = 0, c = 0;
  std::optional<PositivityVerdict> closed;
  std::optional<PositivityVerdict> numerical;
  std::optional<OracleResult> oracle;
  bool cp = false;
  std::optional<bool> indecomposable;
  bool disagreement = false;
};

struct ScanResult {
  std::vector<ScanRow> rows;  // grid order: a slowest, c fastest
  std::size_t disagreements = 0;
};

ScanResult scan_n3(const ScanConfig& cfg);
void write_scan_csv(const ScanResult& result, std::ostream& csv);
int cmd_scan(const ScanConfig& cfg, std::ostream& csv, std::ostream& err);

}  // namespace posmap::cli
