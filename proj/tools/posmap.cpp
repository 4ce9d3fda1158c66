// posmap: construct and certify diagonal-type positive maps.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "posmap/cli.hpp"

namespace {

using namespace posmap::cli;

// Writes to `path` if given, otherwise stdout.
int with_output(const std::string& path, const std::function<int(std::ostream&)>& f) {
  if (path.empty()) return f(std::cout);
  std::ofstream file(path);
  if (!file) {
    std::cerr << "error: cannot write " << path << "\n";
    return kUsageOrIo;
  }
  return f(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct and certify diagonal-type positive maps on M_n(C)"};
  app.require_subcommand(1);

  // construct
  auto* construct = app.add_subcommand("construct", "Build a map (emits map JSON)");
  construct->require_subcommand(1);
  std::string out_path;
  construct->add_option("--out", out_path, "Output file (default stdout)");

  int k_n = 0;
  std::optional<std::uint64_t> k_seed;
  std::vector<double> k_rotation;
  auto* kossak = construct->add_subcommand("kossakowski", "Kossakowski map from R in O(n-1)");
  kossak->add_option("--n", k_n, "Dimension n")->required();
  auto* seed_opt = kossak->add_option("--seed", k_seed, "Seed for a Haar-random R");
  kossak->add_option("--rotation", k_rotation, "Block rotation angles phi,...")
      ->delimiter(',')
      ->excludes(seed_opt);

  int f_n = 0;
  auto* frame = construct->add_subcommand("frame", "Map from the canonical equiangular frame");
  frame->add_option("--n", f_n, "Dimension n")->required();

  std::string b_path;
  auto* from_b = construct->add_subcommand("from-b", "Map a = b + J from an orthogonal-matrix JSON");
  from_b->add_option("file", b_path, "Orthogonal JSON {\"dim\", \"m\"}")->required();

  int c_n = 0;
  std::vector<double> c_phases;
  std::optional<int> c_sign;
  auto* circ = construct->add_subcommand("circulant", "Circulant Kossakowski map from torus phases");
  circ->add_option("--n", c_n, "Dimension n")->required();
  circ->add_option("--phases", c_phases, "Phases phi_1,...,phi_m")->delimiter(',');
  circ->add_option("--sign", c_sign, "lambda_{n/2} = +1 or -1 (even n)");

  for (auto* sub : {kossak, frame, from_b, circ}) sub->fallthrough();

  // check
  std::string check_path;
  std::string check_method = "all";
  CheckOptions check_opts;
  auto* check = app.add_subcommand("check", "Certify positivity / complete positivity");
  check->add_option("map", check_path, "Map JSON file")->required();
  check->add_option("--method", check_method, "closed|numerical|oracle|all")
      ->check(CLI::IsMember({"closed", "numerical", "oracle", "all"}));
  check->add_option("--samples", check_opts.samples, "Oracle random samples");
  check->add_option("--seed", check_opts.seed, "Seed");
  check->add_flag("--json", check_opts.json, "Emit JSON verdict");

  // spectrum
  std::string spec_path;
  bool spec_json = false;
  auto* spectrum = app.add_subcommand("spectrum", "DFT spectrum and torus phases of a circulant map");
  spectrum->add_option("map", spec_path, "Map JSON file")->required();
  spectrum->add_flag("--json", spec_json, "Emit JSON");

  // torus-sample
  int t_n = 0, t_count = 0;
  std::uint64_t t_seed = 0;
  std::string t_out;
  auto* torus = app.add_subcommand("torus-sample", "Sample circulant Kossakowski maps (CSV)");
  torus->add_option("--n", t_n, "Dimension n")->required();
  torus->add_option("--count", t_count, "Number of samples")->required()->check(CLI::PositiveNumber);
  torus->add_option("--seed", t_seed, "Seed");
  torus->add_option("--out", t_out, "CSV output file (default stdout)");

  // scan
  ScanConfig scan_cfg;
  std::string scan_mode = "all";
  std::string scan_out;
  auto* scan = app.add_subcommand("scan", "Phase diagram of n = 3 circulant maps over a grid (CSV)");
  scan->add_option("--n", scan_cfg.n, "Dimension (3)");
  scan->add_option("--grid", scan_cfg.grid, "Points per axis")->check(CLI::Range(2, 1000));
  scan->add_option("--amax", scan_cfg.a_max, "Upper end of each axis")->check(CLI::PositiveNumber);
  scan->add_option("--mode", scan_mode, "closed|numerical|oracle|all")
      ->check(CLI::IsMember({"closed", "numerical", "oracle", "all"}));
  scan->add_option("--samples", scan_cfg.samples, "Oracle samples per point");
  scan->add_option("--seed", scan_cfg.seed, "Seed");
  scan->add_option("--out", scan_out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageOrIo;
  }

  return guarded(std::cerr, [&]() -> int {
    if (*construct) {
      return with_output(out_path, [&](std::ostream& os) -> int {
        if (*kossak) return cmd_construct_kossakowski(k_n, k_seed, k_rotation, os);
        if (*frame) return cmd_construct_frame(f_n, os);
        if (*from_b) return cmd_construct_from_b(b_path, os);
        return cmd_construct_circulant(c_n, c_phases, c_sign, os);
      });
    }
    if (*check) {
      check_opts.method = parse_method(check_method);
      return cmd_check(check_path, check_opts, std::cout, std::cerr);
    }
    if (*spectrum) return cmd_spectrum(spec_path, spec_json, std::cout, std::cerr);
    if (*torus) {
      return with_output(t_out, [&](std::ostream& os) {
        return cmd_torus_sample(t_n, t_count, t_seed, {}, os);
      });
    }
    scan_cfg.mode = parse_method(scan_mode);
    return with_output(scan_out, [&](std::ostream& os) {
      return cmd_scan(scan_cfg, os, std::cerr);
    });
  });
}
