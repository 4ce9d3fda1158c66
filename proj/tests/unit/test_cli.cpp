#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "posmap/cli.hpp"
#include "posmap/construction.hpp"
#include "posmap/errors.hpp"
#include "posmap/io.hpp"

using namespace posmap;
using nlohmann::json;

namespace {

// Scratch file removed on scope exit.
class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("posmap_cli_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++) + ".json");
    std::ofstream(path_) << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

std::string map_text(const DiagonalTypeMap& m) { return to_json(m).dump(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("construct output equals library serialisation") {
  std::ostringstream out;
  CHECK(cli::cmd_construct_kossakowski(3, std::nullopt, {0.7}, out) == cli::kOk);
  CHECK(out.str() == map_text(kossakowski_from_orthogonal(rotation(0.7))) + "\n");

  std::ostringstream seeded, again;
  cli::cmd_construct_kossakowski(5, 42, {}, seeded);
  cli::cmd_construct_kossakowski(5, 42, {}, again);
  CHECK(seeded.str() == again.str());
  std::mt19937_64 rng(42);
  CHECK(seeded.str() == map_text(kossakowski_from_orthogonal(random_orthogonal(4, rng))) + "\n");

  std::ostringstream frame;
  cli::cmd_construct_frame(4, frame);
  CHECK(frame.str() ==
        map_text(map_from_basis(basis_from_frame(equiangular_frame(4)))) + "\n");

  std::ostringstream circ;
  cli::cmd_construct_circulant(3, {0.0}, std::nullopt, circ);
  const auto m = map_from_json(json::parse(circ.str()));
  CHECK(m.a()(0, 0) == doctest::Approx(4.0 / 3));
  CHECK(m.a()(1, 0) == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(cli::cmd_construct_circulant(3, {0.0}, 1, circ), Error);
  CHECK_THROWS_AS(cli::cmd_construct_kossakowski(1, std::nullopt, {}, circ), DimensionError);
}

TEST_CASE("construct from b") {
  const RealMatrix b = kossakowski_from_orthogonal(rotation(1.1)).a().array() - 1.0;
  TempFile f(to_json(OrthogonalMatrix(b)).dump());
  std::ostringstream out;
  CHECK(cli::cmd_construct_from_b(f.path(), out) == cli::kOk);
  const auto m = map_from_json(json::parse(out.str()));
  CHECK((m.a() - kossakowski_from_orthogonal(rotation(1.1)).a()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("check a Kossakowski map") {
  const auto map = kossakowski_from_orthogonal(rotation(2.0));
  cli::CheckOptions opts;
  opts.samples = 2000;
  const auto rep = cli::run_check(map, opts);
  CHECK(rep.verdict.status == Status::PositiveCertified);
  CHECK(rep.closed.has_value());
  CHECK(rep.numerical.has_value());
  CHECK(rep.oracle.has_value());
  CHECK_FALSE(rep.oracle->violation);
  CHECK_FALSE(rep.cp);
  CHECK_FALSE(rep.disagreement);
  REQUIRE(rep.indecomposable.has_value());
  CHECK(*rep.indecomposable);

  const json j = cli::to_json(rep);
  CHECK(j["status"] == "PositiveCertified");
  CHECK(j["cp"] == false);
  CHECK(j["checks"].contains("oracle"));

  TempFile f(map_text(map));
  opts.json = true;
  std::ostringstream out, err;
  CHECK(cli::cmd_check(f.path(), opts, out, err) == cli::kOk);
  CHECK(json::parse(out.str())["status"] == "PositiveCertified");
}

TEST_CASE("check a non-positive map") {
  const auto map = DiagonalTypeMap::circulant(std::vector<double>{0.5, 0.5, 0.5});
  cli::CheckOptions opts;
  opts.samples = 2000;
  const auto rep = cli::run_check(map, opts);
  CHECK(rep.verdict.status == Status::NotPositive);
  REQUIRE(rep.verdict.witness.has_value());
  CHECK(rep.oracle->violation);
  CHECK_FALSE(rep.disagreement);
  CHECK_FALSE(rep.indecomposable.has_value());
}

TEST_CASE("method selection") {
  const auto map = DiagonalTypeMap::circulant(std::vector<double>{1.0, 1.0, 0.0});
  cli::CheckOptions opts;
  opts.method = cli::Method::Closed;
  auto rep = cli::run_check(map, opts);
  CHECK(rep.closed.has_value());
  CHECK_FALSE(rep.numerical.has_value());
  CHECK_FALSE(rep.oracle.has_value());
  opts.method = cli::Method::Numerical;
  rep = cli::run_check(map, opts);
  CHECK_FALSE(rep.closed.has_value());
  CHECK(rep.verdict.positive());
  CHECK(cli::parse_method("oracle") == cli::Method::Oracle);
  CHECK(cli::to_string(cli::Method::All) == "all");
  CHECK_THROWS_AS(cli::parse_method("guess"), Error);
}

TEST_CASE("spectrum of the reduction map") {
  const auto map = DiagonalTypeMap::circulant(std::vector<double>{0.0, 1.0, 1.0});
  const json s = cli::spectrum_json(map);
  CHECK(s["eigenvalues"][0][0].get<double>() == doctest::Approx(2.0));
  CHECK(s["eigenvalues"][1][0].get<double>() == doctest::Approx(-1.0));
  CHECK(std::abs(s["eigenvalues"][1][1].get<double>()) < 1e-15);
  CHECK(s["eigenvalues"][2][0].get<double>() == doctest::Approx(-1.0));
  CHECK(s["on_torus"] == true);
  CHECK(s["phases"][0].get<double>() == doctest::Approx(std::numbers::pi));
  CHECK(s["determinant_modulus"].get<double>() == doctest::Approx(2.0));

  const json off = cli::spectrum_json(DiagonalTypeMap::circulant(std::vector<double>{1.0, 1.0, 1.0}));
  CHECK(off["on_torus"] == false);
  CHECK(off["torus_violation"]["index"] == 0);

  RealMatrix a = RealMatrix::Ones(3, 3);
  a(0, 1) = 2;
  CHECK_THROWS_AS(cli::spectrum_json(DiagonalTypeMap(a)), ConstraintViolation);
}

TEST_CASE("scan on a coarse grid") {
  cli::ScanConfig cfg;
  cfg.grid = 4;
  const auto res = cli::scan_n3(cfg);
  REQUIRE(res.rows.size() == 64);
  CHECK(res.disagreements == 0);

  const auto& decomposable = res.rows[32];  // (2, 0, 0)
  CHECK(decomposable.a == 2.0);
  CHECK(decomposable.b == 0.0);
  CHECK(decomposable.closed->positive());
  CHECK(decomposable.numerical->positive());
  CHECK(decomposable.cp);
  CHECK(decomposable.indecomposable == false);

  const auto& choi_like = res.rows[20];  // (1, 1, 0)
  CHECK(choi_like.a == 1.0);
  CHECK(choi_like.b == 1.0);
  CHECK(choi_like.c == 0.0);
  CHECK(choi_like.closed->positive());
  CHECK_FALSE(choi_like.cp);
  CHECK(choi_like.indecomposable == true);

  CHECK(res.rows[0].closed->status == Status::NotPositive);
  CHECK_FALSE(res.rows[0].indecomposable.has_value());

  std::ostringstream csv1, csv2, err;
  CHECK(cli::cmd_scan(cfg, csv1, err) == cli::kOk);
  cli::cmd_scan(cfg, csv2, err);
  CHECK(csv1.str() == csv2.str());
  std::istringstream lines(csv1.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "a,b,c,closed_verdict,numerical_verdict,closed_margin,numerical_margin,"
        "indecomposable,cp,disagreement");
  int count = 0;
  for (std::string row; std::getline(lines, row);) ++count;
  CHECK(count == 64);

  cfg.n = 4;
  CHECK_THROWS_AS(cli::scan_n3(cfg), Error);
}

TEST_CASE("torus-sample CSV") {
  OptimizerConfig opt;
  opt.restarts = 20;
  std::ostringstream csv;
  CHECK(cli::cmd_torus_sample(4, 5, 3, opt, csv) == cli::kOk);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "phi_1,sign,alpha_0,alpha_1,alpha_2,alpha_3,verdict,margin");
  int count = 0;
  for (std::string row; std::getline(lines, row); ++count) {
    CHECK(row.find("PositiveNumerical") != std::string::npos);
    CHECK(std::count(row.begin(), row.end(), ',') == 7);
  }
  CHECK(count == 5);

  std::ostringstream odd;
  cli::cmd_torus_sample(3, 1, 3, opt, odd);
  CHECK(odd.str().rfind("phi_1,sign,alpha_0,alpha_1,alpha_2,verdict,margin\n", 0) == 0);
}

TEST_CASE("errors map onto exit codes") {
  cli::CheckOptions opts;
  std::ostringstream out, err;
  CHECK(cli::cmd_check("/nonexistent/posmap.json", opts, out, err) == cli::kUsageOrIo);

  TempFile broken("{\"n\": 3, \"a\": [");
  std::ostringstream err2;
  CHECK(cli::cmd_check(broken.path(), opts, out, err2) == cli::kUsageOrIo);
  CHECK(err2.str().find("byte") != std::string::npos);

  TempFile negative("{\"n\": 2, \"a\": [[1, -1], [0, 1]]}");
  opts.json = true;
  std::ostringstream neg_out;
  CHECK(cli::cmd_check(negative.path(), opts, neg_out, err) == cli::kOk);
  const json neg = json::parse(neg_out.str());
  CHECK(neg["status"] == "NotPositive");
  CHECK(neg["offending_entry"] == json::array({0, 1}));

  const RealMatrix skew = kossakowski_from_orthogonal(rotation(0.4)).a().array() * 1.1 - 1.0;
  TempFile not_orthogonal(to_json(OrthogonalMatrix(kossakowski_from_orthogonal(rotation(0.4)).a().array() - 1.0)).dump());
  std::string text = not_orthogonal.path();
  {
    json j = json::parse(std::ifstream(text));
    j["m"][0][0] = skew(0, 0);
    std::ofstream(text) << j.dump();
  }
  std::ostringstream sink;
  CHECK(cli::guarded(err, [&] { return cli::cmd_construct_from_b(text, sink); }) ==
        cli::kConstraintViolation);

  TempFile wrong_shape("{\"n\": 3, \"a\": [[1, 0], [0, 1]]}");
  CHECK(cli::cmd_check(wrong_shape.path(), opts, out, err) == cli::kUsageOrIo);

  CHECK(cli::guarded(err, [] () -> int { throw DimensionError("x"); }) ==
        cli::kConstraintViolation);
  CHECK(cli::guarded(err, [] { return 7; }) == 7);
}

}
