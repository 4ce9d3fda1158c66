#include "posmap/cli.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "posmap/circulant_spectrum.hpp"
#include "posmap/construction.hpp"
#include "posmap/errors.hpp"
#include "posmap/io.hpp"

namespace posmap::cli {

using nlohmann::json;

Method parse_method(const std::string& name) {
  if (name == "closed") return Method::Closed;
  if (name == "numerical") return Method::Numerical;
  if (name == "oracle") return Method::Oracle;
  if (name == "all") return Method::All;
  throw Error("unknown method '" + name + "'");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Closed: return "closed";
    case Method::Numerical: return "numerical";
    case Method::Oracle: return "oracle";
    case Method::All: return "all";
  }
  return "all";
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::optional<bool> indecomposable_flag(const DiagonalTypeMap& map,
                                        const PositivityVerdict& verdict) {
  if (map.n() != 3 || !verdict.positive()) return std::nullopt;
  auto alphas = map.circulant_params();
  if (!alphas) return std::nullopt;
  const auto& al = *alphas;
  if (!closed_form_n3_circulant(al[0], al[1], al[2]).positive())
    return std::nullopt;
  return check_indecomposable_n3(al[0], al[1], al[2]);
}

PositivityVerdict oracle_verdict(const OracleResult& r) {
  PositivityVerdict v;
  v.method = "oracle";
  v.margin = r.min_value;
  if (r.violation) {
    v.status = Status::NotPositive;
    std::vector<double> p(r.x.size());
    for (Eigen::Index i = 0; i < r.x.size(); ++i) p[i] = std::norm(r.x(i));
    v.witness = std::move(p);
  } else {
    v.status = Status::PositiveNumerical;
  }
  return v;
}

json complex_vector_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back({v(i).real(), v(i).imag()});
  return out;
}

}  // namespace

// Errors thrown by library code map onto exit codes here.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrIo;
  } catch (const ConstraintViolation& e) {
    err << "constraint violation: " << e.what() << "\n";
    return kConstraintViolation;
  } catch (const DimensionError& e) {
    err << "constraint violation: " << e.what() << "\n";
    return kConstraintViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrIo;
  }
}

CheckReport run_check(const DiagonalTypeMap& map, const CheckOptions& opts) {
  CheckReport rep;
  OptimizerConfig cfg;
  cfg.seed = opts.seed;
  const bool want_closed = opts.method == Method::Closed || opts.method == Method::All;
  const bool want_numerical =
      opts.method == Method::Numerical || opts.method == Method::All;
  const bool want_oracle = opts.method == Method::Oracle || opts.method == Method::All;

  if (want_closed) rep.closed = check_positive_closed(map);
  if (want_numerical) rep.numerical = check_positive_numerical(map, cfg);
  if (want_oracle) rep.oracle = oracle_positivity(map, opts.samples, opts.seed);
  rep.cp = check_cp(map);

  if (rep.closed) {
    rep.verdict = *rep.closed;
  } else if (rep.numerical) {
    rep.verdict = *rep.numerical;
  } else if (rep.oracle) {
    rep.verdict = oracle_verdict(*rep.oracle);
  } else {
    rep.verdict.status = Status::Inconclusive;
    rep.verdict.method = "closed:not-applicable";
  }

  std::ostringstream diag;
  if (rep.closed && rep.numerical &&
      rep.numerical->status != Status::Inconclusive &&
      std::abs(rep.closed->margin) > kMarginBand &&
      rep.closed->positive() != rep.numerical->positive()) {
    rep.disagreement = true;
    diag << "closed form says " << posmap::to_string(rep.closed->status)
         << " (margin " << rep.closed->margin << ") but optimizer says "
         << posmap::to_string(rep.numerical->status) << " (margin "
         << rep.numerical->margin << "); ";
  }
  if (rep.oracle && rep.oracle->violation && rep.verdict.positive()) {
    rep.disagreement = true;
    diag << "oracle found <x|L(yy*)|x> = " << rep.oracle->min_value
         << " for a map judged positive; ";
  }
  rep.diagnostic = diag.str();

  if (rep.verdict.status == Status::NotPositive && !rep.verdict.witness &&
      rep.numerical && rep.numerical->witness)
    rep.verdict.witness = rep.numerical->witness;
  rep.indecomposable = indecomposable_flag(map, rep.verdict);
  return rep;
}

json to_json(const CheckReport& rep) {
  json out = posmap::to_json(rep.verdict);
  out["cp"] = rep.cp;
  if (rep.indecomposable) out["indecomposable"] = *rep.indecomposable;
  json checks = json::object();
  if (rep.closed) checks["closed"] = posmap::to_json(*rep.closed);
  if (rep.numerical) checks["numerical"] = posmap::to_json(*rep.numerical);
  if (rep.oracle) {
    checks["oracle"] = {{"violation", rep.oracle->violation},
                        {"min_value", rep.oracle->min_value},
                        {"evaluations", rep.oracle->evaluations},
                        {"x", complex_vector_json(rep.oracle->x)},
                        {"y", complex_vector_json(rep.oracle->y)}};
  }
  out["checks"] = std::move(checks);
  out["disagreement"] = rep.disagreement;
  return out;
}

int cmd_check(const std::string& path, const CheckOptions& opts,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DiagonalTypeMap map = map_from_json(read_json_file(path));
    const CheckReport rep = run_check(map, opts);
    if (opts.json) {
      out << to_json(rep).dump() << "\n";
    } else {
      out << "n = " << map.n() << "\n"
          << "status: " << posmap::to_string(rep.verdict.status) << " ("
          << rep.verdict.method << ", margin " << rep.verdict.margin << ")\n";
      if (rep.closed)
        out << "  closed:    " << posmap::to_string(rep.closed->status)
            << " margin " << rep.closed->margin << "\n";
      if (rep.numerical)
        out << "  numerical: " << posmap::to_string(rep.numerical->status)
            << " margin " << rep.numerical->margin << "\n";
      if (rep.oracle)
        out << "  oracle:    " << (rep.oracle->violation ? "violation" : "no violation")
            << ", min <x|L(yy*)|x> = " << rep.oracle->min_value << " over "
            << rep.oracle->evaluations << " pairs\n";
      if (rep.verdict.witness) {
        out << "  witness p:";
        for (double p : *rep.verdict.witness) out << " " << p;
        out << "\n";
      }
      out << "completely positive: " << (rep.cp ? "yes" : "no") << "\n";
      if (rep.indecomposable)
        out << "indecomposable: " << (*rep.indecomposable ? "yes" : "no") << "\n";
    }
    if (rep.disagreement) {
      err << "disagreement: " << rep.diagnostic << "\n";
      return static_cast<int>(kDisagreement);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_construct_kossakowski(int n, std::optional<std::uint64_t> seed,
                              const std::vector<double>& rotation,
                              std::ostream& out) {
  if (n < 2 || n > kMaxDim) throw DimensionError("--n must lie in [2, 64]");
  std::optional<OrthogonalMatrix> r;
  if (!rotation.empty()) {
    r = block_rotation(n - 1, rotation);
  } else {
    std::mt19937_64 rng(seed.value_or(0));
    r = random_orthogonal(n - 1, rng);
  }
  out << to_json(kossakowski_from_orthogonal(*r)).dump() << "\n";
  return kOk;
}

int cmd_construct_frame(int n, std::ostream& out) {
  out << to_json(map_from_basis(basis_from_frame(equiangular_frame(n)))).dump()
      << "\n";
  return kOk;
}

int cmd_construct_from_b(const std::string& path, std::ostream& out) {
  const OrthogonalMatrix b = orthogonal_from_json(read_json_file(path));
  out << to_json(a_from_b(b)).dump() << "\n";
  return kOk;
}

int cmd_construct_circulant(int n, const std::vector<double>& phases,
                            std::optional<int> sign, std::ostream& out) {
  PhasePoint pt;
  pt.n = n;
  pt.phases = phases;
  if (n % 2 == 0) pt.even_sign = sign.value_or(1);
  else if (sign) throw Error("--sign applies to even n only");
  out << to_json(alphas_from_phases(pt).to_map()).dump() << "\n";
  return kOk;
}

json spectrum_json(const DiagonalTypeMap& map) {
  const auto params = CirculantParams::from_map(map);
  if (!params) throw ConstraintViolation("spectrum: map is not circulant", 0.0);
  json out;
  out["n"] = params->n();
  out["alphas"] = params->alphas();
  json eig = json::array();
  for (const auto& l : dft_eigenvalues(*params)) eig.push_back({l.real(), l.imag()});
  out["eigenvalues"] = std::move(eig);
  try {
    const PhasePoint pt = phases_from_alphas(*params);
    out["on_torus"] = true;
    out["phases"] = pt.phases;
    if (pt.even_sign) out["sign"] = *pt.even_sign;
    out["determinant_modulus"] = determinant_modulus(*params);
  } catch (const NotOnTorus& e) {
    out["on_torus"] = false;
    out["torus_violation"] = {{"index", e.index()}, {"modulus", e.modulus()}};
  }
  return out;
}

int cmd_spectrum(const std::string& path, bool as_json, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const json s = spectrum_json(map_from_json(read_json_file(path)));
    if (as_json) {
      out << s.dump() << "\n";
      return static_cast<int>(kOk);
    }
    out << "eigenvalues:";
    for (const auto& l : s["eigenvalues"])
      out << " (" << l[0].get<double>() << ", " << l[1].get<double>() << ")";
    out << "\n";
    if (s["on_torus"].get<bool>()) {
      out << "phases:";
      for (const auto& p : s["phases"]) out << " " << p.get<double>();
      out << "\n";
      if (s.contains("sign")) out << "sign: " << s["sign"].get<int>() << "\n";
      out << "|det a| = " << s["determinant_modulus"].get<double>() << "\n";
    } else {
      out << "not on the torus: |lambda_" << s["torus_violation"]["index"].get<int>()
          << "| = " << s["torus_violation"]["modulus"].get<double>() << "\n";
    }
    return static_cast<int>(kOk);
  });
}

int cmd_torus_sample(int n, int count, std::uint64_t seed,
                     const OptimizerConfig& cfg, std::ostream& csv) {
  const int m = torus_dimension(n);
  for (int k = 1; k <= m; ++k) csv << "phi_" << k << ",";
  csv << "sign";
  for (int k = 0; k < n; ++k) csv << ",alpha_" << k;
  csv << ",verdict,margin\n";
  for (const auto& pt : torus_sample_points(n, count, seed)) {
    const CirculantParams params = alphas_from_phases(pt);
    const PositivityVerdict v = check_positive_numerical(params.to_map(), cfg);
    for (double phi : pt.phases) csv << num(phi) << ",";
    if (pt.even_sign) csv << *pt.even_sign;
    for (double a : params.alphas()) csv << "," << num(a);
    csv << "," << posmap::to_string(v.status) << "," << num(v.margin) << "\n";
  }
  return kOk;
}

ScanResult scan_n3(const ScanConfig& cfg) {
  if (cfg.n != 3) throw Error("scan: only n = 3 is supported");
  if (cfg.grid < 2) throw Error("scan: grid must have >= 2 points per axis");
  if (!(cfg.a_max > 0.0)) throw Error("scan: a_max must be positive");
  OptimizerConfig opt;
  opt.seed = cfg.seed;
  const int g = cfg.grid;
  auto coord = [&](int i) { return cfg.a_max * i / (g - 1); };
  ScanResult res;
  res.rows.reserve(static_cast<std::size_t>(g) * g * g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      for (int k = 0; k < g; ++k) {
        ScanRow row;
        row.a = coord(i);
        row.b = coord(j);
        row.c = coord(k);
        const std::vector<double> alphas{row.a, row.b, row.c};
        const DiagonalTypeMap map = DiagonalTypeMap::circulant(alphas);
        row.closed = closed_form_n3_circulant(row.a, row.b, row.c);
        if (cfg.mode == Method::Numerical || cfg.mode == Method::All)
          row.numerical = check_positive_numerical(map, opt);
        if (cfg.mode == Method::Oracle)
          row.oracle = oracle_positivity(map, cfg.samples, cfg.seed);
        row.cp = check_cp(map);
        if (row.closed->positive())
          row.indecomposable = check_indecomposable_n3(row.a, row.b, row.c);
        if (std::abs(row.closed->margin) > kMarginBand) {
          if (row.numerical && row.numerical->status != Status::Inconclusive &&
              row.numerical->positive() != row.closed->positive())
            row.disagreement = true;
          if (row.oracle && row.oracle->violation && row.closed->positive())
            row.disagreement = true;
        }
        if (row.disagreement) ++res.disagreements;
        res.rows.push_back(std::move(row));
      }
  return res;
}

void write_scan_csv(const ScanResult& result, std::ostream& csv) {
  csv << "a,b,c,closed_verdict,numerical_verdict,closed_margin,"
         "numerical_margin,indecomposable,cp,disagreement\n";
  for (const auto& r : result.rows) {
    csv << num(r.a) << "," << num(r.b) << "," << num(r.c) << ","
        << posmap::to_string(r.closed->status) << ",";
    if (r.numerical) csv << posmap::to_string(r.numerical->status);
    else if (r.oracle) csv << posmap::to_string(oracle_verdict(*r.oracle).status);
    csv << "," << num(r.closed->margin) << ",";
    if (r.numerical) csv << num(r.numerical->margin);
    else if (r.oracle) csv << num(r.oracle->min_value);
    csv << "," << (r.indecomposable ? (*r.indecomposable ? "1" : "0") : "")
        << "," << (r.cp ? 1 : 0) << "," << (r.disagreement ? 1 : 0) << "\n";
  }
}

int cmd_scan(const ScanConfig& cfg, std::ostream& csv, std::ostream& err) {
  const ScanResult res = scan_n3(cfg);
  write_scan_csv(res, csv);
  if (res.disagreements > 0) {
    err << "scan: " << res.disagreements
        << " closed/numerical disagreements outside the margin band\n";
    return kDisagreement;
  }
  return kOk;
}

}  // namespace posmap::cli
