#include "posmap/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "posmap/errors.hpp"

namespace posmap {

SimplexPoint::SimplexPoint(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw DimensionError("SimplexPoint: empty");
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw Error("SimplexPoint: negative or NaN component");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "SimplexPoint: components sum to " << sum;
    throw Error(os.str());
  }
}

SimplexPoint SimplexPoint::normalized(std::span<const double> weights) {
  std::vector<double> p(weights.begin(), weights.end());
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw Error("SimplexPoint: negative or NaN weight");
    sum += v;
  }
  if (!(sum > 0.0)) throw Error("SimplexPoint: weights sum to zero");
  for (double& v : p) v /= sum;
  return SimplexPoint(std::move(p));
}

std::string to_string(Status s) {
  switch (s) {
    case Status::PositiveCertified: return "PositiveCertified";
    case Status::PositiveNumerical: return "PositiveNumerical";
    case Status::NotPositive: return "NotPositive";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

std::optional<std::pair<int, int>> first_negative(const RealMatrix& a) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) < 0.0) return std::make_pair(i, j);
  return std::nullopt;
}

void require_nonnegative(const DiagonalTypeMap& map) {
  if (auto bad = first_negative(map.a())) {
    std::ostringstream os;
    os << "coefficient a_" << bad->first << bad->second << " = "
       << map(bad->first, bad->second) << " is negative";
    throw ConstraintViolation(os.str(), -map(bad->first, bad->second));
  }
}

// Objective and gradient on raw buffers; no validation.
class Objective {
 public:
  explicit Objective(const RealMatrix& a)
      : a_(a), n_(static_cast<int>(a.rows())), b_(n_), w_(n_) {}

  int n() const { return n_; }

  double value(const double* p) {
    double f = 0.0;
    for (int i = 0; i < n_; ++i) {
      if (p[i] == 0.0) continue;
      double bi = p[i];
      for (int j = 0; j < n_; ++j) bi += a_(i, j) * p[j];
      f += p[i] / bi;
    }
    return f;
  }

  // Fills g with d/dp of sum_i p_i / B_i. Components whose 1/B_k diverges
  // are capped so the projected step stays finite.
  void gradient(const double* p, double* g) {
    for (int i = 0; i < n_; ++i) {
      double bi = p[i];
      for (int j = 0; j < n_; ++j) bi += a_(i, j) * p[j];
      b_[i] = bi;
      w_[i] = p[i] == 0.0 ? 0.0 : p[i] / (bi * bi);
    }
    for (int k = 0; k < n_; ++k) {
      double gk = b_[k] > kFloor ? 1.0 / b_[k] : 1.0 / kFloor;
      gk -= w_[k];
      for (int i = 0; i < n_; ++i) gk -= a_(i, k) * w_[i];
      g[k] = gk;
    }
  }

 private:
  static constexpr double kFloor = 1e-12;
  const RealMatrix& a_;
  int n_;
  std::vector<double> b_;
  std::vector<double> w_;
};

// Euclidean projection onto the probability simplex (sort-based).
void project_simplex(std::vector<double>& v, std::vector<double>& scratch) {
  scratch = v;
  std::sort(scratch.begin(), scratch.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < scratch.size(); ++k) {
    cum += scratch[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (scratch[k] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(x - theta, 0.0);
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= s;
}

std::vector<std::vector<double>> start_points(int n, int count,
                                              std::uint64_t seed) {
  std::vector<std::vector<double>> starts;
  starts.reserve(count);
  auto push = [&](std::vector<double> p) {
    if (static_cast<int>(starts.size()) < count) starts.push_back(std::move(p));
  };
  push(std::vector<double>(n, 1.0 / n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> p(n, 0.0);
    p[i] = 1.0;
    push(std::move(p));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<double> p(n, 0.0);
      p[i] = p[j] = 0.5;
      push(std::move(p));
    }
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  while (static_cast<int>(starts.size()) < count) {
    std::vector<double> p(n);
    double s = 0.0;
    for (double& x : p) s += (x = expo(rng));
    for (double& x : p) x /= s;
    starts.push_back(std::move(p));
  }
  return starts;
}

struct AscentResult {
  double value;
  bool converged;
};

// Projected-gradient ascent with Armijo backtracking. Stops early once the
// objective exceeds `stop_above`.
AscentResult ascend(Objective& obj, std::vector<double>& p, int iterations,
                    double stop_above) {
  const int n = obj.n();
  std::vector<double> g(n), trial(n), scratch(n);
  double f = obj.value(p.data());
  if (f > stop_above) return {f, true};
  double step = 1.0;
  int stalls = 0;
  for (int it = 0; it < iterations; ++it) {
    obj.gradient(p.data(), g.data());
    bool accepted = false;
    double f_new = f;
    double moved = 0.0;
    for (int ls = 0; ls < 60; ++ls) {
      for (int k = 0; k < n; ++k) trial[k] = p[k] + step * g[k];
      project_simplex(trial, scratch);
      double dir = 0.0;
      moved = 0.0;
      for (int k = 0; k < n; ++k) {
        const double d = trial[k] - p[k];
        dir += g[k] * d;
        moved = std::max(moved, std::abs(d));
      }
      if (moved == 0.0) break;
      f_new = obj.value(trial.data());
      if (f_new >= f + 0.4 * dir && f_new >= f) {
        accepted = true;
        break;
      }
      step *= 0.5;
      if (step < 1e-18) break;
    }
    if (!accepted) return {f, true};
    const double gain = f_new - f;
    p.swap(trial);
    f = f_new;
    if (f > stop_above) return {f, true};
    stalls = (gain <= 1e-15 * std::max(1.0, std::abs(f)) || moved < 1e-13)
                 ? stalls + 1
                 : 0;
    if (stalls >= 3) return {f, true};
    step = std::min(step * 2.0, 1e8);
  }
  return {f, false};
}

double uniform_lhs(const DiagonalTypeMap& map) {
  const int n = map.n();
  return in_lhs(map, SimplexPoint(std::vector<double>(n, 1.0 / n)));
}

PositivityVerdict negative_entry_verdict(const RealMatrix& a,
                                         std::pair<int, int> bad,
                                         std::string method) {
  PositivityVerdict v;
  v.status = Status::NotPositive;
  v.margin = a(bad.first, bad.second);
  v.offending_entry = bad;
  v.method = std::move(method);
  return v;
}

}  // namespace

double in_lhs(const DiagonalTypeMap& map, const SimplexPoint& p) {
  if (p.size() != map.n())
    throw DimensionError("in_lhs: simplex point has wrong dimension");
  require_nonnegative(map);
  Objective obj(map.a());
  return obj.value(p.values().data());
}

std::vector<double> in_lhs_gradient(const DiagonalTypeMap& map,
                                    std::span<const double> p) {
  if (static_cast<int>(p.size()) != map.n())
    throw DimensionError("in_lhs_gradient: wrong dimension");
  Objective obj(map.a());
  std::vector<double> g(p.size());
  obj.gradient(p.data(), g.data());
  return g;
}

double check_circulant_inequality(std::span<const double> alphas,
                                  const SimplexPoint& p) {
  const int n = static_cast<int>(alphas.size());
  if (p.size() != n)
    throw DimensionError("check_circulant_inequality: wrong dimension");
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (p[i] == 0.0) continue;
    double denom = (alphas[0] + 1.0) * p[i];
    for (int k = 1; k < n; ++k) denom += alphas[k] * p[((i - k) % n + n) % n];
    sum += p[i] / denom;
  }
  return sum;
}

PositivityVerdict check_positive_numerical(const DiagonalTypeMap& map,
                                           const OptimizerConfig& cfg) {
  if (auto bad = first_negative(map.a()))
    return negative_entry_verdict(map.a(), *bad, "numerical");

  const int n = map.n();
  const double threshold = 1.0 + cfg.violation_tol;
  Objective obj(map.a());
  auto starts = start_points(n, std::max(cfg.restarts, 1), cfg.seed);

  // Cheap pass over the start points first.
  for (auto& s : starts) {
    const double f = obj.value(s.data());
    if (f > threshold) {
      return {Status::NotPositive, 1.0 - f, s, std::nullopt, "numerical"};
    }
  }

  double best = -std::numeric_limits<double>::infinity();
  bool best_converged = true;
  std::vector<double> best_point;
  for (auto& s : starts) {
    const AscentResult r = ascend(obj, s, cfg.iterations, threshold);
    if (r.value > threshold) {
      return {Status::NotPositive, 1.0 - r.value, s, std::nullopt, "numerical"};
    }
    if (r.value > best) {
      best = r.value;
      best_converged = r.converged;
      best_point = s;
    }
  }
  PositivityVerdict v;
  v.status = best_converged ? Status::PositiveNumerical : Status::Inconclusive;
  v.margin = 1.0 - best;
  v.method = "numerical";
  return v;
}

PositivityVerdict closed_form_n2(const DiagonalTypeMap& map) {
  if (map.n() != 2) throw DimensionError("closed_form_n2: need n = 2");
  const RealMatrix& a = map.a();
  if (auto bad = first_negative(a))
    return negative_entry_verdict(a, *bad, "closed:n2");
  const double margin =
      std::sqrt(a(0, 0) * a(1, 1)) + std::sqrt(a(0, 1) * a(1, 0)) - 1.0;
  PositivityVerdict v;
  v.status = margin >= -kClosedFormTol ? Status::PositiveCertified : Status::NotPositive;
  v.margin = margin;
  v.method = "closed:n2";
  return v;
}

PositivityVerdict closed_form_n3_circulant(double a, double b, double c) {
  PositivityVerdict v;
  v.method = "closed:n3-circulant";
  if (a < 0.0 || b < 0.0 || c < 0.0) {
    v.status = Status::NotPositive;
    v.margin = std::min({a, b, c});
    v.offending_entry = a < 0.0 ? std::make_pair(0, 0)
                        : b < 0.0 ? std::make_pair(1, 0)
                                  : std::make_pair(2, 0);
    return v;
  }
  double margin = a + b + c - 2.0;
  if (a <= 1.0) margin = std::min(margin, b * c - (1.0 - a) * (1.0 - a));
  v.status = margin >= -kClosedFormTol ? Status::PositiveCertified : Status::NotPositive;
  v.margin = margin;
  return v;
}

std::optional<PositivityVerdict> check_positive_closed(
    const DiagonalTypeMap& map) {
  std::optional<PositivityVerdict> v;
  if (map.n() == 2) {
    v = closed_form_n2(map);
  } else if (map.n() == 3) {
    if (auto alphas = map.circulant_params())
      v = closed_form_n3_circulant((*alphas)[0], (*alphas)[1], (*alphas)[2]);
  }
  if (!v && check_cp(map)) {
    PositivityVerdict cp;
    cp.status = Status::PositiveCertified;
    cp.margin = psd_test(d_matrix(map).entries).min_eigenvalue;
    cp.method = "closed:cp";
    v = cp;
  }
  if (v && v->status == Status::NotPositive && !v->offending_entry) {
    // The uniform point exhibits any failure of the trace condition.
    const int n = map.n();
    if (uniform_lhs(map) > 1.0) v->witness = std::vector<double>(n, 1.0 / n);
  }
  return v;
}

bool check_cp(const DiagonalTypeMap& map) {
  const RealMatrix& a = map.a();
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j && a(i, j) < 0.0) return false;
  return psd_test(d_matrix(map).entries).psd;
}

bool check_indecomposable_n3(double a, double b, double c) {
  const PositivityVerdict v = closed_form_n3_circulant(a, b, c);
  if (!v.positive()) {
    std::ostringstream os;
    os << "indecomposability is defined for positive maps; (" << a << ", "
       << b << ", " << c << ") is not positive";
    throw Error(os.str());
  }
  if (a >= 2.0) return false;
  return (2.0 - a) * (2.0 - a) - 4.0 * b * c > kClosedFormTol;
}

namespace {

double expectation(const DiagonalTypeMap& map, const ComplexVector& x,
                   const ComplexVector& y) {
  const ComplexMatrix image = posmap::apply(map, y * y.adjoint());
  return (x.adjoint() * image * x)(0, 0).real();
}

// All compositions of `total` into n nonnegative parts.
void simplex_grid(int n, int total, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    int used = std::accumulate(cur.begin(), cur.end(), 0);
    cur.push_back(total - used);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  int used = std::accumulate(cur.begin(), cur.end(), 0);
  for (int k = 0; k <= total - used; ++k) {
    cur.push_back(k);
    simplex_grid(n, total, cur, out);
    cur.pop_back();
  }
}

double binomial(int top, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (top - k + i) / i;
  return r;
}

}  // namespace

OracleResult oracle_positivity(const DiagonalTypeMap& map, std::size_t samples,
                               std::uint64_t seed, double tol) {
  const int n = map.n();
  OracleResult result;
  result.min_value = std::numeric_limits<double>::infinity();
  auto consider = [&](const ComplexVector& x, const ComplexVector& y) {
    const double v = expectation(map, x, y);
    ++result.evaluations;
    if (v < result.min_value) {
      result.min_value = v;
      result.x = x;
      result.y = y;
    }
  };

  // Deterministic grid of real nonnegative unit vectors on both sides.
  int resolution = 0;
  for (int r = 1; r <= 12; ++r) {
    const double pts = binomial(r + n - 1, n - 1);
    if (pts * pts > 40000.0) break;
    resolution = r;
  }
  if (resolution > 0) {
    std::vector<std::vector<int>> grid;
    std::vector<int> cur;
    simplex_grid(n, resolution, cur, grid);
    std::vector<ComplexVector> vecs;
    vecs.reserve(grid.size());
    for (const auto& g : grid) {
      ComplexVector v(n);
      for (int i = 0; i < n; ++i)
        v(i) = std::sqrt(static_cast<double>(g[i]) / resolution);
      vecs.push_back(std::move(v));
    }
    for (const auto& x : vecs)
      for (const auto& y : vecs) consider(x, y);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_unit = [&] {
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) v(i) = {normal(rng), normal(rng)};
    return ComplexVector(v / v.norm());
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexVector x = random_unit();
    const ComplexVector y = random_unit();
    consider(x, y);
  }
  result.violation = result.min_value < -tol;
  return result;
}

}  // namespace posmap
