#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "posmap/map_core.hpp"

namespace posmap {

/// A point of the probability simplex. Positivity of a diagonal-type map
/// depends on x in C^n only through p_i = |x_i|^2 / |x|^2.
class SimplexPoint {
 public:
  /// Throws Error unless p_i >= 0 and |sum p - 1| <= 1e-12.
  explicit SimplexPoint(std::vector<double> p);
  /// Rescales a nonnegative, nonzero vector onto the simplex.
  static SimplexPoint normalized(std::span<const double> weights);

  int size() const noexcept { return static_cast<int>(p_.size()); }
  const std::vector<double>& values() const noexcept { return p_; }
  double operator[](int i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

enum class Status { PositiveCertified, PositiveNumerical, NotPositive, Inconclusive };

std::string to_string(Status s);

struct PositivityVerdict {
  Status status = Status::Inconclusive;
  // Signed slack of the deciding constraint; negative when violated.
  double margin = 0.0;
  // Simplex point p that violates the positivity inequality, when found.
  std::optional<std::vector<double>> witness;
  // (i, j) of a negative coefficient a_ij, when that decided the verdict.
  std::optional<std::pair<int, int>> offending_entry;
  std::string method;

  bool positive() const {
    return status == Status::PositiveCertified ||
           status == Status::PositiveNumerical;
  }
};

// Closed-form inequalities accept slack down to -kClosedFormTol, so maps
// constructed on a boundary in floating point are not rejected by rounding.
inline constexpr double kClosedFormTol = 1e-12;

struct OptimizerConfig {
  int restarts = 200;
  int iterations = 500;
  double violation_tol = 1e-7;
  std::uint64_t seed = 0;
};

/// sum_i p_i / B_i with B_i = p_i + sum_j a_ij p_j; terms with p_i = 0
/// contribute 0, including 0/0. The map is positive iff a >= 0 and this is
/// <= 1 on the whole simplex. Throws ConstraintViolation on negative a_ij.
double in_lhs(const DiagonalTypeMap& map, const SimplexPoint& p);

/// Gradient of in_lhs with respect to p (as a function on R^n_{>0}).
std::vector<double> in_lhs_gradient(const DiagonalTypeMap& map,
                                    std::span<const double> p);

/// Circulant form of in_lhs:
///   sum_i p_i / ((alpha_0 + 1) p_i + sum_{k>=1} alpha_k p_{i-k}),
/// indices mod n. With a_ij = alpha_{(i-j) mod n} this equals in_lhs of
/// DiagonalTypeMap::circulant(alphas).
double check_circulant_inequality(std::span<const double> alphas,
                                  const SimplexPoint& p);

/// Multistart projected-gradient maximisation of in_lhs over the simplex.
PositivityVerdict check_positive_numerical(const DiagonalTypeMap& map,
                                           const OptimizerConfig& cfg = {});

/// Closed-form decision where one is known: n = 2 (any a), n = 3 circulant,
/// or any completely positive map. nullopt when none applies.
PositivityVerdict closed_form_n2(const DiagonalTypeMap& map);
PositivityVerdict closed_form_n3_circulant(double a, double b, double c);
std::optional<PositivityVerdict> check_positive_closed(
    const DiagonalTypeMap& map);

/// Complete positivity: D-matrix PSD and a_ij >= 0 off the diagonal (the
/// latter is the nonnegativity of the Choi diagonal).
bool check_cp(const DiagonalTypeMap& map);

/// For a positive n = 3 circulant triple: indecomposable iff 4bc < (2 - a)^2
/// (by more than kClosedFormTol), and never for a >= 2 (CP maps are
/// decomposable). Throws Error if the
/// triple is not positive.
bool check_indecomposable_n3(double a, double b, double c);

struct OracleResult {
  bool violation = false;
  double min_value = 0.0;  // smallest <x| Lambda(|y><y|) |x> seen
  ComplexVector x;
  ComplexVector y;
  std::size_t evaluations = 0;
};

/// Samples unit vectors x, y in C^n at random (plus a deterministic grid of
/// real nonnegative vectors) and evaluates <x| Lambda(|y><y|) |x> through
/// apply(). Independent of in_lhs.
OracleResult oracle_positivity(const DiagonalTypeMap& map, std::size_t samples,
                               std::uint64_t seed, double tol = 1e-7);

}  // namespace posmap
