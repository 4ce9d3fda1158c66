#pragma once

// Spectral (DFT) picture of circulant diagonal-type maps. With
// a_ij = alpha_{(i-j) mod n} the eigenvalues are
//   lambda_k = sum_l omega^{-kl} alpha_l,   omega = exp(2 pi i / n),
// and the Kossakowski circulants are exactly those with lambda_0 = n - 1 and
// |lambda_k| = 1 for k >= 1. Real alphas force lambda_{n-k} = conj(lambda_k),
// leaving m = floor((n-1)/2) free phases plus, for even n, lambda_{n/2} = +-1.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "posmap/map_core.hpp"

namespace posmap {

class CirculantParams {
 public:
  explicit CirculantParams(std::vector<double> alphas);

  int n() const noexcept { return static_cast<int>(alphas_.size()); }
  const std::vector<double>& alphas() const noexcept { return alphas_; }
  double operator[](int k) const { return alphas_[k]; }

  /// beta_k = alpha_k - 1.
  std::vector<double> betas() const;
  RealMatrix matrix() const;
  DiagonalTypeMap to_map() const;

  /// Reads alphas from a circulant map; nullopt if the map is not circulant.
  static std::optional<CirculantParams> from_map(const DiagonalTypeMap& map,
                                                 double tol = 1e-12);

 private:
  std::vector<double> alphas_;
};

/// Torus coordinates: phases of lambda_1..lambda_m in [0, 2 pi), and the
/// real eigenvalue lambda_{n/2} = even_sign for even n.
struct PhasePoint {
  int n = 0;
  std::vector<double> phases;
  std::optional<int> even_sign;

  /// Throws unless phases.size() == m(n) and even_sign is present (and
  /// equal to +-1) exactly when n is even.
  void validate() const;
};

int torus_dimension(int n);

std::vector<std::complex<double>> dft_eigenvalues(const CirculantParams& params);

/// Inverse DFT of the spectrum (n - 1, e^{i phi_1}, ..., conj e^{i phi_1}).
CirculantParams alphas_from_phases(const PhasePoint& pt);

/// Throws NotOnTorus (with the first offending index and its modulus) if
/// lambda_0 != n - 1 or some |lambda_k| != 1 beyond 1e-9.
PhasePoint phases_from_alphas(const CirculantParams& params);

/// prod_k |lambda_k|; equals n - 1 on the torus. Throws NotOnTorus off it.
double determinant_modulus(const CirculantParams& params);

/// Uniform i.i.d. phases; for even n a fair coin picks the sign.
std::vector<PhasePoint> torus_sample_points(int n, int count,
                                            std::uint64_t seed);
std::vector<CirculantParams> torus_sample(int n, int count, std::uint64_t seed);

/// Smallest |a - b| modulo 2 pi.
double angular_distance(double a, double b);

}  // namespace posmap
