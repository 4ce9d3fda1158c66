#include "posmap/circulant_spectrum.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "posmap/errors.hpp"

namespace posmap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kModulusTol = 1e-9;
constexpr double kImagTol = 1e-10;

std::complex<double> omega_pow(long long k, int n) {
  const long long r = ((k % n) + n) % n;
  return std::polar(1.0, kTwoPi * static_cast<double>(r) / n);
}

double canonical_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace

CirculantParams::CirculantParams(std::vector<double> alphas)
    : alphas_(std::move(alphas)) {
  if (alphas_.size() < 2 || alphas_.size() > static_cast<std::size_t>(kMaxDim))
    throw DimensionError("CirculantParams: n must lie in [2, 64]");
  for (double a : alphas_)
    if (!std::isfinite(a)) throw Error("CirculantParams: non-finite alpha");
}

std::vector<double> CirculantParams::betas() const {
  std::vector<double> b(alphas_);
  for (double& x : b) x -= 1.0;
  return b;
}

RealMatrix CirculantParams::matrix() const { return to_map().a(); }

DiagonalTypeMap CirculantParams::to_map() const {
  return DiagonalTypeMap::circulant(alphas_);
}

std::optional<CirculantParams> CirculantParams::from_map(
    const DiagonalTypeMap& map, double tol) {
  auto alphas = map.circulant_params(tol);
  if (!alphas) return std::nullopt;
  return CirculantParams(std::move(*alphas));
}

int torus_dimension(int n) { return (n - 1) / 2; }

void PhasePoint::validate() const {
  if (n < 2 || n > kMaxDim)
    throw DimensionError("PhasePoint: n must lie in [2, 64]");
  const int m = torus_dimension(n);
  if (static_cast<int>(phases.size()) != m) {
    std::ostringstream os;
    os << "PhasePoint: n = " << n << " needs " << m << " phases, got "
       << phases.size();
    throw DimensionError(os.str());
  }
  for (double phi : phases)
    if (!std::isfinite(phi)) throw Error("PhasePoint: non-finite phase");
  if (n % 2 == 0) {
    if (!even_sign || (*even_sign != 1 && *even_sign != -1))
      throw Error("PhasePoint: even n needs a sign of +1 or -1");
  } else if (even_sign) {
    throw Error("PhasePoint: odd n takes no sign");
  }
}

std::vector<std::complex<double>> dft_eigenvalues(const CirculantParams& params) {
  const int n = params.n();
  std::vector<std::complex<double>> lambda(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> s = 0.0;
    for (int l = 0; l < n; ++l)
      s += omega_pow(-static_cast<long long>(k) * l, n) * params[l];
    lambda[k] = s;
  }
  return lambda;
}

CirculantParams alphas_from_phases(const PhasePoint& pt) {
  pt.validate();
  const int n = pt.n;
  std::vector<std::complex<double>> lambda(n);
  lambda[0] = static_cast<double>(n - 1);
  for (std::size_t k = 0; k < pt.phases.size(); ++k) {
    const auto z = std::polar(1.0, pt.phases[k]);
    lambda[k + 1] = z;
    lambda[n - 1 - k] = std::conj(z);
  }
  if (n % 2 == 0) lambda[n / 2] = static_cast<double>(*pt.even_sign);

  std::vector<double> alphas(n);
  for (int l = 0; l < n; ++l) {
    std::complex<double> s = 0.0;
    for (int k = 0; k < n; ++k)
      s += omega_pow(static_cast<long long>(k) * l, n) * lambda[k];
    s /= static_cast<double>(n);
    if (std::abs(s.imag()) > kImagTol) {
      std::ostringstream os;
      os << "inverse DFT left imaginary part " << s.imag() << " in alpha_" << l;
      throw Error(os.str());
    }
    alphas[l] = s.real();
  }
  return CirculantParams(std::move(alphas));
}

namespace {

void require_on_torus(const CirculantParams& params,
                      const std::vector<std::complex<double>>& lambda) {
  const int n = params.n();
  const double d0 = std::abs(lambda[0] - static_cast<double>(n - 1));
  if (d0 > kModulusTol) {
    std::ostringstream os;
    os << "not on the torus: lambda_0 = " << lambda[0].real()
       << ", expected " << n - 1;
    throw NotOnTorus(os.str(), 0, std::abs(lambda[0]));
  }
  for (int k = 1; k < n; ++k) {
    const double mod = std::abs(lambda[k]);
    if (std::abs(mod - 1.0) > kModulusTol) {
      std::ostringstream os;
      os << "not on the torus: |lambda_" << k << "| = " << mod;
      throw NotOnTorus(os.str(), k, mod);
    }
  }
}

}  // namespace

PhasePoint phases_from_alphas(const CirculantParams& params) {
  const auto lambda = dft_eigenvalues(params);
  require_on_torus(params, lambda);
  const int n = params.n();
  PhasePoint pt;
  pt.n = n;
  for (int k = 1; k <= torus_dimension(n); ++k)
    pt.phases.push_back(
        canonical_phase(std::atan2(lambda[k].imag(), lambda[k].real())));
  if (n % 2 == 0) pt.even_sign = lambda[n / 2].real() >= 0.0 ? 1 : -1;
  return pt;
}

double determinant_modulus(const CirculantParams& params) {
  const auto lambda = dft_eigenvalues(params);
  require_on_torus(params, lambda);
  double prod = 1.0;
  for (const auto& l : lambda) prod *= std::abs(l);
  return prod;
}

std::vector<PhasePoint> torus_sample_points(int n, int count,
                                            std::uint64_t seed) {
  if (n < 2 || n > kMaxDim)
    throw DimensionError("torus_sample: n must lie in [2, 64]");
  if (count < 0) throw Error("torus_sample: count must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::bernoulli_distribution coin(0.5);
  std::vector<PhasePoint> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    PhasePoint pt;
    pt.n = n;
    for (int k = 0; k < torus_dimension(n); ++k) pt.phases.push_back(phase(rng));
    if (n % 2 == 0) pt.even_sign = coin(rng) ? 1 : -1;
    out.push_back(std::move(pt));
  }
  return out;
}

std::vector<CirculantParams> torus_sample(int n, int count, std::uint64_t seed) {
  std::vector<CirculantParams> out;
  for (const auto& pt : torus_sample_points(n, count, seed))
    out.push_back(alphas_from_phases(pt));
  return out;
}

double angular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

}  // namespace posmap
