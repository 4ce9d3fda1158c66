#pragma once

#include <stdexcept>
#include <string>

namespace posmap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A numerical constraint (orthogonality, a row sum, an inner product, ...)
// failed; residual is the size of the violation.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Circulant parameters whose nontrivial DFT eigenvalues are not unimodular.
class NotOnTorus : public ConstraintViolation {
 public:
  NotOnTorus(const std::string& what, int index, double modulus)
      : ConstraintViolation(what, modulus), index_(index), modulus_(modulus) {}
  int index() const noexcept { return index_; }
  double modulus() const noexcept { return modulus_; }

 private:
  int index_;
  double modulus_;
};

}  // namespace posmap
