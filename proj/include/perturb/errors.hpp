#pragma once

#include <stdexcept>
#include <string>

namespace perturb {

// Base for every error raised by the library. Input/shape problems derive
// from InputError; everything else is a mathematical failure (singularity,
// degeneracy, domain) and derives from MathError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class MathError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public MathError {
 public:
  using MathError::MathError;
};

class NotPositiveDefinite : public MathError {
 public:
  using MathError::MathError;
};

class AsymmetricMatrix : public MathError {
 public:
  using MathError::MathError;
};

// A(eps) looks singular for every eps near zero: no pole order <= max_t.
class NoPoleFound : public MathError {
 public:
  using MathError::MathError;
};

class IdenticallySingular : public MathError {
 public:
  using MathError::MathError;
};

// Regular-case routine called on a singularly perturbed Gram series.
class SingularPerturbation : public MathError {
 public:
  using MathError::MathError;
};

class DegenerateEpsilon : public MathError {
 public:
  using MathError::MathError;
};

class DegenerateEigenvalue : public MathError {
 public:
  using MathError::MathError;
};

// Evaluation point outside the disc where the expansion is meaningful.
class OutsideValidityDisc : public MathError {
 public:
  using MathError::MathError;
};

class NonPositiveSse : public MathError {
 public:
  using MathError::MathError;
};

// Negative powers that should cancel did not.
class NumericalBreakdown : public MathError {
 public:
  using MathError::MathError;
};

class NoInteriorMinimum : public MathError {
 public:
  using MathError::MathError;
};

}  // namespace perturb
