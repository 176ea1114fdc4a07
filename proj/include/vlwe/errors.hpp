#pragma once
#include <stdexcept>
#include <string>

namespace vlwe {

// Operand shapes disagree (coordinate count, degree, or modulus).
class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Argument lies outside the operation's domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// The parameters cannot support the requested code path
// (e.g. no 2d-th root of unity for the transform).
class CapabilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Noise estimate exceeds the decryption-safety threshold.
class NoiseOverflowError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Too few inputs to produce a meaningful result.
class InsufficientSamplesError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed serialized payload.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace vlwe
