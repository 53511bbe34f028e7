#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace beiterlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPrime : public Error {
 public:
  explicit NotPrime(std::int64_t n)
      : Error(std::to_string(n) + " is not prime"), value(n) {}
  std::int64_t value;
};

class ZeroResidue : public Error {
 public:
  ZeroResidue(std::int64_t x, std::int64_t p)
      : Error(std::to_string(x) + " is divisible by " + std::to_string(p)) {}
};

class NonCoprimeResidue : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class RepresentativeNotFound : public Error {
 public:
  RepresentativeNotFound(std::int64_t s, std::int64_t modulus, std::int64_t cap)
      : Error("no prime r = " + std::to_string(s) + " (mod " + std::to_string(modulus) +
              ") found below cap " + std::to_string(cap)),
        residue(s) {}
  std::int64_t residue;
};

class EmptyBeiterSet : public Error {
 public:
  explicit EmptyBeiterSet(std::int64_t p)
      : Error("Beiter set of p = " + std::to_string(p) + " is empty") {}
};

class BadCongruence : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace beiterlab
