#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncdil {

/// Invalid parameters or malformed input. Maps to CLI exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computed certificate does not establish the requested claim. Exit code 3.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dimension or cell-count cap would be exceeded. Exit code 4.
class ResourceCapError : public std::runtime_error {
 public:
  ResourceCapError(const std::string& what, std::size_t required, std::size_t cap)
      : std::runtime_error(what + " (required " + std::to_string(required) +
                           ", cap " + std::to_string(cap) + ")"),
        required_(required),
        cap_(cap) {}

  std::size_t required() const { return required_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t required_;
  std::size_t cap_;
};

class NonHermitianError : public UsageError {
 public:
  explicit NonHermitianError(double asymmetry)
      : UsageError("matrix is not Hermitian: relative asymmetry " +
                   std::to_string(asymmetry)),
        asymmetry_(asymmetry) {}

  double asymmetry() const { return asymmetry_; }

 private:
  double asymmetry_;
};

}  // namespace ncdil
