#pragma once

#include <stdexcept>
#include <string>

namespace pakf {

/// Failure classes. The numeric values are the CLI exit codes.
enum class ErrorKind : int {
  usage = 1,
  data = 2,
  numerical = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Bad arguments or configuration.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

/// Malformed input data: broken invariants, file format problems, shape mismatches.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

/// Degenerate models and other numerical failures.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// PSNR with zero noise power outside the ROI. Kept distinct from a finite value.
class InfinitePsnr : public NumericalError {
 public:
  explicit InfinitePsnr(const std::string& what) : NumericalError(what) {}
};

/// Re-throws `e` as the same error class with `context` prefixed to the message.
[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context);

}  // namespace pakf
