#pragma once

#include <stdexcept>
#include <string>

namespace gldemu {

// Error categories; the C API maps these onto its status codes and the CLI
// onto process exit codes.
enum class errc {
  invalid_argument,  // bad parameters / preconditions
  data,              // malformed or inconsistent input data
  fit_failure,       // no acceptable optimum found
  domain,            // point outside a mathematical domain
  io,                // file system problems
  metric             // metric evaluation failed
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& what) : Error(errc::invalid_argument, what) {}
};

struct DataError : Error {
  explicit DataError(const std::string& what) : Error(errc::data, what) {}
};

struct FitError : Error {
  explicit FitError(const std::string& what) : Error(errc::fit_failure, what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(errc::domain, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(errc::io, what) {}
};

struct MetricError : Error {
  explicit MetricError(const std::string& what) : Error(errc::metric, what) {}
};

// Thrown when a value lies outside the support of a distribution. Carries the
// violated bound so constraint handling can inspect it.
struct OutOfSupportError : DomainError {
  OutOfSupportError(double value, double bound, bool below, const std::string& what)
      : DomainError(what), value(value), bound(bound), below(below) {}
  double value;
  double bound;
  bool below;  // true: value < lower bound, false: value > upper bound
};

}  // namespace gldemu
