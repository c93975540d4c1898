#pragma once

#include <stdexcept>
#include <string>

namespace wg {

// Error categories drive the CLI exit-code mapping:
// usage/config problems -> 2, solver failures -> 3, numeric check failures -> 1.
enum class ErrorKind {
  Config,       // bad config file, bad CLI input, missing data
  MeshFormat,   // unreadable mesh file
  MeshTopology, // non-manifold input, dangling indices, duplicates
  Expression,   // coefficient expression parse error
  Evaluation,   // run-time expression evaluation error
  Ellipticity,  // diffusion matrix loses positivity
  Degenerate,   // degenerate element (ill-conditioned local system)
  Solver,       // linear solve failed or residual out of tolerance
  Numeric       // a numerical invariant check failed
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// Expression syntax error, carries the byte offset into the source text.
class ExprParseError : public Error {
public:
  ExprParseError(std::size_t offset, const std::string& expected, const std::string& what)
      : Error(ErrorKind::Expression, what), offset_(offset), expected_(expected) {}
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

private:
  std::size_t offset_;
  std::string expected_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return "config";
    case ErrorKind::MeshFormat: return "mesh-format";
    case ErrorKind::MeshTopology: return "mesh-topology";
    case ErrorKind::Expression: return "expression";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::Ellipticity: return "ellipticity";
    case ErrorKind::Degenerate: return "degenerate-element";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Numeric: return "numeric";
  }
  return "unknown";
}

} // namespace wg
