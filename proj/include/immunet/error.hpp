#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace immunet {

/// Base error. `stage()` names the pipeline stage that raised it
/// (ingest, graph, spectral, immunize, simulate, embed, metrics, service).
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& detail);

  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string stage_;
  std::string detail_;
};

/// Parse failure with a 1-based line number (0 when not line-specific).
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& detail);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// Power iteration ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(std::size_t iterations, double residual);

  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
  double residual_;
};

}  // namespace immunet
