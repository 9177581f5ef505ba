#include "immunet/error.hpp"

#include <sstream>

namespace immunet {

Error::Error(std::string stage, const std::string& detail)
    : std::runtime_error(stage + ": " + detail), stage_(std::move(stage)), detail_(detail) {}

namespace {
std::string where(const std::string& source, std::size_t line, const std::string& detail) {
  std::ostringstream os;
  if (!source.empty()) os << source;
  if (line > 0) os << (source.empty() ? "" : ":") << "line " << line;
  if (!source.empty() || line > 0) os << ": ";
  os << detail;
  return os.str();
}

std::string convergence_detail(std::size_t iterations, double residual) {
  std::ostringstream os;
  os << "power iteration did not converge after " << iterations
     << " iterations (last residual " << residual << ")";
  return os.str();
}
}  // namespace

ParseError::ParseError(std::string source, std::size_t line, const std::string& detail)
    : Error("ingest", where(source, line, detail)), source_(std::move(source)), line_(line) {}

ConvergenceError::ConvergenceError(std::size_t iterations, double residual)
    : Error("spectral", convergence_detail(iterations, residual)),
      iterations_(iterations),
      residual_(residual) {}

}  // namespace immunet
