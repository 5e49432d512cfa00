#include "onebit/error.hpp"

namespace onebit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Saturation: return "saturation";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::BoundedGrowth: return "bounded_growth";
    case ErrorKind::Fit: return "fit";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace onebit
