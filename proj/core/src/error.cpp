#include "rwnet/error.hpp"

namespace rwnet {

ParseError::ParseError(std::size_t line, const std::string& what)
    : ValidationError("graph", "line " + std::to_string(line) + ": " + what), line_(line) {}

SingularMatrixError::SingularMatrixError(std::size_t pivot, const std::string& what)
    : NumericalError("linalg", what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}

}  // namespace rwnet
