#pragma once

#include <stdexcept>
#include <string>

namespace vexfem {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent configuration input.
struct ConfigError : Error {
  using Error::Error;
};

/// Invalid mesh data or a point that cannot be located in the mesh.
struct MeshError : Error {
  using Error::Error;
};

/// Parameters outside the admissible range of a material law.
struct LawError : Error {
  using Error::Error;
};

/// Singular or numerically failed linear solve.
struct LinearSolveError : Error {
  using Error::Error;
};

}  // namespace vexfem
