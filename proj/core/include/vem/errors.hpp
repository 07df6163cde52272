#pragma once

#include <stdexcept>
#include <string>

namespace vem {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid, non-conforming or irregular mesh input.
class MeshError : public Error {
public:
  explicit MeshError(const std::string& what) : Error(what) {}
};

/// Linear solver breakdowns (loss of positive definiteness, non-convergence).
class SolverError : public Error {
public:
  explicit SolverError(const std::string& what) : Error(what) {}
};

} // namespace vem
