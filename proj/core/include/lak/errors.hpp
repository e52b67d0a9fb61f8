#pragma once

#include <stdexcept>
#include <string>

namespace lak {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct BlankArgumentError : Error {
  explicit BlankArgumentError(const std::string& what) : Error(what) {}
};

struct IndexOutOfRangeError : Error {
  explicit IndexOutOfRangeError(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};

struct FuelExhaustedError : Error {
  explicit FuelExhaustedError(const std::string& what) : Error(what) {}
};

struct IllFormedSpineError : Error {
  explicit IllFormedSpineError(const std::string& what) : Error(what) {}
};

struct InvalidRedexError : Error {
  explicit InvalidRedexError(const std::string& what) : Error(what) {}
};

struct CheckError : Error {
  CheckError(std::string node, const std::string& reason)
      : Error(node + ": " + reason), node_path(std::move(node)) {}
  std::string node_path;
};

struct CompilationError : Error {
  explicit CompilationError(const std::string& what) : Error(what) {}
};

struct MachineError : Error {
  explicit MachineError(const std::string& what) : Error(what) {}
};

}  // namespace lak
