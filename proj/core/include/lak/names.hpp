#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace lak {

using Name = uint32_t;

// Global variable-name interner. Every binder gets a distinct id; the base
// string is kept for printing only.
class Names {
 public:
  static Name fresh(std::string base);
  static Name fresh_like(Name n) { return fresh(base_of(n)); }
  static std::string base_of(Name n);
  // Stable id for a free (unbound) source name; parsing the same free name
  // twice yields the same variable.
  static Name global(const std::string& base);

 private:
  static Names& instance();
  std::mutex mu_;
  std::vector<std::string> bases_;
  std::unordered_map<std::string, Name> globals_;
};

}  // namespace lak
