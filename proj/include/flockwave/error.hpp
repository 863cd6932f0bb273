#pragma once

#include <stdexcept>
#include <string>

namespace flockwave {

/// Domain error carrying a module-qualified message ("coupling: ...").
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(module) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

}  // namespace flockwave
