#pragma once

#include <stdexcept>
#include <string>

namespace curveflat {

// All library failures surface as Error. `module` names the component that
// raised it so the CLI can report it in its error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

}  // namespace curveflat
