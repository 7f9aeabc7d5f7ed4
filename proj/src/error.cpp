#include "cfa/error.hpp"

#include <iostream>

namespace cfa {

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) {
    return 1;
  }
  if (dynamic_cast<const NumericError*>(&e) != nullptr) {
    return 3;
  }
  return 2;
}

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

}  // namespace cfa
