#pragma once

#include <stdexcept>
#include <string>

namespace aladdin {

// Exception carrying a module-specific error code. Each module defines its
// own code enum and derives (or aliases) a concrete error type from this.
template <typename Code>
class Error : public std::runtime_error {
 public:
  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

}  // namespace aladdin
