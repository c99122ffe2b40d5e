#pragma once

#include <stdexcept>
#include <string>

namespace p2c {

enum class Errc {
  shape_mismatch,
  corrupt_file,
  unsupported_format,
  validation,
  empty_organ,
  empty_tumor,
  io,
};

const char* to_string(Errc code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace p2c
