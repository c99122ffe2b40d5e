#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstring>
#include <span>
#include <vector>

namespace p2c::detail {

// Files are little-endian; big-endian hosts swap element bytes in place.
template <typename T>
void to_little_endian(std::span<std::byte> bytes) {
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    for (std::size_t i = 0; i + sizeof(T) <= bytes.size(); i += sizeof(T)) {
      std::reverse(bytes.begin() + i, bytes.begin() + i + sizeof(T));
    }
  } else {
    (void)bytes;
  }
}

template <typename T>
std::vector<std::byte> encode_le(std::span<const T> values) {
  std::vector<std::byte> out(values.size_bytes());
  if (!out.empty()) std::memcpy(out.data(), values.data(), out.size());
  to_little_endian<T>(out);
  return out;
}

template <typename T>
std::vector<T> decode_le(std::span<const std::byte> bytes) {
  std::vector<std::byte> tmp(bytes.begin(), bytes.end());
  to_little_endian<T>(tmp);
  std::vector<T> out(tmp.size() / sizeof(T));
  if (!out.empty()) std::memcpy(out.data(), tmp.data(), out.size() * sizeof(T));
  return out;
}

}  // namespace p2c::detail
