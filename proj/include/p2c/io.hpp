#pragma once

#include <filesystem>

#include "p2c/volume.hpp"

namespace p2c::io {

/// Parsed `.volhdr` sidecar.
struct VolumeHeader {
  Dims dims;
  Spacing spacing;
  ElementKind kind = ElementKind::HU;

  std::size_t payload_bytes() const;
};

/// `<stem>.volhdr` next to `<stem>.vol`.
std::filesystem::path sidecar_path(const std::filesystem::path& payload);

VolumeHeader read_header(const std::filesystem::path& payload);

/// Raw little-endian payload plus a key = value text sidecar:
///
///   dims = 64 64 32
///   spacing = 0.80000000000000004 0.80000000000000004 3
///   kind = hu
///   order = little-endian
AnyVolume read_any_volume(const std::filesystem::path& payload);

template <ElementKind K>
Volume<K> read_volume(const std::filesystem::path& payload) {
  auto any = read_any_volume(payload);
  if (auto* v = std::get_if<Volume<K>>(&any)) return std::move(*v);
  throw Error(Errc::unsupported_format, payload.string() + ": expected kind '" + std::string(kind_name(K)) +
                                            "', file holds '" + std::string(kind_name(kind_of(any))) + "'");
}

template <ElementKind K>
void write_volume(const std::filesystem::path& payload, const Volume<K>& v);

void write_any_volume(const std::filesystem::path& payload, const AnyVolume& v);

// NIfTI-1 single file (.nii), uncompressed. int16 maps to HU and uint8 to
// Label; other datatypes are rejected.
AnyVolume read_nifti(const std::filesystem::path& path);
void write_nifti(const std::filesystem::path& path, const HuVolume& v);
void write_nifti(const std::filesystem::path& path, const LabelVolume& v);

/// Dispatches on extension: `.nii` goes through NIfTI, anything else is raw.
AnyVolume read_auto(const std::filesystem::path& path);

template <ElementKind K>
Volume<K> read_auto_as(const std::filesystem::path& path) {
  auto any = read_auto(path);
  if (auto* v = std::get_if<Volume<K>>(&any)) return std::move(*v);
  throw Error(Errc::unsupported_format, path.string() + ": expected kind '" + std::string(kind_name(K)) +
                                            "', file holds '" + std::string(kind_name(kind_of(any))) + "'");
}

}  // namespace p2c::io
