#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "p2c/error.hpp"

namespace p2c {

/// What a volume's voxels mean. Label and Level share a storage type but are
/// distinct kinds so the type system keeps masks and hardness maps apart.
enum class ElementKind : std::uint8_t { HU, Label, Level, State, Pressure, Real };

std::string_view kind_name(ElementKind kind) noexcept;
ElementKind kind_from_name(std::string_view name);  // throws unsupported_format

template <ElementKind K> struct kind_traits;
template <> struct kind_traits<ElementKind::HU> { using type = std::int16_t; };
template <> struct kind_traits<ElementKind::Label> { using type = std::uint8_t; };
template <> struct kind_traits<ElementKind::Level> { using type = std::uint8_t; };
template <> struct kind_traits<ElementKind::State> { using type = std::int8_t; };
template <> struct kind_traits<ElementKind::Pressure> { using type = std::uint16_t; };
template <> struct kind_traits<ElementKind::Real> { using type = float; };

template <ElementKind K> using element_t = typename kind_traits<K>::type;

struct Dims {
  std::int32_t nx = 0;
  std::int32_t ny = 0;
  std::int32_t nz = 0;

  std::size_t count() const noexcept {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
  }
  bool operator==(const Dims&) const = default;
};

/// Physical voxel size in mm.
struct Spacing {
  double sx = 1.0;
  double sy = 1.0;
  double sz = 1.0;

  double voxel_volume() const noexcept { return sx * sy * sz; }
  bool operator==(const Spacing&) const = default;
};

struct VoxelIndex {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;
  bool operator==(const VoxelIndex&) const = default;
};

inline bool in_bounds(const VoxelIndex& v, const Dims& d) noexcept {
  return v.x >= 0 && v.y >= 0 && v.z >= 0 && v.x < d.nx && v.y < d.ny && v.z < d.nz;
}

// x-fastest flat layout, shared by file I/O and the parallel kernels.
inline std::size_t flat_index(const VoxelIndex& v, const Dims& d) noexcept {
  return (static_cast<std::size_t>(v.z) * static_cast<std::size_t>(d.ny) + static_cast<std::size_t>(v.y)) *
             static_cast<std::size_t>(d.nx) +
         static_cast<std::size_t>(v.x);
}

inline VoxelIndex unflatten(std::size_t i, const Dims& d) noexcept {
  const auto nx = static_cast<std::size_t>(d.nx);
  const auto ny = static_cast<std::size_t>(d.ny);
  return {static_cast<std::int32_t>(i % nx), static_cast<std::int32_t>((i / nx) % ny),
          static_cast<std::int32_t>(i / (nx * ny))};
}

void validate_dims(const Dims& d);
void validate_spacing(const Spacing& s);

/// Dense 3D grid of one element kind.
template <ElementKind K>
class Volume {
 public:
  using value_type = element_t<K>;
  static constexpr ElementKind kind = K;

  Volume() = default;

  explicit Volume(Dims dims, Spacing spacing = {}, value_type fill = value_type{})
      : dims_(dims), spacing_(spacing) {
    validate_dims(dims_);
    validate_spacing(spacing_);
    data_.assign(dims_.count(), fill);
  }

  Volume(Dims dims, Spacing spacing, std::vector<value_type> data)
      : dims_(dims), spacing_(spacing), data_(std::move(data)) {
    validate_dims(dims_);
    validate_spacing(spacing_);
    if (data_.size() != dims_.count()) {
      throw Error(Errc::shape_mismatch, "volume data length " + std::to_string(data_.size()) +
                                            " does not match dims product " + std::to_string(dims_.count()));
    }
  }

  const Dims& dims() const noexcept { return dims_; }
  const Spacing& spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<value_type> data() noexcept { return data_; }
  std::span<const value_type> data() const noexcept { return data_; }

  value_type& operator[](std::size_t i) noexcept { return data_[i]; }
  const value_type& operator[](std::size_t i) const noexcept { return data_[i]; }

  value_type& at(const VoxelIndex& v) { return data_[checked(v)]; }
  const value_type& at(const VoxelIndex& v) const { return data_[checked(v)]; }

  value_type& operator()(std::int32_t x, std::int32_t y, std::int32_t z) noexcept {
    return data_[flat_index({x, y, z}, dims_)];
  }
  const value_type& operator()(std::int32_t x, std::int32_t y, std::int32_t z) const noexcept {
    return data_[flat_index({x, y, z}, dims_)];
  }

  template <ElementKind Other>
  bool same_shape(const Volume<Other>& other) const noexcept {
    return dims_ == other.dims();
  }

  bool operator==(const Volume&) const = default;

 private:
  std::size_t checked(const VoxelIndex& v) const {
    if (!in_bounds(v, dims_)) throw Error(Errc::shape_mismatch, "voxel index out of bounds");
    return flat_index(v, dims_);
  }

  Dims dims_{};
  Spacing spacing_{};
  std::vector<value_type> data_;
};

using HuVolume = Volume<ElementKind::HU>;
using LabelVolume = Volume<ElementKind::Label>;
using LevelVolume = Volume<ElementKind::Level>;
using StateVolume = Volume<ElementKind::State>;
using PressureVolume = Volume<ElementKind::Pressure>;
using RealVolume = Volume<ElementKind::Real>;

using AnyVolume = std::variant<HuVolume, LabelVolume, LevelVolume, StateVolume, PressureVolume, RealVolume>;

ElementKind kind_of(const AnyVolume& v) noexcept;

/// Checks the per-kind value range (State -1..10, Level 0..4, Label 0/1).
/// Throws Errc::validation naming the first offending voxel.
template <ElementKind K>
void validate_values(const Volume<K>& v);

template <ElementKind A, ElementKind B>
void require_same_shape(const Volume<A>& a, const Volume<B>& b, std::string_view what) {
  if (!a.same_shape(b)) {
    throw Error(Errc::shape_mismatch, "shape mismatch: " + std::string(what));
  }
}

}  // namespace p2c
