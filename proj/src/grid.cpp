#include "p2c/grid.hpp"

#include <algorithm>
#include <limits>

namespace p2c {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::shape_mismatch: return "shape mismatch";
    case Errc::corrupt_file: return "corrupt file";
    case Errc::unsupported_format: return "unsupported format";
    case Errc::validation: return "validation error";
    case Errc::empty_organ: return "empty organ";
    case Errc::empty_tumor: return "empty tumor";
    case Errc::io: return "i/o error";
  }
  return "unknown error";
}

std::string_view kind_name(ElementKind kind) noexcept {
  switch (kind) {
    case ElementKind::HU: return "hu";
    case ElementKind::Label: return "label";
    case ElementKind::Level: return "level";
    case ElementKind::State: return "state";
    case ElementKind::Pressure: return "pressure";
    case ElementKind::Real: return "real";
  }
  return "?";
}

ElementKind kind_from_name(std::string_view name) {
  for (auto k : {ElementKind::HU, ElementKind::Label, ElementKind::Level, ElementKind::State, ElementKind::Pressure,
                 ElementKind::Real}) {
    if (kind_name(k) == name) return k;
  }
  throw Error(Errc::unsupported_format, "unknown element kind '" + std::string(name) + "'");
}

ElementKind kind_of(const AnyVolume& v) noexcept {
  return std::visit([](const auto& vol) { return std::decay_t<decltype(vol)>::kind; }, v);
}

void validate_dims(const Dims& d) {
  if (d.nx <= 0 || d.ny <= 0 || d.nz <= 0) {
    throw Error(Errc::validation, "dims must be positive, got " + std::to_string(d.nx) + "x" +
                                      std::to_string(d.ny) + "x" + std::to_string(d.nz));
  }
  // Flat indices are size_t but the engine stores voxel coordinates as int32.
  if (d.count() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()) * 4) {
    throw Error(Errc::validation, "volume too large");
  }
}

void validate_spacing(const Spacing& s) {
  for (double v : {s.sx, s.sy, s.sz}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(Errc::validation, "spacing components must be finite and strictly positive");
    }
  }
}

template <ElementKind K>
void validate_values(const Volume<K>& v) {
  using T = element_t<K>;
  T lo{};
  T hi{};
  if constexpr (K == ElementKind::State) {
    lo = -1, hi = 10;
  } else if constexpr (K == ElementKind::Level) {
    lo = 0, hi = 4;
  } else if constexpr (K == ElementKind::Label) {
    lo = 0, hi = 1;
  } else {
    return;
  }
  const auto data = v.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] < lo || data[i] > hi) {
      throw Error(Errc::validation, std::string(kind_name(K)) + " value " + std::to_string(+data[i]) +
                                        " out of range at flat index " + std::to_string(i));
    }
  }
}

template void validate_values(const HuVolume&);
template void validate_values(const LabelVolume&);
template void validate_values(const LevelVolume&);
template void validate_values(const StateVolume&);
template void validate_values(const PressureVolume&);
template void validate_values(const RealVolume&);

std::vector<VoxelIndex> neighborhood26(const VoxelIndex& idx, const Dims& dims) {
  std::vector<VoxelIndex> out;
  out.reserve(26);
  for (const auto& o : kNeighborOffsets) {
    VoxelIndex n{idx.x + o.dx, idx.y + o.dy, idx.z + o.dz};
    if (in_bounds(n, dims)) out.push_back(n);
  }
  return out;
}

namespace {

// One axis of a separable erosion by a cube of half-width r: a voxel stays
// set only if every voxel within r along the axis is set. Positions beyond
// the grid edge count as unset.
void erode_axis(std::vector<std::uint8_t>& v, const Dims& d, int axis, int r) {
  const std::int64_t len = axis == 0 ? d.nx : axis == 1 ? d.ny : d.nz;
  const std::size_t stride = axis == 0 ? 1 : axis == 1 ? static_cast<std::size_t>(d.nx)
                                                       : static_cast<std::size_t>(d.nx) * d.ny;
  const std::int64_t lines = static_cast<std::int64_t>(d.count()) / len;
  std::vector<std::int32_t> prefix(static_cast<std::size_t>(len) + 1);
  std::vector<std::uint8_t> line(static_cast<std::size_t>(len));

  for (std::int64_t l = 0; l < lines; ++l) {
    std::size_t base;
    if (axis == 0) {
      base = static_cast<std::size_t>(l) * static_cast<std::size_t>(d.nx);
    } else if (axis == 1) {
      const auto x = static_cast<std::size_t>(l % d.nx);
      const auto z = static_cast<std::size_t>(l / d.nx);
      base = z * static_cast<std::size_t>(d.nx) * d.ny + x;
    } else {
      base = static_cast<std::size_t>(l);
    }
    prefix[0] = 0;
    for (std::int64_t i = 0; i < len; ++i) {
      line[i] = v[base + static_cast<std::size_t>(i) * stride];
      prefix[i + 1] = prefix[i] + line[i];
    }
    for (std::int64_t i = 0; i < len; ++i) {
      const std::int64_t a = i - r;
      const std::int64_t b = i + r;
      std::uint8_t keep = 0;
      if (line[i] && a >= 0 && b < len) keep = (prefix[b + 1] - prefix[a]) == (2 * r + 1);
      v[base + static_cast<std::size_t>(i) * stride] = keep;
    }
  }
}

}  // namespace

LabelVolume boundary_shell(const LabelVolume& mask, int thickness) {
  if (thickness < 1) throw Error(Errc::validation, "boundary thickness must be >= 1");
  const Dims& d = mask.dims();
  const auto m = mask.data();
  // Chebyshev ball = cube, so the erosion separates per axis.
  std::vector<std::uint8_t> core(m.begin(), m.end());
  for (int axis = 0; axis < 3; ++axis) erode_axis(core, d, axis, thickness);

  LabelVolume shell(d, mask.spacing());
  auto s = shell.data();
  for (std::size_t i = 0; i < m.size(); ++i) s[i] = (m[i] != 0 && core[i] == 0) ? 1 : 0;
  return shell;
}

}  // namespace p2c
