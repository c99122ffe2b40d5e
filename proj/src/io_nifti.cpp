#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include "endian.hpp"
#include "p2c/io.hpp"

namespace p2c::io {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kHeaderSize = 348;
constexpr std::size_t kVoxOffset = 352;
constexpr std::int16_t kDtUint8 = 2;
constexpr std::int16_t kDtInt16 = 4;

// Byte offsets into the NIfTI-1 header.
namespace off {
constexpr std::size_t sizeof_hdr = 0;
constexpr std::size_t regular = 38;
constexpr std::size_t dim = 40;
constexpr std::size_t datatype = 70;
constexpr std::size_t bitpix = 72;
constexpr std::size_t pixdim = 76;
constexpr std::size_t vox_offset = 108;
constexpr std::size_t scl_slope = 112;
constexpr std::size_t scl_inter = 116;
constexpr std::size_t xyzt_units = 123;
constexpr std::size_t descrip = 148;
constexpr std::size_t qform_code = 252;
constexpr std::size_t sform_code = 254;
constexpr std::size_t srow_x = 280;
constexpr std::size_t srow_y = 296;
constexpr std::size_t srow_z = 312;
constexpr std::size_t magic = 344;
}  // namespace off

using HeaderBytes = std::array<std::byte, kVoxOffset>;

template <typename T>
void put(HeaderBytes& h, std::size_t at, T value) {
  std::array<std::byte, sizeof(T)> b;
  std::memcpy(b.data(), &value, sizeof(T));
  detail::to_little_endian<T>(b);
  std::memcpy(h.data() + at, b.data(), sizeof(T));
}

template <typename T>
T get(std::span<const std::byte> h, std::size_t at) {
  std::array<std::byte, sizeof(T)> b;
  std::memcpy(b.data(), h.data() + at, sizeof(T));
  detail::to_little_endian<T>(b);
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

template <ElementKind K>
void write_impl(const fs::path& path, const Volume<K>& v, std::int16_t datatype) {
  HeaderBytes h{};
  const auto& d = v.dims();
  const auto& s = v.spacing();
  put<std::int32_t>(h, off::sizeof_hdr, static_cast<std::int32_t>(kHeaderSize));
  h[off::regular] = std::byte{'r'};
  const std::array<std::int16_t, 8> dim{3, static_cast<std::int16_t>(d.nx), static_cast<std::int16_t>(d.ny),
                                        static_cast<std::int16_t>(d.nz), 1, 1, 1, 1};
  if (d.nx > INT16_MAX || d.ny > INT16_MAX || d.nz > INT16_MAX) {
    throw Error(Errc::unsupported_format, "NIfTI-1 dims are limited to 32767 per axis");
  }
  for (std::size_t i = 0; i < 8; ++i) put<std::int16_t>(h, off::dim + 2 * i, dim[i]);
  put<std::int16_t>(h, off::datatype, datatype);
  put<std::int16_t>(h, off::bitpix, static_cast<std::int16_t>(8 * sizeof(element_t<K>)));
  const std::array<float, 8> pixdim{1.0f, static_cast<float>(s.sx), static_cast<float>(s.sy),
                                    static_cast<float>(s.sz), 0.0f, 0.0f, 0.0f, 0.0f};
  for (std::size_t i = 0; i < 8; ++i) put<float>(h, off::pixdim + 4 * i, pixdim[i]);
  put<float>(h, off::vox_offset, static_cast<float>(kVoxOffset));
  put<float>(h, off::scl_slope, 0.0f);
  put<float>(h, off::scl_inter, 0.0f);
  h[off::xyzt_units] = std::byte{2};  // mm
  const char descrip[] = "pixel2cancer";
  std::memcpy(h.data() + off::descrip, descrip, sizeof descrip - 1);
  put<std::int16_t>(h, off::qform_code, 0);
  put<std::int16_t>(h, off::sform_code, 1);
  const std::array<std::array<float, 4>, 3> srow{{{pixdim[1], 0, 0, 0}, {0, pixdim[2], 0, 0}, {0, 0, pixdim[3], 0}}};
  for (std::size_t r = 0; r < 3; ++r) {
    const std::size_t base = r == 0 ? off::srow_x : r == 1 ? off::srow_y : off::srow_z;
    for (std::size_t c = 0; c < 4; ++c) put<float>(h, base + 4 * c, srow[r][c]);
  }
  std::memcpy(h.data() + off::magic, "n+1\0", 4);
  // Bytes 348..351 stay zero: no header extensions.

  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(h.data()), static_cast<std::streamsize>(h.size()));
  const auto payload = detail::encode_le<element_t<K>>(v.data());
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error(Errc::io, "short write to " + path.string());
}

template <ElementKind K>
AnyVolume decode(const Dims& d, const Spacing& s, std::span<const std::byte> payload) {
  Volume<K> v(d, s, detail::decode_le<element_t<K>>(payload));
  validate_values(v);
  return v;
}

}  // namespace

void write_nifti(const fs::path& path, const HuVolume& v) { write_impl(path, v, kDtInt16); }
void write_nifti(const fs::path& path, const LabelVolume& v) { write_impl(path, v, kDtUint8); }

AnyVolume read_nifti(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  std::vector<std::byte> bytes(static_cast<std::size_t>(in.tellg()));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  const std::string name = path.string();
  if (bytes.size() < kHeaderSize) throw Error(Errc::corrupt_file, name + ": shorter than a NIfTI-1 header");
  std::span<const std::byte> h(bytes);

  if (std::memcmp(h.data() + off::magic, "n+1\0", 4) != 0) {
    throw Error(Errc::corrupt_file, name + ": bad magic (expected single-file NIfTI-1 'n+1')");
  }
  const auto sizeof_hdr = get<std::int32_t>(h, off::sizeof_hdr);
  if (sizeof_hdr != static_cast<std::int32_t>(kHeaderSize)) {
    // 348 byte-swapped means a big-endian writer.
    if (sizeof_hdr == 0x5C010000) throw Error(Errc::unsupported_format, name + ": big-endian NIfTI not supported");
    throw Error(Errc::corrupt_file, name + ": sizeof_hdr is " + std::to_string(sizeof_hdr));
  }

  std::array<std::int16_t, 8> dim{};
  for (std::size_t i = 0; i < 8; ++i) dim[i] = get<std::int16_t>(h, off::dim + 2 * i);
  if (dim[0] < 3 || dim[0] > 7) throw Error(Errc::corrupt_file, name + ": dim[0] must be 3..7");
  for (int i = 4; i <= dim[0]; ++i) {
    if (dim[i] > 1) throw Error(Errc::unsupported_format, name + ": only single-frame 3D volumes are supported");
  }
  const Dims d{dim[1], dim[2], dim[3]};

  const auto datatype = get<std::int16_t>(h, off::datatype);
  if (datatype != kDtInt16 && datatype != kDtUint8) {
    throw Error(Errc::unsupported_format, name + ": unsupported datatype " + std::to_string(datatype));
  }
  const std::size_t esize = datatype == kDtInt16 ? 2 : 1;
  if (get<std::int16_t>(h, off::bitpix) != static_cast<std::int16_t>(8 * esize)) {
    throw Error(Errc::corrupt_file, name + ": bitpix disagrees with datatype");
  }

  const float slope = get<float>(h, off::scl_slope);
  const float inter = get<float>(h, off::scl_inter);
  if (!((slope == 0.0f || slope == 1.0f) && inter == 0.0f)) {
    throw Error(Errc::unsupported_format, name + ": intensity scaling (scl_slope/scl_inter) not supported");
  }

  Spacing s{std::fabs(get<float>(h, off::pixdim + 4)), std::fabs(get<float>(h, off::pixdim + 8)),
            std::fabs(get<float>(h, off::pixdim + 12))};
  try {
    validate_dims(d);
    validate_spacing(s);
  } catch (const Error& e) {
    throw Error(Errc::corrupt_file, name + ": " + e.what());
  }

  const float vox = get<float>(h, off::vox_offset);
  if (!(vox >= static_cast<float>(kVoxOffset)) || vox != std::floor(vox)) {
    throw Error(Errc::corrupt_file, name + ": invalid vox_offset");
  }
  const auto offset = static_cast<std::size_t>(vox);
  const std::size_t need = d.count() * esize;
  if (bytes.size() < offset || bytes.size() - offset < need) {
    throw Error(Errc::corrupt_file, name + ": voxel data truncated");
  }
  const auto payload = h.subspan(offset, need);
  if (datatype == kDtInt16) return decode<ElementKind::HU>(d, s, payload);
  return decode<ElementKind::Label>(d, s, payload);
}

}  // namespace p2c::io
