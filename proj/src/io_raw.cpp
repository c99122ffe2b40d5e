#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "endian.hpp"
#include "p2c/io.hpp"

namespace p2c::io {

namespace fs = std::filesystem;

namespace {

std::size_t element_size(ElementKind k) {
  switch (k) {
    case ElementKind::HU: return sizeof(element_t<ElementKind::HU>);
    case ElementKind::Label: return sizeof(element_t<ElementKind::Label>);
    case ElementKind::Level: return sizeof(element_t<ElementKind::Level>);
    case ElementKind::State: return sizeof(element_t<ElementKind::State>);
    case ElementKind::Pressure: return sizeof(element_t<ElementKind::Pressure>);
    case ElementKind::Real: return sizeof(element_t<ElementKind::Real>);
  }
  return 0;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
std::vector<T> parse_numbers(const std::string& text, const fs::path& file, const char* key) {
  std::vector<T> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    T v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw Error(Errc::corrupt_file, file.string() + ": bad value '" + tok + "' for " + key);
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::byte> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + p.string());
  in.seekg(0, std::ios::end);
  const auto n = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::byte> buf(n);
  if (n && !in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n))) {
    throw Error(Errc::io, "cannot read " + p.string());
  }
  return buf;
}

void write_bytes(const fs::path& p, std::span<const std::byte> bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + p.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io, "short write to " + p.string());
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <ElementKind K>
AnyVolume decode_payload(const VolumeHeader& h, std::span<const std::byte> payload) {
  auto values = detail::decode_le<element_t<K>>(payload);
  Volume<K> v(h.dims, h.spacing, std::move(values));
  validate_values(v);
  return v;
}

}  // namespace

std::size_t VolumeHeader::payload_bytes() const { return dims.count() * element_size(kind); }

fs::path sidecar_path(const fs::path& payload) {
  fs::path p = payload;
  p.replace_extension(".volhdr");
  return p;
}

VolumeHeader read_header(const fs::path& payload) {
  const fs::path hdr = sidecar_path(payload);
  std::ifstream in(hdr);
  if (!in) throw Error(Errc::io, "cannot open header " + hdr.string());

  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(Errc::corrupt_file, hdr.string() + ": malformed line '" + t + "'");
    kv[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
  }
  for (const char* key : {"dims", "spacing", "kind", "order"}) {
    if (!kv.count(key)) throw Error(Errc::corrupt_file, hdr.string() + ": missing key '" + key + "'");
  }
  if (kv["order"] != "little-endian") {
    throw Error(Errc::unsupported_format, hdr.string() + ": unsupported byte order '" + kv["order"] + "'");
  }

  VolumeHeader h;
  h.kind = kind_from_name(kv["kind"]);
  const auto dims = parse_numbers<std::int32_t>(kv["dims"], hdr, "dims");
  const auto spacing = parse_numbers<double>(kv["spacing"], hdr, "spacing");
  if (dims.size() != 3 || spacing.size() != 3) {
    throw Error(Errc::corrupt_file, hdr.string() + ": dims and spacing need three components");
  }
  h.dims = {dims[0], dims[1], dims[2]};
  h.spacing = {spacing[0], spacing[1], spacing[2]};
  try {
    validate_dims(h.dims);
    validate_spacing(h.spacing);
  } catch (const Error& e) {
    throw Error(Errc::corrupt_file, hdr.string() + ": " + e.what());
  }
  return h;
}

AnyVolume read_any_volume(const fs::path& payload) {
  const VolumeHeader h = read_header(payload);
  const auto bytes = read_bytes(payload);
  if (bytes.size() != h.payload_bytes()) {
    throw Error(Errc::corrupt_file, payload.string() + ": payload is " + std::to_string(bytes.size()) +
                                        " bytes, header implies " + std::to_string(h.payload_bytes()));
  }
  switch (h.kind) {
    case ElementKind::HU: return decode_payload<ElementKind::HU>(h, bytes);
    case ElementKind::Label: return decode_payload<ElementKind::Label>(h, bytes);
    case ElementKind::Level: return decode_payload<ElementKind::Level>(h, bytes);
    case ElementKind::State: return decode_payload<ElementKind::State>(h, bytes);
    case ElementKind::Pressure: return decode_payload<ElementKind::Pressure>(h, bytes);
    case ElementKind::Real: return decode_payload<ElementKind::Real>(h, bytes);
  }
  throw Error(Errc::unsupported_format, "unreachable element kind");
}

template <ElementKind K>
void write_volume(const fs::path& payload, const Volume<K>& v) {
  if (payload.has_parent_path()) fs::create_directories(payload.parent_path());
  std::ostringstream hdr;
  hdr << "dims = " << v.dims().nx << ' ' << v.dims().ny << ' ' << v.dims().nz << '\n'
      << "spacing = " << format_double(v.spacing().sx) << ' ' << format_double(v.spacing().sy) << ' '
      << format_double(v.spacing().sz) << '\n'
      << "kind = " << kind_name(K) << '\n'
      << "order = little-endian\n";
  const std::string text = hdr.str();
  write_bytes(sidecar_path(payload), std::as_bytes(std::span(text.data(), text.size())));
  write_bytes(payload, detail::encode_le<element_t<K>>(v.data()));
}

template void write_volume(const fs::path&, const HuVolume&);
template void write_volume(const fs::path&, const LabelVolume&);
template void write_volume(const fs::path&, const LevelVolume&);
template void write_volume(const fs::path&, const StateVolume&);
template void write_volume(const fs::path&, const PressureVolume&);
template void write_volume(const fs::path&, const RealVolume&);

void write_any_volume(const fs::path& payload, const AnyVolume& v) {
  std::visit([&](const auto& vol) { write_volume(payload, vol); }, v);
}

AnyVolume read_auto(const fs::path& path) {
  if (path.extension() == ".nii") return read_nifti(path);
  return read_any_volume(path);
}

}  // namespace p2c::io
