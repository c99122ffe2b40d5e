#include "p2c/preset.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace p2c {

void Preset::validate() const {
  quantization.validate();
  simulation.validate();
  mapping.validate();
  if (!(mapping.tumor_hu_mean < quantization.hu_high)) {
    throw Error(Errc::validation, "mapping.tumor_hu_mean must be below quantization.hu_high (tumors are hypo-intense)");
  }
}

namespace {

// Absent keys and explicit nulls both fall back to the default.
bool present(const YAML::Node& n) { return n.IsDefined() && !n.IsNull(); }

struct Field {
  const char* section;
  const char* key;
  std::function<void(const YAML::Node&, Preset&)> assign;
};

template <typename Group, typename T>
Field make_field(const char* section, const char* key, Group Preset::*group, T Group::*member) {
  return {section, key, [=](const YAML::Node& n, Preset& p) { (p.*group).*member = n.as<T>(); }};
}

std::vector<Field> fields() {
  using Q = QuantizationParams;
  using S = SimulationParams;
  using M = MappingParams;
  return {
      make_field("quantization", "hu_low", &Preset::quantization, &Q::hu_low),
      make_field("quantization", "hu_high", &Preset::quantization, &Q::hu_high),
      make_field("quantization", "vessel_hu_threshold", &Preset::quantization, &Q::vessel_hu_threshold),
      make_field("quantization", "boundary_thickness", &Preset::quantization, &Q::boundary_thickness),
      make_field("simulation", "seed", &Preset::simulation, &S::seed),
      make_field("simulation", "max_steps", &Preset::simulation, &S::max_steps),
      make_field("simulation", "n_seeds", &Preset::simulation, &S::n_seeds),
      make_field("simulation", "p_grow", &Preset::simulation, &S::p_grow),
      {"simulation", "p_invade",
       [](const YAML::Node& n, Preset& p) {
         const auto v = n.as<std::vector<double>>();
         if (v.size() != 3) throw Error(Errc::validation, "simulation.p_invade needs exactly 3 values (levels 1-3)");
         p.simulation.p_invade_by_level = {v[0], v[1], v[2]};
       }},
      make_field("simulation", "pressure_threshold_boundary", &Preset::simulation, &S::pressure_threshold_boundary),
      make_field("simulation", "pressure_threshold_dense", &Preset::simulation, &S::pressure_threshold_dense),
      make_field("simulation", "p_death", &Preset::simulation, &S::p_death),
      make_field("simulation", "snapshot_steps", &Preset::simulation, &S::snapshot_steps),
      make_field("mapping", "tumor_hu_mean", &Preset::mapping, &M::tumor_hu_mean),
      make_field("mapping", "tumor_hu_std", &Preset::mapping, &M::tumor_hu_std),
      make_field("mapping", "necrosis_hu_mean", &Preset::mapping, &M::necrosis_hu_mean),
      make_field("mapping", "necrosis_hu_std", &Preset::mapping, &M::necrosis_hu_std),
      make_field("mapping", "texture_seed", &Preset::mapping, &M::texture_seed),
      make_field("mapping", "mask_threshold", &Preset::mapping, &M::mask_threshold),
  };
}

}  // namespace

PresetLoad parse_preset(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(Errc::validation, source + ": not valid YAML: " + e.what());
  }
  if (!root.IsNull() && !root.IsMap()) throw Error(Errc::validation, source + ": top level must be a mapping");

  PresetLoad out;
  auto& warn = out.warnings;

  const YAML::Node organ = root.IsMap() ? root["organ"] : YAML::Node();
  if (present(organ)) {
    out.preset.organ = organ.as<std::string>();
  } else {
    warn.push_back("organ: missing, using default '" + out.preset.organ + "'");
  }

  const std::set<std::string> sections{"quantization", "simulation", "mapping"};
  if (root.IsMap()) {
    for (const auto& kv : root) {
      const auto key = kv.first.as<std::string>();
      if (key != "organ" && !sections.count(key)) warn.push_back(key + ": unknown key ignored");
    }
  }

  const auto all = fields();
  for (const auto& section : sections) {
    const YAML::Node node = root.IsMap() ? root[section] : YAML::Node();
    if (!present(node)) continue;
    if (!node.IsMap()) throw Error(Errc::validation, source + ": " + section + " must be a mapping");
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      const bool known = std::any_of(all.begin(), all.end(),
                                     [&](const Field& f) { return section == f.section && key == f.key; });
      if (!known) warn.push_back(section + "." + key + ": unknown key ignored");
    }
  }

  for (const auto& f : all) {
    const std::string name = std::string(f.section) + "." + f.key;
    const YAML::Node section = root.IsMap() ? root[f.section] : YAML::Node();
    const YAML::Node value = section.IsMap() ? section[f.key] : YAML::Node();
    if (!present(value)) {
      warn.push_back(name + ": missing, using default");
      continue;
    }
    try {
      f.assign(value, out.preset);
    } catch (const YAML::Exception&) {
      throw Error(Errc::validation, source + ": " + name + " has the wrong type");
    }
  }

  try {
    out.preset.validate();
  } catch (const Error& e) {
    throw Error(Errc::validation, source + ": " + e.what());
  }
  return out;
}

PresetLoad load_preset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open preset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_preset(buf.str(), path.string());
}

std::string preset_to_yaml(const Preset& p) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "organ" << YAML::Value << p.organ;

  const auto& q = p.quantization;
  out << YAML::Key << "quantization" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "hu_low" << YAML::Value << q.hu_low;
  out << YAML::Key << "hu_high" << YAML::Value << q.hu_high;
  out << YAML::Key << "vessel_hu_threshold" << YAML::Value << q.vessel_hu_threshold;
  out << YAML::Key << "boundary_thickness" << YAML::Value << q.boundary_thickness;
  out << YAML::EndMap;

  const auto& s = p.simulation;
  out << YAML::Key << "simulation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::Key << "max_steps" << YAML::Value << s.max_steps;
  out << YAML::Key << "n_seeds" << YAML::Value << s.n_seeds;
  out << YAML::Key << "p_grow" << YAML::Value << s.p_grow;
  out << YAML::Key << "p_invade" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double v : s.p_invade_by_level) out << v;
  out << YAML::EndSeq;
  out << YAML::Key << "pressure_threshold_boundary" << YAML::Value << s.pressure_threshold_boundary;
  out << YAML::Key << "pressure_threshold_dense" << YAML::Value << s.pressure_threshold_dense;
  out << YAML::Key << "p_death" << YAML::Value << s.p_death;
  out << YAML::Key << "snapshot_steps" << YAML::Value << YAML::Flow << s.snapshot_steps;
  out << YAML::EndMap;

  const auto& m = p.mapping;
  out << YAML::Key << "mapping" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tumor_hu_mean" << YAML::Value << m.tumor_hu_mean;
  out << YAML::Key << "tumor_hu_std" << YAML::Value << m.tumor_hu_std;
  out << YAML::Key << "necrosis_hu_mean" << YAML::Value << m.necrosis_hu_mean;
  out << YAML::Key << "necrosis_hu_std" << YAML::Value << m.necrosis_hu_std;
  out << YAML::Key << "texture_seed" << YAML::Value << m.texture_seed;
  out << YAML::Key << "mask_threshold" << YAML::Value << m.mask_threshold;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace p2c
