#include <fstream>
#include <nlohmann/json.hpp>

#include "p2c/cli.hpp"

namespace p2c::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void write_manifest(const fs::path& path, const RunManifest& m) {
  ordered_json j;
  j["tool"] = "pixel2cancer";
  j["version"] = P2C_VERSION;
  j["command"] = m.command;
  j["inputs"] = {{"ct", m.ct}, {"organ_mask", m.organ_mask}, {"vessel_mask", m.vessel_mask}};
  j["preset"] = {{"source", m.preset_source}, {"organ", m.resolved.organ}};
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  j["resolved_preset"] = preset_to_yaml(m.resolved);
  j["outputs"] = m.outputs;
  ordered_json t = ordered_json::object();
  for (const auto& s : m.timings) t[s.stage] = s.ms;
  j["timings_ms"] = t;

  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write " + tmp.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error(Errc::io, "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

RunManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open manifest " + path.string());
  ordered_json j;
  try {
    in >> j;
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.ct = j.at("inputs").at("ct").get<std::string>();
    m.organ_mask = j.at("inputs").at("organ_mask").get<std::string>();
    m.vessel_mask = j.at("inputs").value("vessel_mask", "");
    m.preset_source = j.at("preset").at("source").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.threads = j.value("threads", 1u);
    m.resolved = parse_preset(j.at("resolved_preset").get<std::string>(), path.string()).preset;
    m.outputs = j.value("outputs", std::vector<std::string>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::corrupt_file, path.string() + ": " + e.what());
  }
}

}  // namespace p2c::cli
