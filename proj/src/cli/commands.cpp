#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "p2c/analysis.hpp"
#include "p2c/automaton.hpp"
#include "p2c/cli.hpp"
#include "p2c/io.hpp"
#include "p2c/mapper.hpp"
#include "p2c/phantom.hpp"
#include "p2c/quantize.hpp"
#include "p2c/random.hpp"

#ifndef P2C_PRESET_DIR
#define P2C_PRESET_DIR "presets"
#endif

namespace p2c::cli {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::empty_organ: return kEmptyOrgan;
    case Errc::empty_tumor: return kEmptyTumor;
    default: return kInputError;
  }
}

unsigned resolve_threads(std::optional<unsigned> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("PIXEL2CANCER_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

fs::path resolve_preset_path(const std::string& name_or_path) {
  fs::path p(name_or_path);
  if (fs::exists(p)) return p;
  if (!p.has_extension() && !p.has_parent_path()) {
    fs::path shipped = fs::path(P2C_PRESET_DIR) / (name_or_path + ".yaml");
    if (fs::exists(shipped)) return shipped;
  }
  throw Error(Errc::io, "preset not found: " + name_or_path);
}

namespace {

class StageTimer {
 public:
  explicit StageTimer(std::vector<StageTiming>& sink) : sink_(sink) {}
  template <typename F>
  decltype(auto) operator()(const char* stage, F&& f) {
    const auto t0 = Clock::now();
    struct Record {
      std::vector<StageTiming>& sink;
      const char* stage;
      Clock::time_point t0;
      ~Record() {
        sink.push_back({stage, std::chrono::duration<double, std::milli>(Clock::now() - t0).count()});
      }
    } rec{sink_, stage, t0};
    return f();
  }

 private:
  std::vector<StageTiming>& sink_;
};

struct LoadedInputs {
  HuVolume ct;
  LabelVolume organ;
  std::optional<LabelVolume> vessels;
};

LoadedInputs load_inputs(const PipelineInputs& in) {
  LoadedInputs l{io::read_auto_as<ElementKind::HU>(in.ct), io::read_auto_as<ElementKind::Label>(in.organ_mask), {}};
  if (!in.vessel_mask.empty()) l.vessels = io::read_auto_as<ElementKind::Label>(in.vessel_mask);
  if (!l.ct.same_shape(l.organ)) {
    throw Error(Errc::shape_mismatch, "shape mismatch: " + in.ct.string() + " vs " + in.organ_mask.string());
  }
  return l;
}

QuantifiedOrgan quantize_inputs(const LoadedInputs& l, const QuantizationParams& p) {
  return l.vessels ? quantize_organ(l.ct, l.organ, *l.vessels, p) : quantize_organ(l.ct, l.organ, p);
}

RunManifest base_manifest(const char* command, const PipelineInputs& in) {
  RunManifest m;
  m.command = command;
  m.ct = fs::absolute(in.ct).string();
  m.organ_mask = fs::absolute(in.organ_mask).string();
  m.vessel_mask = in.vessel_mask.empty() ? "" : fs::absolute(in.vessel_mask).string();
  m.preset_source = in.preset_source;
  m.seed = in.preset.simulation.seed;
  m.threads = in.threads;
  m.resolved = in.preset;
  return m;
}

template <ElementKind K>
void emit(RunManifest& m, const fs::path& path, const Volume<K>& v) {
  io::write_volume(path, v);
  m.outputs.push_back(path.string());
}

std::string snapshot_name(std::uint64_t iteration) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "population_iter_%06llu.vol", static_cast<unsigned long long>(iteration));
  return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& s, const char* flag) {
  std::vector<T> out;
  for (const auto& tok : split_csv(s)) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(tok, &used);
      if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw Error(Errc::validation, std::string(flag) + ": bad list entry '" + tok + "'");
    }
  }
  return out;
}

}  // namespace

RunManifest run_quantize(const PipelineInputs& in) {
  RunManifest m = base_manifest("quantize", in);
  StageTimer timed(m.timings);
  const auto inputs = timed("load", [&] { return load_inputs(in); });
  const auto q = timed("quantize", [&] { return quantize_inputs(inputs, in.preset.quantization); });
  timed("write", [&] {
    emit(m, in.out_dir / "levels.vol", q.levels);
    emit(m, in.out_dir / "simulable.vol", q.simulable);
  });
  write_manifest(in.out_dir / "manifest.json", m);
  return m;
}

RunManifest run_synth(const PipelineInputs& in) {
  in.preset.validate();
  RunManifest m = base_manifest("synth", in);
  StageTimer timed(m.timings);
  const auto inputs = timed("load", [&] { return load_inputs(in); });
  const auto q = timed("quantize", [&] { return quantize_inputs(inputs, in.preset.quantization); });
  const auto sim = timed("simulate", [&] { return simulate(q, in.preset.simulation, in.threads); });
  const auto& pop = sim.final_state.population;
  const auto synthetic = timed("map", [&] { return map_to_ct(inputs.ct, pop, in.preset.mapping); });
  const auto mask = extract_mask(pop, in.preset.mapping);
  const auto stats = timed("stats", [&] { return compute_stats(pop, synthetic); });

  timed("write", [&] {
    emit(m, in.out_dir / "synthetic_ct.vol", synthetic);
    io::write_nifti(in.out_dir / "synthetic_ct.nii", synthetic);
    m.outputs.push_back((in.out_dir / "synthetic_ct.nii").string());
    emit(m, in.out_dir / "tumor_mask.vol", mask);
    io::write_nifti(in.out_dir / "tumor_mask.nii", mask);
    m.outputs.push_back((in.out_dir / "tumor_mask.nii").string());
    emit(m, in.out_dir / "population.vol", pop);
    for (const auto& snap : sim.snapshots) {
      emit(m, in.out_dir / "snapshots" / snapshot_name(snap.iteration), snap.population);
    }
    const fs::path stats_path = in.out_dir / "stats.txt";
    std::ofstream(stats_path) << format_stats(stats);
    m.outputs.push_back(stats_path.string());
  });
  write_manifest(in.out_dir / "manifest.json", m);
  return m;
}

BenchResult run_bench(std::int32_t size, std::int32_t steps, const std::vector<unsigned>& threads,
                      std::uint64_t seed) {
  if (size < 3) throw Error(Errc::validation, "--size must be >= 3");
  if (threads.empty()) throw Error(Errc::validation, "--threads needs at least one entry");
  const Dims dims{size, size, size};
  const QuantifiedOrgan q = random_organ(dims, seed);
  SimulationParams p;
  p.seed = seed;
  p.max_steps = steps;
  p.n_seeds = static_cast<std::int32_t>(std::max<std::size_t>(1, dims.count() / 4096));
  p.p_grow = 0.5;
  p.p_invade_by_level = {0.6, 0.4, 0.2};
  p.pressure_threshold_boundary = 4;
  p.pressure_threshold_dense = 3;
  p.p_death = 0.05;
  p.validate();

  BenchResult r;
  const TumorState start = seed_tumor(q, p.seed, p.n_seeds);
  const auto run_once = [&](unsigned w) {
    Automaton engine(q, p, w);
    TumorState st = start;
    const auto t0 = Clock::now();
    for (std::int32_t k = 0; k < steps; ++k) engine.advance(st);
    return std::pair{std::move(st), std::chrono::duration<double>(Clock::now() - t0).count()};
  };

  const TumorState expected = run_once(threads.front()).first;
  for (std::size_t i = 1; i < threads.size(); ++i) {
    if (!(run_once(threads[i]).first == expected)) {
      r.identical = false;
      return r;
    }
  }

  double base = 0.0;
  for (unsigned w : threads) {
    const double secs = run_once(w).second;
    if (r.rows.empty()) base = secs;
    r.rows.push_back({w, secs, steps / secs, base / secs});
  }
  return r;
}

namespace {

struct SynthFlags {
  std::string ct, organ_mask, vessel_mask, preset, out_dir = ".";
  std::uint64_t seed = 0;
  std::string snapshots;
  std::optional<std::int32_t> steps;
  std::optional<std::int32_t> n_seeds;
  std::optional<unsigned> threads;
};

PipelineInputs prepare(const SynthFlags& f, bool synth, std::ostream& err) {
  PipelineInputs in;
  in.ct = f.ct;
  in.organ_mask = f.organ_mask;
  in.vessel_mask = f.vessel_mask;
  in.preset_source = f.preset;
  const fs::path preset_path = resolve_preset_path(f.preset);
  auto loaded = load_preset(preset_path);
  for (const auto& w : loaded.warnings) err << "warning: " << preset_path.string() << ": " << w << '\n';
  in.preset = std::move(loaded.preset);
  if (synth) {
    auto& s = in.preset.simulation;
    s.seed = f.seed;
    in.preset.mapping.texture_seed = derive_seed(f.seed, in.preset.mapping.texture_seed);
    if (f.steps) s.max_steps = *f.steps;
    if (f.n_seeds) s.n_seeds = *f.n_seeds;
    if (!f.snapshots.empty()) s.snapshot_steps = parse_list<std::int32_t>(f.snapshots, "--snapshots");
    // Preset snapshots beyond an overridden step budget are dropped rather than rejected.
    if (f.steps && f.snapshots.empty()) {
      std::erase_if(s.snapshot_steps, [&](std::int32_t k) { return k > s.max_steps; });
    }
    in.preset.validate();
  }
  in.threads = resolve_threads(f.threads);
  in.out_dir = f.out_dir;
  return in;
}

void print_outputs(const RunManifest& m, std::ostream& out) {
  for (const auto& o : m.outputs) out << "wrote " << o << '\n';
  for (const auto& t : m.timings) out << "time." << t.stage << "_ms = " << t.ms << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cellular-automaton tumor synthesis for CT volumes", "pixel2cancer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", P2C_VERSION);

  SynthFlags qf;
  auto* quantize = app.add_subcommand("quantize", "Quantize an organ into hardness levels 0-4");
  quantize->add_option("--ct", qf.ct, "CT volume (.vol or .nii, int16 HU)")->required();
  quantize->add_option("--organ-mask", qf.organ_mask, "Binary organ mask (.vol or .nii)")->required();
  quantize->add_option("--preset", qf.preset, "Preset file or shipped name (liver, pancreas, kidney)")->required();
  quantize->add_option("--vessel-mask", qf.vessel_mask, "Explicit vessel mask; replaces the HU threshold");
  quantize->add_option("--out-dir", qf.out_dir, "Output directory");

  SynthFlags sf;
  auto* synth = app.add_subcommand("synth", "Quantize, grow a tumor, and map it into the CT");
  synth->add_option("--ct", sf.ct, "CT volume (.vol or .nii, int16 HU)")->required();
  synth->add_option("--organ-mask", sf.organ_mask, "Binary organ mask (.vol or .nii)")->required();
  synth->add_option("--preset", sf.preset, "Preset file or shipped name (liver, pancreas, kidney)")->required();
  synth->add_option("--seed", sf.seed, "Run seed")->required();
  synth->add_option("--snapshots", sf.snapshots, "Comma-separated iterations to export, e.g. 10,50");
  synth->add_option("--steps", sf.steps, "Override the preset's max_steps");
  synth->add_option("--n-seeds", sf.n_seeds, "Override the preset's number of seed voxels");
  synth->add_option("--threads", sf.threads, "Worker threads (default: $PIXEL2CANCER_THREADS or all cores)");
  synth->add_option("--vessel-mask", sf.vessel_mask, "Explicit vessel mask; replaces the HU threshold");
  synth->add_option("--out-dir", sf.out_dir, "Output directory");

  std::string population_path, synthetic_path, csv_path;
  auto* stats = app.add_subcommand("stats", "Size, intensity and roundness of a synthetic tumor");
  stats->add_option("--population", population_path, "Population map (.vol, kind state)")->required();
  stats->add_option("--synthetic-ct", synthetic_path, "Synthetic CT (.vol or .nii)")->required();
  stats->add_option("--csv", csv_path, "Append a row to this CSV file");

  std::int32_t bench_size = 64, bench_steps = 20;
  std::string bench_threads;
  std::uint64_t bench_seed = 1234;
  auto* bench = app.add_subcommand("bench", "Thread-scaling benchmark of the stepping kernel");
  bench->add_option("--size", bench_size, "Edge length of the cubic workload");
  bench->add_option("--steps", bench_steps, "Steps per timed run");
  bench->add_option("--threads", bench_threads, "Comma-separated worker counts; the first is the baseline");
  bench->add_option("--seed", bench_seed, "Workload seed");

  std::int32_t ph_size = 64;
  std::vector<double> ph_spacing{1.0, 1.0, 1.0};
  std::uint64_t ph_seed = 0;
  std::string ph_out = ".";
  bool ph_nifti = false;
  auto* phantom = app.add_subcommand("phantom", "Write a synthetic CT + organ mask for trying the pipeline");
  phantom->add_option("--size", ph_size, "Edge length in voxels");
  phantom->add_option("--spacing", ph_spacing, "Voxel spacing in mm (sx,sy,sz)")->delimiter(',')->expected(3);
  phantom->add_option("--seed", ph_seed, "Noise seed");
  phantom->add_option("--out-dir", ph_out, "Output directory");
  phantom->add_flag("--nifti", ph_nifti, "Also write .nii copies");

  std::string manifest_path, replay_out;
  auto* replay = app.add_subcommand("replay", "Re-run a quantize/synth run from its manifest");
  replay->add_option("--manifest", manifest_path, "manifest.json of a previous run")->required();
  replay->add_option("--out-dir", replay_out, "Output directory")->required();
  std::optional<unsigned> replay_threads;
  replay->add_option("--threads", replay_threads, "Worker threads");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) argv_rev.pop_back();  // program name
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << P2C_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (quantize->parsed()) {
      print_outputs(run_quantize(prepare(qf, false, err)), out);
    } else if (synth->parsed()) {
      print_outputs(run_synth(prepare(sf, true, err)), out);
    } else if (stats->parsed()) {
      const auto pop = io::read_volume<ElementKind::State>(population_path);
      const auto ct = io::read_auto_as<ElementKind::HU>(synthetic_path);
      const auto s = compute_stats(pop, ct);
      out << format_stats(s);
      if (!csv_path.empty()) {
        const bool fresh = !fs::exists(csv_path) || fs::file_size(csv_path) == 0;
        std::ofstream csv(csv_path, std::ios::app);
        if (!csv) throw Error(Errc::io, "cannot append to " + csv_path);
        if (fresh) csv << kStatsCsvHeader << '\n';
        csv << stats_csv_row(s) << '\n';
      }
    } else if (bench->parsed()) {
      std::vector<unsigned> counts = bench_threads.empty()
                                         ? std::vector<unsigned>{1u, std::max(1u, std::thread::hardware_concurrency())}
                                         : parse_list<unsigned>(bench_threads, "--threads");
      if (std::find(counts.begin(), counts.end(), 0u) != counts.end()) {
        throw Error(Errc::validation, "--threads entries must be >= 1");
      }
      out << "workload: random organ " << bench_size << "^3, " << bench_steps << " steps, seed " << bench_seed
          << ", hardware threads " << std::thread::hardware_concurrency() << '\n';
      const auto r = run_bench(bench_size, bench_steps, counts, bench_seed);
      if (!r.identical) {
        err << "error: final states differ across thread counts\n";
        return kDeterminismViolation;
      }
      out << "equality check: identical across thread counts\n";
      for (const auto& row : r.rows) {
        char line[160];
        std::snprintf(line, sizeof line, "threads=%u seconds=%.4f steps_per_second=%.3f speedup=%.2f\n", row.threads,
                      row.seconds, row.steps_per_second, row.speedup);
        out << line;
      }
    } else if (phantom->parsed()) {
      const Spacing sp{ph_spacing[0], ph_spacing[1], ph_spacing[2]};
      const auto ph = make_phantom({ph_size, ph_size, ph_size}, sp, ph_seed);
      const fs::path dir(ph_out);
      io::write_volume(dir / "ct.vol", ph.ct);
      io::write_volume(dir / "organ_mask.vol", ph.organ);
      out << "wrote " << (dir / "ct.vol").string() << "\nwrote " << (dir / "organ_mask.vol").string() << '\n';
      if (ph_nifti) {
        io::write_nifti(dir / "ct.nii", ph.ct);
        io::write_nifti(dir / "organ_mask.nii", ph.organ);
        out << "wrote " << (dir / "ct.nii").string() << "\nwrote " << (dir / "organ_mask.nii").string() << '\n';
      }
    } else if (replay->parsed()) {
      const RunManifest m = read_manifest(manifest_path);
      PipelineInputs in;
      in.ct = m.ct;
      in.organ_mask = m.organ_mask;
      in.vessel_mask = m.vessel_mask;
      in.preset_source = m.preset_source;
      in.preset = m.resolved;
      in.threads = resolve_threads(replay_threads);
      in.out_dir = replay_out;
      if (m.command == "synth") {
        print_outputs(run_synth(in), out);
      } else if (m.command == "quantize") {
        print_outputs(run_quantize(in), out);
      } else {
        throw Error(Errc::validation, "cannot replay command '" + m.command + "'");
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace p2c::cli
