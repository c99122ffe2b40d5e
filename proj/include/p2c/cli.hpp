#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "p2c/error.hpp"
#include "p2c/preset.hpp"

namespace p2c::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kEmptyOrgan = 3,
  kEmptyTumor = 4,
  kDeterminismViolation = 5,
};

int exit_code_for(Errc code) noexcept;

/// Parses argv (argv[0] is the program name) and runs one subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// --threads, else PIXEL2CANCER_THREADS, else hardware concurrency.
unsigned resolve_threads(std::optional<unsigned> flag);

/// A bare name such as "liver" resolves to the shipped preset file.
std::filesystem::path resolve_preset_path(const std::string& name_or_path);

struct StageTiming {
  std::string stage;
  double ms = 0.0;
};

/// Reproducibility record written next to every run's outputs.
struct RunManifest {
  std::string command;
  std::string ct;
  std::string organ_mask;
  std::string vessel_mask;  // empty when the HU threshold is used
  std::string preset_source;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  Preset resolved;
  std::vector<std::string> outputs;
  std::vector<StageTiming> timings;
};

/// Writes via a temporary file and rename.
void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

struct PipelineInputs {
  std::filesystem::path ct;
  std::filesystem::path organ_mask;
  std::filesystem::path vessel_mask;
  std::string preset_source;
  Preset preset;  // fully resolved: seeds and overrides already applied
  unsigned threads = 1;
  std::filesystem::path out_dir;
};

RunManifest run_quantize(const PipelineInputs& in);
RunManifest run_synth(const PipelineInputs& in);

struct BenchRow {
  unsigned threads = 1;
  double seconds = 0.0;
  double steps_per_second = 0.0;
  double speedup = 1.0;
};

struct BenchResult {
  bool identical = true;
  std::vector<BenchRow> rows;
};

/// Checks bit-equality of the final state across thread counts, then times
/// each thread count on a random organ of size^3 voxels.
BenchResult run_bench(std::int32_t size, std::int32_t steps, const std::vector<unsigned>& threads, std::uint64_t seed);

}  // namespace p2c::cli
