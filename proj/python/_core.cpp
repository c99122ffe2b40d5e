// Python bindings. Volumes cross the boundary as C-contiguous numpy arrays
// shaped (z, y, x), which is exactly the engine's x-fastest layout.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <cstring>
#include <optional>

#include "p2c/analysis.hpp"
#include "p2c/automaton.hpp"
#include "p2c/io.hpp"
#include "p2c/mapper.hpp"
#include "p2c/phantom.hpp"
#include "p2c/preset.hpp"
#include "p2c/quantize.hpp"

namespace py = pybind11;
using namespace p2c;

namespace {

using SpacingTuple = std::tuple<double, double, double>;

Spacing to_spacing(const SpacingTuple& t) {
  const Spacing s{std::get<0>(t), std::get<1>(t), std::get<2>(t)};
  validate_spacing(s);
  return s;
}

SpacingTuple from_spacing(const Spacing& s) { return {s.sx, s.sy, s.sz}; }

template <ElementKind K>
Volume<K> to_volume(const py::array& in, const Spacing& spacing, const char* what) {
  using T = element_t<K>;
  const auto arr = py::array_t<T, py::array::c_style | py::array::forcecast>::ensure(in);
  if (!arr) throw py::type_error(std::string(what) + ": cannot convert to a numeric array");
  if (arr.ndim() != 3) throw py::value_error(std::string(what) + ": expected a 3-D array shaped (z, y, x)");
  const Dims d{static_cast<std::int32_t>(arr.shape(2)), static_cast<std::int32_t>(arr.shape(1)),
               static_cast<std::int32_t>(arr.shape(0))};
  validate_dims(d);
  std::vector<T> data(arr.data(), arr.data() + arr.size());
  Volume<K> v(d, spacing, std::move(data));
  validate_values(v);
  return v;
}

template <ElementKind K>
py::array_t<element_t<K>> to_numpy(const Volume<K>& v) {
  const Dims& d = v.dims();
  py::array_t<element_t<K>> out({static_cast<py::ssize_t>(d.nz), static_cast<py::ssize_t>(d.ny),
                                 static_cast<py::ssize_t>(d.nx)});
  std::copy(v.data().begin(), v.data().end(), out.mutable_data());
  return out;
}

QuantifiedOrgan to_organ(const py::array& levels, const py::array& simulable) {
  QuantifiedOrgan q{to_volume<ElementKind::Level>(levels, {}, "levels"),
                    to_volume<ElementKind::Label>(simulable, {}, "simulable")};
  q.validate();
  return q;
}

TumorState to_state(const py::array& population, const py::array& pressure, std::uint64_t iteration) {
  return {to_volume<ElementKind::State>(population, {}, "population"),
          to_volume<ElementKind::Pressure>(pressure, {}, "pressure"), iteration};
}

py::tuple state_tuple(const TumorState& s) {
  return py::make_tuple(to_numpy(s.population), to_numpy(s.pressure), s.iteration);
}

py::object any_to_numpy(const AnyVolume& any) {
  return std::visit([](const auto& v) -> py::object { return to_numpy(v); }, any);
}

void write_array(const std::filesystem::path& path, const py::array& arr, const SpacingTuple& spacing,
                 std::optional<std::string> kind) {
  const Spacing s = to_spacing(spacing);
  ElementKind k;
  if (kind) {
    k = kind_from_name(*kind);
  } else {
    const auto dt = arr.dtype();
    if (dt.is(py::dtype::of<std::int16_t>())) k = ElementKind::HU;
    else if (dt.is(py::dtype::of<std::uint8_t>())) k = ElementKind::Label;
    else if (dt.is(py::dtype::of<std::int8_t>())) k = ElementKind::State;
    else if (dt.is(py::dtype::of<std::uint16_t>())) k = ElementKind::Pressure;
    else if (dt.is(py::dtype::of<float>())) k = ElementKind::Real;
    else throw py::type_error("write_volume: cannot infer kind from dtype " + std::string(py::str(dt)) +
                              "; pass kind=");
  }
  switch (k) {
    case ElementKind::HU: io::write_volume(path, to_volume<ElementKind::HU>(arr, s, "volume")); break;
    case ElementKind::Label: io::write_volume(path, to_volume<ElementKind::Label>(arr, s, "volume")); break;
    case ElementKind::Level: io::write_volume(path, to_volume<ElementKind::Level>(arr, s, "volume")); break;
    case ElementKind::State: io::write_volume(path, to_volume<ElementKind::State>(arr, s, "volume")); break;
    case ElementKind::Pressure: io::write_volume(path, to_volume<ElementKind::Pressure>(arr, s, "volume")); break;
    case ElementKind::Real: io::write_volume(path, to_volume<ElementKind::Real>(arr, s, "volume")); break;
  }
}

const char* code_name(Errc c) {
  switch (c) {
    case Errc::shape_mismatch: return "shape_mismatch";
    case Errc::corrupt_file: return "corrupt_file";
    case Errc::unsupported_format: return "unsupported_format";
    case Errc::validation: return "validation";
    case Errc::empty_organ: return "empty_organ";
    case Errc::empty_tumor: return "empty_tumor";
    case Errc::io: return "io";
  }
  return "unknown";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cellular-automaton tumor synthesis for CT volumes";
  m.attr("__version__") = P2C_VERSION;

  // p2c::Error surfaces as pixel2cancer.Error (a ValueError) with a `code`
  // attribute such as "empty_organ".
  static PyObject* error_type = PyErr_NewException("pixel2cancer.Error", PyExc_ValueError, nullptr);
  m.attr("Error") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(error_type)(e.what());
      err.attr("code") = code_name(e.code());
      PyErr_SetObject(error_type, err.ptr());
    }
  });

  py::class_<QuantizationParams>(m, "QuantizationParams")
      .def(py::init<>())
      .def_readwrite("hu_low", &QuantizationParams::hu_low)
      .def_readwrite("hu_high", &QuantizationParams::hu_high)
      .def_readwrite("vessel_hu_threshold", &QuantizationParams::vessel_hu_threshold)
      .def_readwrite("boundary_thickness", &QuantizationParams::boundary_thickness)
      .def("validate", &QuantizationParams::validate);

  py::class_<SimulationParams>(m, "SimulationParams")
      .def(py::init<>())
      .def_readwrite("seed", &SimulationParams::seed)
      .def_readwrite("max_steps", &SimulationParams::max_steps)
      .def_readwrite("n_seeds", &SimulationParams::n_seeds)
      .def_readwrite("p_grow", &SimulationParams::p_grow)
      .def_readwrite("p_invade_by_level", &SimulationParams::p_invade_by_level)
      .def_readwrite("pressure_threshold_boundary", &SimulationParams::pressure_threshold_boundary)
      .def_readwrite("pressure_threshold_dense", &SimulationParams::pressure_threshold_dense)
      .def_readwrite("p_death", &SimulationParams::p_death)
      .def_readwrite("snapshot_steps", &SimulationParams::snapshot_steps)
      .def("validate", &SimulationParams::validate);

  py::class_<MappingParams>(m, "MappingParams")
      .def(py::init<>())
      .def_readwrite("tumor_hu_mean", &MappingParams::tumor_hu_mean)
      .def_readwrite("tumor_hu_std", &MappingParams::tumor_hu_std)
      .def_readwrite("necrosis_hu_mean", &MappingParams::necrosis_hu_mean)
      .def_readwrite("necrosis_hu_std", &MappingParams::necrosis_hu_std)
      .def_readwrite("texture_seed", &MappingParams::texture_seed)
      .def_readwrite("mask_threshold", &MappingParams::mask_threshold)
      .def("validate", &MappingParams::validate);

  py::class_<Preset>(m, "Preset")
      .def(py::init<>())
      .def_readwrite("organ", &Preset::organ)
      .def_readwrite("quantization", &Preset::quantization)
      .def_readwrite("simulation", &Preset::simulation)
      .def_readwrite("mapping", &Preset::mapping)
      .def("validate", &Preset::validate)
      .def("to_yaml", [](const Preset& p) { return preset_to_yaml(p); });

  py::class_<TumorStats>(m, "TumorStats")
      .def_readonly("voxel_count", &TumorStats::voxel_count)
      .def_readonly("volume_mm3", &TumorStats::volume_mm3)
      .def_readonly("equivalent_diameter_mm", &TumorStats::equivalent_diameter_mm)
      .def_readonly("sphericity", &TumorStats::sphericity)
      .def_readonly("surface_area_mm2", &TumorStats::surface_area_mm2)
      .def_readonly("mean_hu", &TumorStats::mean_hu)
      .def_readonly("dead_fraction", &TumorStats::dead_fraction)
      .def("__str__", [](const TumorStats& s) { return format_stats(s); });

  m.def(
      "load_preset",
      [](const std::filesystem::path& path) {
        auto r = load_preset(path);
        return py::make_tuple(r.preset, r.warnings);
      },
      py::arg("path"), "Returns (Preset, warnings).");
  m.def(
      "parse_preset",
      [](const std::string& text) {
        auto r = parse_preset(text);
        return py::make_tuple(r.preset, r.warnings);
      },
      py::arg("text"));

  m.def(
      "read_volume",
      [](const std::filesystem::path& path) {
        const AnyVolume any = io::read_auto(path);
        const Spacing sp = std::visit([](const auto& v) { return v.spacing(); }, any);
        return py::make_tuple(any_to_numpy(any), from_spacing(sp), std::string(kind_name(kind_of(any))));
      },
      py::arg("path"), "Returns (array, spacing, kind) for a .vol or .nii file.");
  m.def("write_volume", &write_array, py::arg("path"), py::arg("array"), py::arg("spacing") = SpacingTuple{1, 1, 1},
        py::arg("kind") = py::none(),
        "Writes raw .vol + .volhdr; kind defaults from the dtype (uint8 is written as 'label').");

  m.def(
      "quantize_organ",
      [](const py::array& hu, const py::array& organ_mask, const QuantizationParams& p,
         std::optional<py::array> vessel_mask) {
        const auto h = to_volume<ElementKind::HU>(hu, {}, "hu");
        const auto o = to_volume<ElementKind::Label>(organ_mask, {}, "organ_mask");
        const QuantifiedOrgan q = vessel_mask
                                      ? quantize_organ(h, o, to_volume<ElementKind::Label>(*vessel_mask, {}, "vessel_mask"), p)
                                      : quantize_organ(h, o, p);
        return py::make_tuple(to_numpy(q.levels), to_numpy(q.simulable));
      },
      py::arg("hu"), py::arg("organ_mask"), py::arg("params") = QuantizationParams{},
      py::arg("vessel_mask") = py::none(), "Returns (levels, simulable).");

  m.def(
      "seed_tumor",
      [](const py::array& levels, const py::array& simulable, std::uint64_t seed, std::int32_t n_seeds) {
        return state_tuple(seed_tumor(to_organ(levels, simulable), seed, n_seeds));
      },
      py::arg("levels"), py::arg("simulable"), py::arg("seed"), py::arg("n_seeds") = 1,
      "Returns (population, pressure, iteration).");

  const auto bind_step = [&m](const char* name, bool reference) {
    m.def(
        name,
        [reference](const py::array& population, const py::array& pressure, std::uint64_t iteration,
                    const py::array& levels, const py::array& simulable, const SimulationParams& p, unsigned workers) {
          const auto q = to_organ(levels, simulable);
          const auto st = to_state(population, pressure, iteration);
          check_state(st, q);
          TumorState next;
          {
            py::gil_scoped_release release;
            next = reference ? step_reference(st, q, p) : step(st, q, p, workers);
          }
          return state_tuple(next);
        },
        py::arg("population"), py::arg("pressure"), py::arg("iteration"), py::arg("levels"), py::arg("simulable"),
        py::arg("params"), py::arg("workers") = 0u, "Returns the next (population, pressure, iteration).");
  };
  bind_step("step", false);
  bind_step("step_reference", true);

  m.def(
      "simulate",
      [](const py::array& levels, const py::array& simulable, const SimulationParams& p, unsigned workers) {
        const auto q = to_organ(levels, simulable);
        SimulationResult r;
        {
          py::gil_scoped_release release;
          r = simulate(q, p, workers);
        }
        py::list snaps;
        for (const auto& s : r.snapshots) snaps.append(state_tuple(s));
        return py::make_tuple(state_tuple(r.final_state), snaps);
      },
      py::arg("levels"), py::arg("simulable"), py::arg("params"), py::arg("workers") = 0u,
      "Returns (final_state, snapshots); each state is (population, pressure, iteration).");

  m.def(
      "generate_texture",
      [](const std::tuple<int, int, int>& shape_zyx, double mean, double stddev, std::uint64_t seed) {
        const Dims d{std::get<2>(shape_zyx), std::get<1>(shape_zyx), std::get<0>(shape_zyx)};
        validate_dims(d);
        return to_numpy(generate_texture(d, mean, stddev, seed));
      },
      py::arg("shape"), py::arg("mean"), py::arg("std"), py::arg("seed"));

  m.def(
      "map_to_ct",
      [](const py::array& hu, const py::array& population, const MappingParams& p) {
        return to_numpy(map_to_ct(to_volume<ElementKind::HU>(hu, {}, "hu"),
                                  to_volume<ElementKind::State>(population, {}, "population"), p));
      },
      py::arg("hu"), py::arg("population"), py::arg("params") = MappingParams{});

  m.def(
      "extract_mask",
      [](const py::array& population, const MappingParams& p) {
        return to_numpy(extract_mask(to_volume<ElementKind::State>(population, {}, "population"), p));
      },
      py::arg("population"), py::arg("params") = MappingParams{});

  m.def(
      "compute_stats",
      [](const py::array& population, const py::array& synthetic_hu, const SpacingTuple& spacing) {
        const Spacing s = to_spacing(spacing);
        return compute_stats(to_volume<ElementKind::State>(population, s, "population"),
                             to_volume<ElementKind::HU>(synthetic_hu, s, "synthetic_hu"), s);
      },
      py::arg("population"), py::arg("synthetic_hu"), py::arg("spacing") = SpacingTuple{1, 1, 1});

  m.def(
      "make_phantom",
      [](int size, const SpacingTuple& spacing, std::uint64_t seed) {
        const auto ph = make_phantom({size, size, size}, to_spacing(spacing), seed);
        return py::make_tuple(to_numpy(ph.ct), to_numpy(ph.organ));
      },
      py::arg("size"), py::arg("spacing") = SpacingTuple{1, 1, 1}, py::arg("seed") = 0,
      "Returns (ct, organ_mask) for a synthetic abdomen of size^3 voxels.");
}
