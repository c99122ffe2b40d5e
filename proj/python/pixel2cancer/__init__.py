"""Cellular-automaton tumor synthesis for CT volumes.

Volumes are numpy arrays shaped (z, y, x). Errors raise ``pixel2cancer.Error``
(a ``ValueError``) whose ``code`` attribute names the failure class.
"""

from ._core import (
    Error,
    MappingParams,
    Preset,
    QuantizationParams,
    SimulationParams,
    TumorStats,
    __version__,
    compute_stats,
    extract_mask,
    generate_texture,
    load_preset,
    make_phantom,
    map_to_ct,
    parse_preset,
    quantize_organ,
    read_volume,
    seed_tumor,
    simulate,
    step,
    step_reference,
    write_volume,
)

__all__ = [
    "Error",
    "MappingParams",
    "Preset",
    "QuantizationParams",
    "SimulationParams",
    "TumorStats",
    "__version__",
    "compute_stats",
    "extract_mask",
    "generate_texture",
    "load_preset",
    "make_phantom",
    "map_to_ct",
    "parse_preset",
    "quantize_organ",
    "read_volume",
    "seed_tumor",
    "simulate",
    "step",
    "step_reference",
    "write_volume",
]
