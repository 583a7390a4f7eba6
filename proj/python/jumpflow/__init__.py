from ._core import (
    FlowSolver,
    Grid2D,
    LevelSet,
    Shape,
    bicgstab_csr,
    classify_counts,
    config_hash_text,
    correction_sum,
    lagrange_interpolate,
    locate_crossing,
    one_sided_first,
    one_sided_second_grid,
    one_sided_second_interface,
    power_spectrum,
    run_parabolic,
    strouhal,
)

__all__ = [
    "FlowSolver",
    "Grid2D",
    "LevelSet",
    "Shape",
    "bicgstab_csr",
    "classify_counts",
    "config_hash_text",
    "correction_sum",
    "lagrange_interpolate",
    "locate_crossing",
    "one_sided_first",
    "one_sided_second_grid",
    "one_sided_second_interface",
    "power_spectrum",
    "run_parabolic",
    "strouhal",
]
