"""Python access to the stochlab numerics and its verification suites."""

import json as _json

from ._stochlab import (
    bessel_density,
    cardy_probability,
    extended_sine_kernel,
    fomin,
    hausdorff_dimension,
    kernel_K1,
    kernel_K2,
    lattice_kernel,
    loop_erase,
    max_cdf_h1,
    mgue_det,
    moment_h1,
    phase_name,
    sine_kernel,
)
from ._stochlab import run_cli as _run_cli


def run(*args):
    """Run a CLI subcommand in-process.

    Returns (exit_code, record) where record is the parsed run record, or
    None when the subcommand wrote it to a file or failed before running.
    """
    code, out, err = _run_cli([str(a) for a in args])
    return code, (_json.loads(out) if out else None)


__all__ = [
    "bessel_density",
    "cardy_probability",
    "extended_sine_kernel",
    "fomin",
    "hausdorff_dimension",
    "kernel_K1",
    "kernel_K2",
    "lattice_kernel",
    "loop_erase",
    "max_cdf_h1",
    "mgue_det",
    "moment_h1",
    "phase_name",
    "run",
    "sine_kernel",
]
