"""Decide and construct low-temperature state transitions.

Matrices are numpy arrays. Structured results are returned as dicts in the
same layout the command-line tool prints.
"""

import json

import numpy as np

from . import _core
from ._core import CoolmapError, construct_utcs, thermo_majorizes, ut_majorizes

__all__ = [
    "CoolmapError",
    "apply_map",
    "check",
    "construct_utcs",
    "dilate",
    "fuzz",
    "gp_two_level",
    "kraus_operators",
    "monotones",
    "region",
    "synthesize",
    "thermo_majorizes",
    "ut_majorizes",
]


def _c(a):
    return np.asarray(a, dtype=complex)


def check(rho, sigma, tol=None, grid=33):
    """Decision dict with `feasible`, and `certificate` or `violation`."""
    return json.loads(_core.check(_c(rho), _c(sigma), tol, grid))


def synthesize(rho, sigma, tol=None, grid=33):
    """Decision dict; when feasible it also holds `map` and `round_trip_deviation`."""
    return json.loads(_core.synthesize(_c(rho), _c(sigma), tol, grid))


def kraus_operators(cooling_map):
    """Kraus operators of a cooling map given as the dict from `synthesize`."""
    return _core.kraus_operators(json.dumps(cooling_map))


def apply_map(cooling_map, rho):
    return _core.apply_map(json.dumps(cooling_map), _c(rho))


def dilate(map_file, samples=16, seed=1):
    """Thermal dilation of a single map or rational mixture (map file dict)."""
    return json.loads(_core.dilate(json.dumps(map_file), samples, seed))


def monotones(rho):
    return json.loads(_core.monotones(_c(rho)))


def gp_two_level(rho, sigma):
    """Kraus operators of a Gibbs-preserving qubit channel taking rho to sigma."""
    return _core.gp_two_level(_c(rho), _c(sigma))


def region(x, samples=10000, seed=1, raw=False):
    """Rows (model, x, y, beta, cooling_boundary, gp_boundary) of the region scan."""
    lines = _core.region_csv(x, samples, seed, raw).splitlines()[1:]
    rows = []
    for line in lines:
        model, *rest = line.split(",")
        rows.append((model, *map(float, rest)))
    return rows


def fuzz(dim, trials=1000, seed=1, n_diag=0):
    """Summary dict followed by one dict per violation."""
    lines = _core.fuzz(dim, trials, seed, n_diag).splitlines()
    records = [json.loads(line) for line in lines if line]
    return records[0], records[1:]
