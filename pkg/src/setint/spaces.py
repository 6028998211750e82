"""Finite-dimensional normed spaces and their declared balancing parameters.

A space is described by its dimension, a norm family (l1, l2 or linf) and an
optional declared infratype pair ``(p, C)``: the promise that for every finite
family of vectors the minimum over sign patterns of the norm of the signed sum
is at most ``C * (sum ||x_i||**p) ** (1/p)``.  The declaration is trusted input;
the balance module estimates lower bounds for the best constant empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, UnsupportedOperationError

NORM_FAMILIES = ("l1", "l2", "linf")


@dataclass(frozen=True)
class SpaceDescriptor:
    dim: int
    norm: str = "l2"
    infratype: tuple[float, float] | None = None

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise InvalidArgumentError(f"dim must be a positive integer, got {self.dim!r}")
        if self.norm not in NORM_FAMILIES:
            raise InvalidArgumentError(f"norm must be one of {NORM_FAMILIES}, got {self.norm!r}")
        if self.infratype is not None:
            p, c = self.infratype
            if not (1.0 < p <= 2.0):
                raise InvalidArgumentError(f"infratype exponent must lie in (1, 2], got {p}")
            if not c > 0:
                raise InvalidArgumentError(f"infratype constant must be positive, got {c}")
            object.__setattr__(self, "infratype", (float(p), float(c)))
        object.__setattr__(self, "dim", int(self.dim))


def as_vector(space: SpaceDescriptor, coords) -> np.ndarray:
    """Validate and return a 1-d float array living in ``space``."""
    v = np.asarray(coords, dtype=float)
    if v.ndim != 1 or v.shape[0] != space.dim:
        raise InvalidArgumentError(
            f"vector of length {v.shape} does not match space dimension {space.dim}"
        )
    if not np.all(np.isfinite(v)):
        raise InvalidArgumentError("vector entries must be finite")
    return v


def norm(space: SpaceDescriptor, v) -> float:
    """Norm of a single vector under the space's norm family."""
    v = as_vector(space, v)
    return float(_norms_nocheck(space, v[None, :])[0])


def norms(space: SpaceDescriptor, points: np.ndarray) -> np.ndarray:
    """Row-wise norms of an (n, dim) array."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != space.dim:
        raise InvalidArgumentError(
            f"array of shape {points.shape} does not match space dimension {space.dim}"
        )
    return _norms_nocheck(space, points)


def _norms_nocheck(space: SpaceDescriptor, points: np.ndarray) -> np.ndarray:
    if space.norm == "l1":
        return np.abs(points).sum(axis=1)
    if space.norm == "l2":
        return np.sqrt((points * points).sum(axis=1))
    return np.abs(points).max(axis=1)


def cdist_metric(space: SpaceDescriptor) -> str:
    """scipy.spatial.distance metric name matching the space's norm."""
    return {"l1": "cityblock", "l2": "euclidean", "linf": "chebyshev"}[space.norm]


def c1_from(p: float, c: float) -> float:
    """Selection-error constant 2C / (2**(1 - 1/p) - 1)."""
    if p <= 1.0:
        raise InvalidArgumentError(f"the constant diverges for p <= 1, got p={p}")
    return 2.0 * c / (2.0 ** (1.0 - 1.0 / p) - 1.0)


def c1_constant(space: SpaceDescriptor) -> float:
    """Selection-error constant computed from the space's declared infratype."""
    if space.infratype is None:
        raise UnsupportedOperationError("space has no declared infratype")
    p, c = space.infratype
    return c1_from(p, c)


def space_to_json(space: SpaceDescriptor) -> dict:
    return {
        "dim": space.dim,
        "norm": space.norm,
        "infratype": list(space.infratype) if space.infratype is not None else None,
    }


def space_from_json(obj) -> SpaceDescriptor:
    if not isinstance(obj, dict):
        raise InvalidArgumentError(f"space descriptor must be an object, got {type(obj).__name__}")
    try:
        dim = obj["dim"]
        nf = obj["norm"]
    except KeyError as exc:
        raise InvalidArgumentError(f"space descriptor missing field {exc}") from exc
    infratype = obj.get("infratype")
    if infratype is not None:
        if not (isinstance(infratype, (list, tuple)) and len(infratype) == 2):
            raise InvalidArgumentError(f"infratype must be [p, C] or null, got {infratype!r}")
        infratype = (float(infratype[0]), float(infratype[1]))
    return SpaceDescriptor(dim=dim, norm=nf, infratype=infratype)


#: Convenience constructors for the three families.
def l1(dim: int, infratype=None) -> SpaceDescriptor:
    return SpaceDescriptor(dim, "l1", infratype)


def l2(dim: int, infratype=(2.0, 1.0)) -> SpaceDescriptor:
    # (p=2, C=1) is valid for Euclidean norms: averaging the squared norm of the
    # signed sum over all sign patterns gives exactly sum ||x_i||**2.
    return SpaceDescriptor(dim, "l2", infratype)


def linf(dim: int, infratype=None) -> SpaceDescriptor:
    return SpaceDescriptor(dim, "linf", infratype)


def hilbert_c1() -> float:
    """The constant for (p, C) = (2, 1): 2 / (sqrt(2) - 1)."""
    return 2.0 / (math.sqrt(2.0) - 1.0)
