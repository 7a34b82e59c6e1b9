"""Finite-difference derivatives of uniformly sampled 3-D positions.

Interior stencils (spacing ``h``)::

    order 1 central   (p[k+1] - p[k-1]) / (2h)
    order 2 central   (p[k+1] - 2p[k] + p[k-1]) / h^2
    order 3 central   (p[k+2] - 2p[k+1] + 2p[k-1] - p[k-2]) / (2h^3)

One-sided stencils are the usual n-th differences over ``n + 1`` consecutive
samples. The backward set is causal and is the one the streaming evaluator
reproduces exactly, so the kernels below are shared with
:mod:`wingman_metrics.streaming` and must keep their operation order.

Boundary handling:

* central: points without a symmetric neighbourhood use the forward stencil
  at that point (left edge) or the backward stencil (right edge). These are
  first-order accurate.
* forward / backward: points without support reuse the nearest supported
  value, i.e. ``D[k] = D[n]`` for ``k < n`` in the backward scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TooShort
from .model import Scheme, Trajectory

ORDERS = (1, 2, 3)


@dataclass(frozen=True, eq=False)
class DerivativeSeries:
    order: int
    dt: float
    values: np.ndarray
    valid_range: range  # indices where the full-accuracy stencil applies

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def interior(self) -> np.ndarray:
        return self.values[self.valid_range.start : self.valid_range.stop]


def min_samples(order: int, scheme: Scheme | str) -> int:
    """Smallest trajectory length for which ``differentiate`` is defined."""
    _check_order(order)
    if Scheme.parse(scheme) is Scheme.CENTRAL:
        return 2 * math.ceil(order / 2) + 1
    return order + 1


def backward_difference(p: np.ndarray, order: int, h: float) -> np.ndarray:
    """n-th backward difference quotient; row ``i`` covers ``p[i : i + order + 1]``."""
    if order == 1:
        return (p[1:] - p[:-1]) / h
    if order == 2:
        return (p[2:] - 2.0 * p[1:-1] + p[:-2]) / (h * h)
    if order == 3:
        return (p[3:] - 3.0 * p[2:-1] + 3.0 * p[1:-2] - p[:-3]) / (h * h * h)
    raise ValueError(f"order must be 1, 2 or 3, got {order!r}")


def central_difference(p: np.ndarray, order: int, h: float) -> np.ndarray:
    """Symmetric stencils; row ``i`` is centred on ``p[i + ceil(order/2)]``."""
    if order == 1:
        return (p[2:] - p[:-2]) / (2.0 * h)
    if order == 2:
        return (p[2:] - 2.0 * p[1:-1] + p[:-2]) / (h * h)
    if order == 3:
        return (p[4:] - 2.0 * p[3:-1] + 2.0 * p[1:-3] - p[:-4]) / (2.0 * h * h * h)
    raise ValueError(f"order must be 1, 2 or 3, got {order!r}")


def squared_norm(v: np.ndarray) -> np.ndarray:
    """Row-wise squared Euclidean norm with a fixed summation order."""
    v = np.asarray(v)
    return v[..., 0] * v[..., 0] + v[..., 1] * v[..., 1] + v[..., 2] * v[..., 2]


def dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def _check_order(order: int) -> None:
    if order not in ORDERS:
        raise ValueError(f"order must be 1, 2 or 3, got {order!r}")


def differentiate_array(p: np.ndarray, dt: float, order: int, scheme: Scheme | str = Scheme.CENTRAL) -> DerivativeSeries:
    """Differentiate an ``(N, 3)`` position array sampled every ``dt`` seconds."""
    _check_order(order)
    scheme = Scheme.parse(scheme)
    p = np.asarray(p, dtype=np.float64)
    n_samples = p.shape[0]
    needed = min_samples(order, scheme)
    if n_samples < needed:
        raise TooShort(
            f"order-{order} {scheme.value} derivative needs {needed} samples, got {n_samples}",
            needed=needed,
            got=n_samples,
        )

    out = np.empty_like(p)
    one_sided = backward_difference(p, order, dt)  # length N - order
    if scheme is Scheme.BACKWARD:
        out[order:] = one_sided
        out[:order] = one_sided[0]
        valid = range(order, n_samples)
    elif scheme is Scheme.FORWARD:
        out[: n_samples - order] = one_sided
        out[n_samples - order :] = one_sided[-1]
        valid = range(0, n_samples - order)
    else:
        half = math.ceil(order / 2)
        out[half : n_samples - half] = central_difference(p, order, dt)
        # forward stencil at k is one_sided[k]; backward at k is one_sided[k - order]
        out[:half] = one_sided[:half]
        for k in range(n_samples - half, n_samples):
            out[k] = one_sided[k - order]
        valid = range(half, n_samples - half)

    out.setflags(write=False)
    return DerivativeSeries(order=order, dt=dt, values=out, valid_range=valid)


def differentiate(traj: Trajectory, order: int, scheme: Scheme | str = Scheme.CENTRAL) -> DerivativeSeries:
    """Order ``order`` time derivative of a trajectory, one value per sample."""
    return differentiate_array(traj.samples, traj.dt, order, scheme)
