"""Boundary jet/geometry data and the order-(j<=2) boundary integrands.

BoundaryPointData collects every scalar entering the boundary terms at a
single boundary point; boundary_beta contracts it against a coefficient
table.  warped_invariants generates such data for the warped-product
family of model metrics, where the boundary terms are known to be
independent of the warping profile, and scaling_check verifies the
weighted homogeneity of the terms under the parabolic rescaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .coeff import BoundaryConditionKind, CoefficientTable, ExponentPair
from .errors import DegenerateInputError, RangeError

_TWO_PI = 2.0 * math.pi


class JetSide(Enum):
    TEMPERATURE = "temperature"
    DUAL = "dual"


@dataclass(frozen=True)
class BoundaryPointData:
    """All scalars of the boundary integrands at one boundary point.

    phi/rho hold the modified Taylor jets of orders 0..2; the curvature
    fields vanish for 1-D problems.  weight is the boundary measure the
    point carries (e.g. (2 pi)^(m-1) for a torus cross-section).
    """

    phi: tuple
    rho: tuple
    Laa: float = 0.0
    LabLab: float = 0.0
    LaaLbb: float = 0.0
    Ricmm: float = 0.0
    tau: float = 0.0
    E: float = 0.0
    SR: float = 0.0
    grad_pair: complex = 0.0
    weight: float = 1.0

    def __post_init__(self):
        if len(self.phi) != 3 or len(self.rho) != 3:
            raise RangeError("phi and rho must carry jets of orders 0, 1, 2")
        if not self.weight > 0:
            raise DegenerateInputError("weight must be positive")

    def to_json_dict(self) -> dict:
        out = {
            "phi": [[complex(v).real, complex(v).imag] for v in self.phi],
            "rho": [[complex(v).real, complex(v).imag] for v in self.rho],
            "grad_pair": [complex(self.grad_pair).real, complex(self.grad_pair).imag],
        }
        for name in ("Laa", "LabLab", "LaaLbb", "Ricmm", "tau", "E", "SR", "weight"):
            out[name] = getattr(self, name)
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "BoundaryPointData":
        def as_c(v):
            return complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
        return cls(
            phi=tuple(as_c(v) for v in obj["phi"]),
            rho=tuple(as_c(v) for v in obj["rho"]),
            Laa=obj.get("Laa", 0.0), LabLab=obj.get("LabLab", 0.0),
            LaaLbb=obj.get("LaaLbb", 0.0), Ricmm=obj.get("Ricmm", 0.0),
            tau=obj.get("tau", 0.0), E=obj.get("E", 0.0), SR=obj.get("SR", 0.0),
            grad_pair=as_c(obj.get("grad_pair", 0.0)),
            weight=obj.get("weight", 1.0),
        )


@dataclass(frozen=True)
class WarpedProfile:
    """Warping data of a product-torus model metric near the boundary."""

    fprime: tuple
    fsecond: tuple
    SR0: float = 0.0
    m: int = 2

    def __post_init__(self):
        if self.m < 2:
            raise RangeError("dimension m must be >= 2")
        if len(self.fprime) != self.m - 1 or len(self.fsecond) != self.m - 1:
            raise RangeError("need m - 1 warping entries")


@lru_cache(maxsize=16)
def _fd_weights(deriv: int, npts: int) -> tuple:
    """Exact one-sided finite-difference weights at nodes 0, 1, .., npts-1."""
    n = npts
    rows = [[Fraction(k) ** j for k in range(n)] for j in range(n)]
    rhs = [Fraction(math.factorial(deriv)) if j == deriv else Fraction(0)
           for j in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        rhs[col] *= inv
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [v - f * u for v, u in zip(rows[r], rows[col])]
                rhs[r] -= f * rhs[col]
    return tuple(float(v) for v in rhs)


def _one_sided_derivative(fn, deriv: int, h: float, L: float) -> float:
    """Order-4 one-sided stencil with two Richardson levels (h, 2h, 4h)."""
    npts = deriv + 5  # order-4 accuracy
    w = _fd_weights(deriv, npts)
    span = (npts - 1) * 4 * h
    if span > L:
        raise DegenerateInputError(
            f"finite-difference stencil [0, {span:g}] exits [0, {L:g}]")

    def apply(step):
        return sum(c * float(fn(k * step)) for k, c in enumerate(w)) / step ** deriv

    d1, d2, d4 = apply(h), apply(2 * h), apply(4 * h)
    r1 = (16.0 * d1 - d2) / 15.0      # kills the h^4 term
    r2 = (16.0 * d2 - d4) / 15.0
    return (32.0 * r1 - r2) / 31.0    # kills the h^5 term


def modified_taylor_jets(smooth_factor, alpha: complex, omega_m: float,
                         order: int = 2, side: JetSide = JetSide.TEMPERATURE,
                         omega_m_derivative: float = 0.0, L: float = 1.0,
                         h: float | None = None) -> list:
    """Jets (1/l!) (covariant d/dr)^l (r^alpha * profile) at r = 0.

    The covariant derivative acts as d/dr + omega_m on the temperature
    side and d/dr - omega_m on the dual side, with omega_m(r) modelled
    linearly through omega_m_derivative.  The smooth factor is
    differentiated by one-sided finite differences (the factor need only
    be evaluable on [0, L]); everything else is exact algebra.
    """
    if order not in (0, 1, 2):
        raise RangeError("order must be 0, 1, or 2")
    if h is None:
        h = 1e-3 * L
    sgn = 1.0 if side is JetSide.TEMPERATURE else -1.0
    w, wp = sgn * omega_m, sgn * omega_m_derivative
    s0 = float(smooth_factor(0.0))
    jets = [complex(s0)]
    if order >= 1:
        s1 = _one_sided_derivative(smooth_factor, 1, h, L)
        jets.append(complex(s1 + w * s0))
    if order >= 2:
        s2 = _one_sided_derivative(smooth_factor, 2, h, L)
        jets.append(complex(0.5 * (s2 + 2.0 * w * s1 + (wp + w * w) * s0)))
    return jets


def warped_invariants(w: WarpedProfile, a: ExponentPair) -> BoundaryPointData:
    """Boundary data of the warped-product model metric at r = 0.

    Only the 2-jets of the warping functions enter, so the smooth factor
    of rho (the product of e^{-f_a}) is represented by its exact
    quadratic Taylor polynomial; on polynomials the jet stencils are
    exact up to roundoff.
    """
    F = float(sum(w.fprime))
    G = float(sum(w.fsecond))
    sum_sq = float(sum(v * v for v in w.fprime))
    scale = 200.0  # large evaluation window: polynomial data, no truncation
    one = lambda r: 1.0
    rho_smooth = lambda r: 1.0 - F * r + 0.5 * (F * F - G) * r * r
    phi_jets = modified_taylor_jets(one, a.alpha1, -0.5 * F, 2,
                                    JetSide.TEMPERATURE, -0.5 * G, L=scale)
    rho_jets = modified_taylor_jets(rho_smooth, a.alpha2, -0.5 * F, 2,
                                    JetSide.DUAL, -0.5 * G, L=scale)
    return BoundaryPointData(
        phi=tuple(phi_jets), rho=tuple(rho_jets),
        Laa=-F, LabLab=sum_sq, LaaLbb=F * F,
        Ricmm=-(G + sum_sq), tau=0.0,
        E=0.5 * G + 0.25 * F * F,
        SR=w.SR0 + 0.5 * F,
        grad_pair=0.0, weight=_TWO_PI ** (w.m - 1),
    )


def boundary_beta(table: CoefficientTable, data: BoundaryPointData,
                  j: int) -> complex:
    """The j-th boundary term contributed by one boundary point."""
    if j not in (0, 1, 2):
        raise RangeError("boundary term order must be 0, 1, or 2")
    robin = table.bc is BoundaryConditionKind.ROBIN
    p, r = data.phi, data.rho
    if j == 0:
        val = table["eps0"] * p[0] * r[0]
    elif j == 1:
        val = (table["eps1"] * p[1] * r[0]
               + table["eps2"] * data.Laa * p[0] * r[0]
               + table["eps3"] * p[0] * r[1])
        if robin:
            val += table["eps15"] * data.SR * p[0] * r[0]
    else:
        val = (table["eps4"] * p[2] * r[0]
               + table["eps5"] * data.Laa * p[1] * r[0]
               + table["eps6"] * data.E * p[0] * r[0]
               + table["eps7"] * p[0] * r[2]
               + table["eps8"] * data.Laa * p[0] * r[1]
               + table["eps9"] * data.Ricmm * p[0] * r[0]
               + table["eps10"] * data.LaaLbb * p[0] * r[0]
               + table["eps11"] * data.LabLab * p[0] * r[0]
               + table["eps12"] * data.grad_pair
               + table["eps13"] * data.tau * p[0] * r[0]
               + table["eps14"] * p[1] * r[1])
        if robin:
            val += (table["eps16"] * data.SR ** 2 * p[0] * r[0]
                    + table["eps17"] * data.SR * p[1] * r[0]
                    + table["eps18"] * data.SR * p[0] * r[1]
                    + table["eps19"] * data.SR * data.Laa * p[0] * r[0])
    return data.weight * val


def rescale_data(data: BoundaryPointData, a: ExponentPair,
                 c: float) -> BoundaryPointData:
    """Apply the parabolic rescaling weights to every field."""
    if not c > 0:
        raise RangeError("scaling factor must be positive")
    a1, a2 = complex(a.alpha1), complex(a.alpha2)
    phi = tuple(c ** (a1 - l) * complex(v) for l, v in enumerate(data.phi))
    rho = tuple(c ** (a2 - l) * complex(v) for l, v in enumerate(data.rho))
    return replace(
        data, phi=phi, rho=rho,
        Laa=data.Laa / c, LabLab=data.LabLab / c ** 2,
        LaaLbb=data.LaaLbb / c ** 2, Ricmm=data.Ricmm / c ** 2,
        tau=data.tau / c ** 2, E=data.E / c ** 2, SR=data.SR / c,
        grad_pair=c ** (a1 + a2 - 2) * complex(data.grad_pair),
    )


def scaling_check(table: CoefficientTable, data: BoundaryPointData,
                  c: float, j: int) -> float:
    """Residual of beta_j(scaled data) = c^(a1 + a2 - j) beta_j(data).

    Returns the relative residual; when beta_j(data) vanishes the
    absolute residual of the scaled side is returned instead.
    """
    a = table.pair
    base = boundary_beta(table, data, j)
    scaled = boundary_beta(table, rescale_data(data, a, c), j)
    factor = c ** (complex(a.alpha1) + complex(a.alpha2) - j)
    if abs(base) < 1e-300:
        return abs(scaled)
    return abs(scaled - factor * base) / abs(base)


def flat_data(phi_jets=(1.0, 0.0, 0.0), rho_jets=(1.0, 0.0, 0.0),
              SR: float = 0.0, E: float = 0.0,
              weight: float = 1.0) -> BoundaryPointData:
    """Boundary data of a flat 1-D endpoint."""
    return BoundaryPointData(phi=tuple(complex(v) for v in phi_jets),
                             rho=tuple(complex(v) for v in rho_jets),
                             SR=SR, E=E, weight=weight)
