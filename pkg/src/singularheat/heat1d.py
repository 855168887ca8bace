"""Heat content beta(t) for the 1-D model problems.

Three independent routes are provided: the half-line with image-method
Gaussian kernels, the interval [0, pi] with explicit Dirichlet/Robin
spectral resolutions of D = -d^2/dx^2 + c^2, and the circle with Fourier
modes.  apply_A / intertwine_residual realize the first-order operators
A = d/dx + c and A* = -d/dx + c that exchange the Dirichlet and Robin
flows, giving a simulator-level consistency check on both realizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .coeff import BoundaryConditionKind
from .errors import (DomainError, QuadratureError, RangeError,
                     TruncationError)
from .profiles import IntertwinedFactor, SingularProfile
from .quadrature import gauss_legendre, tanh_sinh, tanh_sinh_nodes

#: kernel window: exp(-45^2/4) ~ 1e-220, far below any tolerance in use
_WINDOW_SIGMAS = 45.0
_SUM_CAP = 20000
_TAIL_REL = 1e-13
#: below this scale, x**(-alpha) node offsets can underflow to exact 0;
#: the skipped mass is O(_TINY^(1 - sigma)) times an underflowing weight
_TINY = 1e-60


class SpectralKind(Enum):
    DIRICHLET_INTERVAL = "dirichlet-interval"
    ROBIN_INTERVAL = "robin-interval"
    CIRCLE = "circle"


@dataclass(frozen=True)
class SpectralResolution:
    """Explicit eigendata of D = -d^2/dx^2 + c^2 on [0, pi] or the circle.

    Dirichlet: phi_n = sqrt(2/pi) sin(nx), n >= 1.  Robin (boundary
    operator (phi' - c phi)(0), (-phi' + c phi)(pi)): phi_n is the
    normalized image A phi_n^D for n >= 1, plus the stationary mode
    e^{cx} (annihilated by A*, hence orthogonal to every A phi_n^D and
    satisfying both Robin conditions) at eigenvalue 0.
    """

    kind: SpectralKind
    c: float = 0.0

    def __post_init__(self):
        if self.kind is not SpectralKind.ROBIN_INTERVAL and self.c != 0.0:
            raise RangeError("nonzero c requires the Robin interval kind")

    @property
    def has_zero_mode(self) -> bool:
        return self.kind is SpectralKind.ROBIN_INTERVAL

    def eigenvalue(self, n):
        n = np.asarray(n, float)
        if self.kind is SpectralKind.CIRCLE:
            return np.ceil(n / 2.0) ** 2
        if self.has_zero_mode:
            return np.where(n == 0, 0.0, n ** 2 + self.c ** 2)
        return n ** 2 + self.c ** 2

    def eigenfunction(self, n: int, x):
        x = np.asarray(x, float)
        if self.kind is SpectralKind.DIRICHLET_INTERVAL:
            if n < 1:
                raise RangeError("Dirichlet modes start at n = 1")
            return math.sqrt(2.0 / math.pi) * np.sin(n * x)
        if self.kind is SpectralKind.ROBIN_INTERVAL:
            if n == 0:
                return _robin_zero_norm(self.c) * np.exp(self.c * x)
            lam = n ** 2 + self.c ** 2
            return math.sqrt(2.0 / math.pi) / math.sqrt(lam) \
                * (n * np.cos(n * x) + self.c * np.sin(n * x))
        # circle: [1, cos x, sin x, cos 2x, sin 2x, ...] orthonormalized
        if n == 0:
            return np.full_like(x, 1.0 / math.sqrt(2.0 * math.pi))
        k = (n + 1) // 2
        trig = np.cos(k * x) if n % 2 == 1 else np.sin(k * x)
        return trig / math.sqrt(math.pi)


def interval_spectrum(kind: SpectralKind, c: float = 0.0) -> SpectralResolution:
    return SpectralResolution(kind, float(c))


def _robin_zero_norm(c: float) -> float:
    """1 / ||e^{cx}||_{L^2(0, pi)}."""
    if abs(c) < 1e-8:
        # expand (e^{2 pi c} - 1)/(2c) = pi (1 + pi c + ...) to avoid 0/0
        return 1.0 / math.sqrt(math.pi * (1.0 + math.pi * c))
    return math.sqrt(2.0 * c / math.expm1(2.0 * math.pi * c))


@dataclass
class HeatContentSamples:
    """beta(t) samples of one problem, serializable as t,beta,err CSV."""

    problem: str
    entries: list = field(default_factory=list)

    def __post_init__(self):
        ts = [e[0] for e in self.entries]
        if any(t2 <= t1 for t1, t2 in zip(ts, ts[1:])):
            raise RangeError("sample times must be strictly increasing")
        if any(e[0] <= 0 or e[2] < 0 for e in self.entries):
            raise RangeError("need t > 0 and err >= 0")

    def to_csv_text(self) -> str:
        lines = ["t,beta,err"]
        for t, beta, err in self.entries:
            lines.append(f"{t:.17g},{beta:.17g},{err:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv_text(cls, text: str, problem: str = "") -> "HeatContentSamples":
        lines = [ln for ln in text.strip().splitlines() if ln]
        if not lines or lines[0].strip() != "t,beta,err":
            raise RangeError("expected header 't,beta,err'")
        entries = []
        for ln in lines[1:]:
            t, beta, err = (float(v) for v in ln.split(","))
            entries.append((t, beta, err))
        return cls(problem=problem, entries=entries)


# ---------------------------------------------------------------------------
# half-line with image kernels

def halfline_kernel(bc: BoundaryConditionKind, x1, x2, t: float):
    """Dirichlet/Neumann heat kernel on [0, inf) by the method of images."""
    if t <= 0:
        raise RangeError("need t > 0")
    x1 = np.asarray(x1, float)
    x2 = np.asarray(x2, float)
    if np.any(x1 < 0) or np.any(x2 < 0):
        raise RangeError("half-line kernel needs x >= 0")
    norm = 1.0 / math.sqrt(4.0 * math.pi * t)
    direct = np.exp(-((x1 - x2) ** 2) / (4.0 * t))
    image = np.exp(-((x1 + x2) ** 2) / (4.0 * t))
    sign = bc.sign  # -1 Dirichlet, +1 Neumann
    return norm * (direct + sign * image)


def _segments(lo: float, hi: float, cuts) -> list:
    """Split [lo, hi] at interior cut points."""
    inner = sorted(c for c in cuts if lo < c < hi)
    edges = [lo] + inner + [hi]
    return [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)
            if edges[i + 1] > edges[i]]


def _cross_correlation(phi: SingularProfile, rho: SingularProfile,
                       d: float, tol: float, err_box: list) -> float:
    """F(d) = int rho(y) phi(y + d) dy for d >= 0.

    Only rho is singular on the integration range (the phi argument
    stays >= d), so the singularity sits at the left endpoint of the
    first segment where the tanh-sinh nodes cluster.
    """
    hi = min(rho.support_end(), phi.support_end() - d)
    if hi <= 0.0:
        return 0.0
    cuts = list(rho.smooth.breakpoints) \
        + [b - d for b in phi.smooth.breakpoints]
    total = 0.0
    for a, b in _segments(0.0, hi, cuts):
        f = lambda y: rho(y) * phi(y + d)
        if a == 0.0:
            if b <= _TINY:
                continue
            val, err = tanh_sinh(f, a, b, tol=tol, abs_tol=1e-3 * tol)
            err_box[0] = max(err_box[0], err)
        else:
            val = gauss_legendre(f, a, b, n=40)
        total += val
    return total


def _endpoint_convolution(phi: SingularProfile, rho: SingularProfile,
                          s: float, tol: float, err_box: list) -> float:
    """H(s) = int_0^s phi(x) rho(s - x) dx, singular at both ends.

    Split at s/2 and reflect so each half carries its singularity at the
    left endpoint only (full precision there).
    """
    if s <= _TINY or s >= phi.support_end() + rho.support_end():
        # values scale like s^(1 - sigma): negligible below any tolerance
        return 0.0
    total = 0.0
    for f, g in ((phi, rho), (rho, phi)):
        cuts = list(f.smooth.breakpoints) \
            + [s - b for b in g.smooth.breakpoints]
        hi = min(0.5 * s, f.support_end())
        lo = max(0.0, s - g.support_end())
        if hi <= lo:
            continue
        for a, b in _segments(lo, hi, cuts):
            fn = lambda x: f(x) * g(s - x)
            if a == 0.0:
                if b <= _TINY:
                    continue
                val, err = tanh_sinh(fn, a, b, tol=tol, abs_tol=1e-3 * tol)
                err_box[0] = max(err_box[0], err)
            else:
                val = gauss_legendre(fn, a, b, n=40)
            total += val
    return total


def halfline_heat_content(phi: SingularProfile, rho: SingularProfile,
                          bc: BoundaryConditionKind, t: float,
                          tol: float = 1e-9):
    """beta(t) = integral of K(x, y; t) phi(x) rho(y) over the quadrant.

    In the difference/sum variables the double integral factors through
    one-dimensional profiles of the data:

        direct = int_0^w G(d) [F_{phi,rho}(d) + F_{rho,phi}(d)] dd,
        image  = int_0^w G(s) H(s) ds,

    with G the 1-D Gaussian, F the cross-correlation and H the endpoint
    convolution above; beta = direct + sign * image.  Both outer
    integrands are singular exactly at 0, matching the quadrature.
    """
    if t <= 0:
        raise RangeError("need t > 0")
    sign = bc.sign
    w = _WINDOW_SIGMAS * math.sqrt(t)
    norm = 1.0 / math.sqrt(4.0 * math.pi * t)
    inner_err = [0.0]
    inner_tol = 0.01 * tol

    def direct_integrand(ds):
        return np.array([
            _cross_correlation(phi, rho, float(d), inner_tol, inner_err)
            + _cross_correlation(rho, phi, float(d), inner_tol, inner_err)
            for d in ds]) * np.exp(-np.asarray(ds) ** 2 / (4.0 * t))

    def image_integrand(ss):
        return np.array([
            _endpoint_convolution(phi, rho, float(s), inner_tol, inner_err)
            for s in ss]) * np.exp(-np.asarray(ss) ** 2 / (4.0 * t))

    def gaussian_edges(hi: float) -> list:
        # geometric splits keep the Gaussian roll-off resolved per panel
        edges = [0.0]
        e = 6.0 * math.sqrt(t)
        while e < hi:
            edges.append(e)
            e *= 2.0
        edges.append(hi)
        return edges

    def integrate(fn, hi: float) -> tuple:
        total = e_tot = 0.0
        edges = gaussian_edges(hi)
        for a, b in zip(edges, edges[1:]):
            val, e = tanh_sinh(fn, a, b, tol=tol, abs_tol=1e-3 * tol)
            total += val
            e_tot += e
        return total, e_tot

    beta = 0.0
    err = 0.0
    d_hi = min(w, max(phi.support_end(), rho.support_end()))
    if d_hi > 0.0:
        val, e = integrate(direct_integrand, d_hi)
        beta += val
        err += e
    s_hi = min(w, phi.support_end() + rho.support_end())
    if s_hi > 0.0:
        val, e = integrate(image_integrand, s_hi)
        beta += sign * val
        err += e
    return norm * beta, norm * (err + inner_err[0] * (d_hi + s_hi))


# ---------------------------------------------------------------------------
# interval [0, pi]: spectral sums with cached Fourier moments

_HEAD_LEVEL = 6        # tanh-sinh level for the singular head of each moment
_PANEL_NODES = 8       # Gauss nodes per oscillation panel
_HEAD_PERIODS = 10.0   # head covers [0, _HEAD_PERIODS / n]


@lru_cache(maxsize=4)
def _panel_rule(npts: int):
    return np.polynomial.legendre.leggauss(npts)


class _FourierMoments:
    """Cached S_n = int phi sin(nx) and C_n = int phi cos(nx), n = 1..N.

    The singular head [0, min(b, 10/n)] of the first piece uses a fixed
    tanh-sinh grid (nodes cluster at the singularity); the oscillatory
    remainder uses per-period Gauss panels that never straddle a
    breakpoint of the smooth factor.
    """

    def __init__(self, profile: SingularProfile):
        self.profile = profile
        self.S = np.zeros(0)
        self.C = np.zeros(0)
        self.err = np.zeros(0)
        self._exp_cache = {}

    def ensure(self, n_max: int):
        have = self.S.size
        if n_max <= have:
            return
        S = np.concatenate([self.S, np.zeros(n_max - have)])
        C = np.concatenate([self.C, np.zeros(n_max - have)])
        err = np.concatenate([self.err, np.zeros(n_max - have)])
        pieces = self.profile.pieces()
        support_end = pieces[-1][1]
        gx, gw = _panel_rule(_PANEL_NODES)
        for n in range(have + 1, n_max + 1):
            s_tot = c_tot = e_tot = 0.0
            for (a, b) in pieces:
                if a == 0.0:
                    head = min(b, _HEAD_PERIODS / n)
                    x, wf, wc = tanh_sinh_nodes(0.0, head, _HEAD_LEVEL)
                    f = self.profile(x)
                    sn, cn = np.sin(n * x), np.cos(n * x)
                    s_tot += np.dot(wf, f * sn)
                    c_tot += np.dot(wf, f * cn)
                    e_tot += abs(np.dot(wf - wc, f * sn)) \
                        + abs(np.dot(wf - wc, f * cn))
                    a = head
                if b == support_end and b > a:
                    # The smooth factor may lose regularity at the support
                    # edge (fractional powers of end - x), so give the tail
                    # the same clustered treatment as the singular head.
                    tail = max(a, b - _HEAD_PERIODS / n)
                    x, wf, wc = tanh_sinh_nodes(tail, b, _HEAD_LEVEL)
                    f = self.profile(x)
                    sn, cn = np.sin(n * x), np.cos(n * x)
                    s_tot += np.dot(wf, f * sn)
                    c_tot += np.dot(wf, f * cn)
                    e_tot += abs(np.dot(wf - wc, f * sn)) \
                        + abs(np.dot(wf - wc, f * cn))
                    b = tail
                if b <= a:
                    continue
                m = max(1, int(math.ceil((b - a) * n / math.pi)))
                edges = np.linspace(a, b, m + 1)
                half = 0.5 * (edges[1] - edges[0])
                x = (edges[:-1, None] + half * (1.0 + gx[None, :])).ravel()
                wgt = np.broadcast_to(half * gw, (m, _PANEL_NODES)).ravel()
                f = self.profile(x)
                s_tot += np.dot(wgt, f * np.sin(n * x))
                c_tot += np.dot(wgt, f * np.cos(n * x))
                e_tot += 1e-15 * np.dot(wgt, np.abs(f))
            S[n - 1], C[n - 1], err[n - 1] = s_tot, c_tot, e_tot
        self.S, self.C, self.err = S, C, err

    def exp_moment(self, c: float) -> float:
        """int phi(x) e^{cx} dx over the support (Robin zero mode)."""
        if c not in self._exp_cache:
            total = 0.0
            for (a, b) in self.profile.pieces():
                val, _ = tanh_sinh(
                    lambda x: self.profile(x) * np.exp(c * x), a, b,
                    abs_tol=1e-13)
                total += val
            self._exp_cache[c] = total
        return self._exp_cache[c]


_MOMENTS: dict = {}


def _moments(profile: SingularProfile) -> _FourierMoments:
    if profile not in _MOMENTS:
        _MOMENTS[profile] = _FourierMoments(profile)
    return _MOMENTS[profile]


def _gammas(mom: _FourierMoments, spec: SpectralResolution, n_max: int):
    """(gamma_n, err_n) for n = 1..n_max against the given resolution."""
    mom.ensure(n_max)
    n = np.arange(1, n_max + 1, dtype=float)
    root = math.sqrt(2.0 / math.pi)
    if spec.kind is SpectralKind.DIRICHLET_INTERVAL:
        return root * mom.S[:n_max], root * mom.err[:n_max]
    if spec.kind is SpectralKind.ROBIN_INTERVAL:
        lam_half = np.sqrt(n ** 2 + spec.c ** 2)
        g = root * (n * mom.C[:n_max] + spec.c * mom.S[:n_max]) / lam_half
        e = root * (n + abs(spec.c)) * mom.err[:n_max] / lam_half
        return g, e
    raise RangeError("interval heat content needs an interval resolution")


def interval_heat_content(phi: SingularProfile, rho: SingularProfile,
                          spec: SpectralResolution, t: float):
    """Sum_n e^{-t lambda_n} gamma_n(phi) gamma_n(rho) on [0, pi].

    The truncation N grows until the Gaussian tail bound
    e^{-t N^2} * (uniform |gamma gamma| bound) * (1 + 1/(2tN)) drops
    below 1e-13 of the partial sum, hard-capped at 20000 modes.
    """
    if t <= 0:
        raise RangeError("need t > 0")
    if t * _SUM_CAP ** 2 < 30.0:
        # e^{-t N^2} cannot reach the 1e-13 tail target within the cap
        raise TruncationError(
            f"needed more than {_SUM_CAP} modes at t = {t:g}")
    mphi, mrho = _moments(phi), _moments(rho)
    base = 0.0
    if spec.has_zero_mode:
        z = _robin_zero_norm(spec.c)
        base = (z * mphi.exp_moment(spec.c)) * (z * mrho.exp_moment(spec.c))
    n_max = 64
    while True:
        gp, ep = _gammas(mphi, spec, n_max)
        gr, er = _gammas(mrho, spec, n_max)
        n = np.arange(1, n_max + 1, dtype=float)
        weights = np.exp(-t * (n ** 2 + spec.c ** 2))
        partial = base + float(np.dot(weights, gp * gr))
        bound = 2.0 * float(np.max(np.abs(gp * gr)[n_max // 2:]))
        tail = math.exp(-t * n_max ** 2) * bound \
            * (1.0 + 1.0 / (2.0 * t * n_max))
        if tail < _TAIL_REL * max(abs(partial), 1e-300):
            quad_err = float(np.dot(weights, np.abs(gp) * er
                                    + np.abs(gr) * ep))
            return partial, tail + quad_err
        if n_max >= _SUM_CAP:
            raise TruncationError(
                f"needed more than {_SUM_CAP} modes at t = {t:g}")
        n_max = min(2 * n_max, _SUM_CAP)


# ---------------------------------------------------------------------------
# intertwining operators

def apply_A(profile: SingularProfile, c: float,
            adjoint: bool) -> SingularProfile:
    """(A phi) or (A* phi) for A = d/dx + c, A* = -d/dx + c.

    The singular exponent shifts by +1, so integrability of the result
    requires Re(alpha) < 0 on input.
    """
    a = profile.real_alpha
    if a >= 0.0:
        raise DomainError("apply_A needs Re(alpha) < 0 to stay integrable")
    smooth = IntertwinedFactor(profile.smooth, a, float(c),
                               sign=+1 if adjoint else -1)
    return SingularProfile(a + 1.0, smooth, profile.L, profile.cutoff_radius)


def intertwine_residual(phi: SingularProfile, rho: SingularProfile,
                        c: float, t: float, dt: float | None = None,
                        dual: bool = False) -> float:
    """Relative defect of d/dt beta_R(phi, rho) = -beta_D(A* phi, A* rho).

    With dual=True the exchanged identity
    d/dt beta_D(phi, rho) = -beta_R(A phi, A rho) is tested instead.
    The t-derivative is a central difference with step dt
    (default min(1e-4, t/100)).
    """
    if phi.real_alpha >= -1.0 or rho.real_alpha >= -1.0:
        raise DomainError("intertwining identity needs Re(alpha) < -1")
    if dt is None:
        dt = min(1e-4, t / 100.0)
    if not 0.0 < dt < t:
        raise DomainError("need 0 < dt < t")
    robin = interval_spectrum(SpectralKind.ROBIN_INTERVAL, c)
    diri = interval_spectrum(SpectralKind.DIRICHLET_INTERVAL)

    def beta_d_shifted(p, r, s):
        # D = -d^2/dx^2 + c^2: Dirichlet sum with sin modes reweighted
        mp, mr = _moments(p), _moments(r)
        n_max = 64
        while True:
            gp, ep = _gammas(mp, diri, n_max)
            gr, er = _gammas(mr, diri, n_max)
            n = np.arange(1, n_max + 1, dtype=float)
            weights = np.exp(-s * (n ** 2 + c ** 2))
            partial = float(np.dot(weights, gp * gr))
            bound = 2.0 * float(np.max(np.abs(gp * gr)[n_max // 2:]))
            tail = math.exp(-s * n_max ** 2) * bound \
                * (1.0 + 1.0 / (2.0 * s * n_max))
            if tail < _TAIL_REL * max(abs(partial), 1e-300):
                return partial
            if n_max >= _SUM_CAP:
                raise TruncationError(f"mode cap exceeded at t = {s:g}")
            n_max = min(2 * n_max, _SUM_CAP)

    if not dual:
        hi, _ = interval_heat_content(phi, rho, robin, t + dt)
        lo, _ = interval_heat_content(phi, rho, robin, t - dt)
        rhs = beta_d_shifted(apply_A(phi, c, True), apply_A(rho, c, True), t)
    else:
        hi = beta_d_shifted(phi, rho, t + dt)
        lo = beta_d_shifted(phi, rho, t - dt)
        rhs_val, _ = interval_heat_content(
            apply_A(phi, c, False), apply_A(rho, c, False), robin, t)
        rhs = rhs_val
    deriv = (hi - lo) / (2.0 * dt)
    return abs(deriv + rhs) / max(abs(rhs), 1e-300)


# ---------------------------------------------------------------------------
# circle

def circle_heat_content(phi_fourier, rho_fourier, t: float) -> float:
    """Heat content on the unit circle from Fourier data.

    Coefficient lists are in the basis [1, cos x, sin x, cos 2x, ...];
    the mode k carries measure 2 pi (k = 0) or pi (k >= 1).
    """
    if t <= 0:
        raise RangeError("need t > 0")
    total = 0.0
    for i in range(min(len(phi_fourier), len(rho_fourier))):
        k = (i + 1) // 2
        measure = 2.0 * math.pi if i == 0 else math.pi
        total += math.exp(-t * k * k) * phi_fourier[i] * rho_fourier[i] \
            * measure
    return total
