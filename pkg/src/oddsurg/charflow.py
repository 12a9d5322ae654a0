"""Characteristic flow of ``omega + eps * dpsi ^ dtheta`` on S1 x S2.

Away from the surgery region the kernel of the perturbed form is spanned by
``d/dtheta - eps * X_psi`` where ``X_psi`` is the Hamiltonian field of an
S1-invariant function ``psi`` for the round area form of the unit sphere,
``omega_p(u, v) = p . (u x v)``.  Solving ``omega(X, .) = -dpsi`` gives
``X_psi(p) = p x grad psi(p)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .polyparse import format_polynomial, parse_polynomial

__all__ = [
    "ScalarField",
    "CapRegion",
    "FlowState",
    "OrbitTrace",
    "LevelSetVerdict",
    "hamiltonian_field",
    "characteristic_velocity",
    "integrate_orbit",
    "poincare_section",
    "verify_level_sets_meet_cap",
    "random_start",
    "run_ensemble",
    "TWO_PI",
]

TWO_PI = 2.0 * math.pi
UNIT_TOL = 1e-9


def _unit(p, what="point") -> tuple[float, float, float]:
    x, y, z = (float(c) for c in p)
    norm = math.sqrt(x * x + y * y + z * z)
    if not math.isfinite(norm) or abs(norm - 1.0) > UNIT_TOL:
        raise ValueError(f"{what} must be a unit 3-vector, got norm {norm!r}")
    return x, y, z


def _normalize(x, y, z):
    n = math.sqrt(x * x + y * y + z * z)
    return x / n, y / n, z / n


@dataclass(frozen=True)
class ScalarField:
    """Polynomial ``psi(x, y, z) = sum c * x^i y^j z^k`` restricted to S2."""

    monomials: tuple[tuple[tuple[int, int, int], float], ...]
    _grad: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        merged: dict[tuple[int, int, int], float] = {}
        for exps, c in self.monomials:
            exps = tuple(int(e) for e in exps)
            if len(exps) != 3 or min(exps) < 0:
                raise ValueError(f"bad exponent triple {exps!r}")
            merged[exps] = merged.get(exps, 0.0) + float(c)
        terms = tuple(sorted((e, c) for e, c in merged.items() if c != 0.0))
        object.__setattr__(self, "monomials", terms)
        grad = []
        for axis in range(3):
            comp = []
            for e, c in terms:
                if e[axis]:
                    d = list(e)
                    d[axis] -= 1
                    comp.append((c * e[axis], d[0], d[1], d[2]))
            grad.append(tuple(comp))
        object.__setattr__(self, "_grad", tuple(grad))

    @classmethod
    def parse(cls, text: str) -> "ScalarField":
        return cls(tuple(parse_polynomial(text).items()))

    @classmethod
    def constant(cls, c: float) -> "ScalarField":
        return cls((((0, 0, 0), c),))

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.monomials), default=0)

    def __str__(self):
        return format_polynomial(self.monomials)

    def value(self, x: float, y: float, z: float) -> float:
        return sum(c * x**i * y**j * z**k for (i, j, k), c in self.monomials)

    def __call__(self, p) -> float:
        return self.value(*p)

    def grad_xyz(self, x: float, y: float, z: float) -> tuple[float, float, float]:
        gx, gy, gz = (
            sum(c * x**i * y**j * z**k for c, i, j, k in comp) for comp in self._grad
        )
        return gx, gy, gz

    def gradient(self, p) -> np.ndarray:
        """Ambient gradient in R3."""
        return np.array(self.grad_xyz(*p))

    def tangential_gradient(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        g = self.gradient(p)
        return g - np.dot(p, g) * p


@dataclass(frozen=True)
class CapRegion:
    """Geodesic disc on S2: points within ``angular_radius`` of ``center``."""

    center: tuple[float, float, float]
    angular_radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _unit(self.center, "cap center"))
        if not 0.0 < self.angular_radius <= math.pi:
            raise ValueError(f"cap radius must lie in (0, pi], got {self.angular_radius!r}")

    @classmethod
    def around(cls, v, angular_radius: float) -> "CapRegion":
        """Cap centred on the direction of ``v`` (normalized here)."""
        x, y, z = (float(c) for c in v)
        if x == y == z == 0.0:
            raise ValueError("cap center must be a nonzero vector")
        return cls(_normalize(x, y, z), angular_radius)

    def contains(self, p) -> bool:
        cx, cy, cz = self.center
        dot = cx * p[0] + cy * p[1] + cz * p[2]
        return math.acos(max(-1.0, min(1.0, dot))) <= self.angular_radius


@dataclass(frozen=True)
class FlowState:
    theta: float
    p: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)
        object.__setattr__(self, "p", _unit(self.p, "sphere coordinate"))


def hamiltonian_field(psi: ScalarField, p) -> np.ndarray:
    """``X_psi(p)``, the tangent vector with ``omega_p(X, v) = -dpsi_p(v)``."""
    p = np.array(_unit(p))
    return np.cross(p, psi.tangential_gradient(p))


def characteristic_velocity(
    psi: ScalarField, epsilon: float, s: FlowState
) -> tuple[float, np.ndarray]:
    """``(dtheta/dt, dp/dt)`` along ``d/dtheta - eps * X_psi``."""
    if epsilon < 0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon!r}")
    return 1.0, -epsilon * hamiltonian_field(psi, s.p)


def _sphere_rhs(psi: ScalarField, epsilon: float):
    grad = psi.grad_xyz
    k = -epsilon

    # p x grad psi equals p x (tangential gradient) and extends the field
    # off the sphere so that both |p| and psi are exact first integrals.
    def rhs(x, y, z):
        gx, gy, gz = grad(x, y, z)
        return (
            k * (y * gz - z * gy),
            k * (z * gx - x * gz),
            k * (x * gy - y * gx),
        )

    return rhs


@dataclass
class OrbitTrace:
    psi: ScalarField
    epsilon: float
    dt: float
    start_theta: float
    times: np.ndarray
    points: np.ndarray
    psi_values: np.ndarray
    cap_hits: list[float]
    completed: bool
    halted: bool = False
    failure: str | None = None

    @property
    def theta(self) -> np.ndarray:
        return np.mod(self.start_theta + self.times, TWO_PI)

    @property
    def psi_drift(self) -> float:
        if len(self.psi_values) == 0:
            return 0.0
        return float(np.max(np.abs(self.psi_values - self.psi_values[0])))

    @property
    def final(self) -> FlowState:
        return FlowState(self.theta[-1], tuple(self.points[-1]))

    def samples(self) -> Iterator[tuple[float, FlowState]]:
        for t, th, p in zip(self.times, self.theta, self.points):
            yield float(t), FlowState(th, tuple(p))

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time", "theta", "px", "py", "pz", "psi"])
        for t, th, p, v in zip(self.times, self.theta, self.points, self.psi_values):
            w.writerow([repr(float(t)), repr(float(th)), *(repr(float(c)) for c in p), repr(float(v))])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def integrate_orbit(
    psi: ScalarField,
    epsilon: float,
    start: FlowState,
    dt: float,
    steps: int,
    cap: CapRegion | None = None,
    halt_on_hit: bool = False,
) -> OrbitTrace:
    """Classical RK4 along the characteristic field, re-projecting to S2.

    The theta component has constant speed one, so it is carried exactly as
    ``theta0 + t``.  Every entry into ``cap`` is logged by the time of the
    first sample found inside; with ``halt_on_hit`` integration stops there.
    A non-finite state ends the trace with ``completed=False`` and
    ``failure`` set.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon!r}")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if steps < 1:
        raise ValueError(f"steps must be at least 1, got {steps!r}")

    rhs = _sphere_rhs(psi, epsilon)
    value = psi.value
    h = float(dt)
    h2 = 0.5 * h
    h6 = h / 6.0

    x, y, z = start.p
    times = [0.0]
    pts = [(x, y, z)]
    vals = [value(x, y, z)]
    hits: list[float] = []
    inside = cap is not None and cap.contains((x, y, z))
    if inside:
        hits.append(0.0)
    halted = inside and halt_on_hit
    failure = None

    n = 0
    while not halted and n < steps:
        try:
            k1 = rhs(x, y, z)
            k2 = rhs(x + h2 * k1[0], y + h2 * k1[1], z + h2 * k1[2])
            k3 = rhs(x + h2 * k2[0], y + h2 * k2[1], z + h2 * k2[2])
            k4 = rhs(x + h * k3[0], y + h * k3[1], z + h * k3[2])
            nx = x + h6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
            ny = y + h6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
            nz = z + h6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
            norm = math.sqrt(nx * nx + ny * ny + nz * nz)
        except OverflowError:
            norm = math.inf
        if not (math.isfinite(norm) and norm > 0.0):
            failure = f"non-finite state at step {n + 1} (t={(n + 1) * h!r})"
            break
        x, y, z = nx / norm, ny / norm, nz / norm
        n += 1
        t = n * h
        try:
            v = value(x, y, z)
        except OverflowError:
            v = math.inf
        if not math.isfinite(v):
            failure = f"non-finite psi value at step {n} (t={t!r})"
            break
        times.append(t)
        pts.append((x, y, z))
        vals.append(v)
        if cap is not None:
            now_inside = cap.contains((x, y, z))
            if now_inside and not inside:
                hits.append(t)
                halted = halt_on_hit
            inside = now_inside

    return OrbitTrace(
        psi=psi,
        epsilon=float(epsilon),
        dt=h,
        start_theta=start.theta,
        times=np.array(times),
        points=np.array(pts),
        psi_values=np.array(vals),
        cap_hits=hits,
        completed=failure is None and not halted,
        halted=halted,
        failure=failure,
    )


def poincare_section(trace: OrbitTrace) -> list[np.ndarray]:
    """Points of the orbit where theta crosses zero, by Hermite interpolation.

    The start time is never counted, even when the orbit starts at theta = 0.
    """
    times = trace.times
    if len(times) < 2:
        return []
    t_end = times[-1]
    slack = 1e-9 * max(1.0, t_end)
    rhs = _sphere_rhs(trace.psi, trace.epsilon)
    out = []
    m = 1
    while True:
        tc = m * TWO_PI - trace.start_theta
        if tc > t_end + slack:
            break
        m += 1
        if tc <= 0.0:
            continue
        tc = min(tc, t_end)
        i = int(np.searchsorted(times, tc, side="left"))
        i = min(max(i, 1), len(times) - 1)
        t0, t1 = times[i - 1], times[i]
        p0, p1 = trace.points[i - 1], trace.points[i]
        h = t1 - t0
        s = (tc - t0) / h
        v0 = np.array(rhs(*p0))
        v1 = np.array(rhs(*p1))
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        q = h00 * p0 + h10 * h * v0 + h01 * p1 + h11 * h * v1
        out.append(q / np.linalg.norm(q))
    return out


@dataclass(frozen=True)
class LevelSetVerdict:
    ok: bool
    witness_level: float | None
    bands: int
    unmet_bands: int
    psi_range: tuple[float, float]
    cap_range: tuple[float, float]

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "witness_level": self.witness_level,
            "bands": self.bands,
            "unmet_bands": self.unmet_bands,
            "psi_range": list(self.psi_range),
            "cap_range": list(self.cap_range),
        }


def _sphere_grid(n: int) -> np.ndarray:
    lat = np.linspace(0.0, math.pi, n + 1)
    lon = np.linspace(0.0, TWO_PI, 2 * n, endpoint=False)
    th, ph = np.meshgrid(lat, lon, indexing="ij")
    return np.stack(
        [np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1
    ).reshape(-1, 3)


def _cap_grid(cap: CapRegion, n: int) -> np.ndarray:
    c = np.array(cap.center)
    # orthonormal frame with c as the pole
    a = np.array([1.0, 0.0, 0.0]) if abs(c[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(c, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(c, e1)
    rad = np.linspace(0.0, cap.angular_radius, n + 1)
    lon = np.linspace(0.0, TWO_PI, 2 * n, endpoint=False)
    r, ph = np.meshgrid(rad, lon, indexing="ij")
    r = r[..., None]
    ph = ph[..., None]
    pts = np.cos(r) * c + np.sin(r) * (np.cos(ph) * e1 + np.sin(ph) * e2)
    return pts.reshape(-1, 3)


def verify_level_sets_meet_cap(
    psi: ScalarField, cap: CapRegion, grid_resolution: int = 64
) -> LevelSetVerdict:
    """Check on a grid that every occupied level band of ``psi`` reaches the cap.

    The range of ``psi`` over the sphere is cut into ``grid_resolution``
    equal bands.  The cap is connected, so ``psi`` takes an interval of
    values on it; a band occupied by sphere samples passes when it overlaps
    that interval.  On failure the witness is the sampled level farthest
    from the cap's values.
    """
    if grid_resolution < 16:
        raise ValueError(f"grid_resolution must be at least 16, got {grid_resolution}")
    vals = np.array([psi.value(*p) for p in _sphere_grid(grid_resolution)])
    cap_vals = np.array([psi.value(*p) for p in _cap_grid(cap, grid_resolution)])
    lo, hi = float(vals.min()), float(vals.max())
    clo, chi = float(cap_vals.min()), float(cap_vals.max())
    lo, hi = min(lo, clo), max(hi, chi)

    nb = grid_resolution
    width = (hi - lo) / nb
    if width <= 1e-12 * max(1.0, abs(lo), abs(hi)):
        return LevelSetVerdict(True, None, 1, 0, (lo, hi), (clo, chi))
    idx = np.minimum(((vals - lo) / width).astype(int), nb - 1)
    occupied = np.unique(idx)
    unmet = [
        b for b in occupied if lo + (b + 1) * width < clo or lo + b * width > chi
    ]
    if not unmet:
        return LevelSetVerdict(True, None, len(occupied), 0, (lo, hi), (clo, chi))
    bad = vals[np.isin(idx, unmet)]
    dist = np.maximum(clo - bad, bad - chi)
    witness = float(bad[np.argmax(dist)])
    return LevelSetVerdict(False, witness, len(occupied), len(unmet), (lo, hi), (clo, chi))


def random_start(seed: int) -> FlowState:
    """Uniform random start on S1 x S2, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=3)
    theta = rng.uniform(0.0, TWO_PI)
    return FlowState(theta, tuple(v / np.linalg.norm(v)))


def run_ensemble(
    psi: ScalarField,
    epsilon: float,
    dt: float,
    steps: int,
    seeds: Sequence[int],
    cap: CapRegion | None = None,
    halt_on_hit: bool = False,
    start: FlowState | None = None,
) -> list[tuple[int, FlowState, OrbitTrace]]:
    """Integrate one orbit per seed; results come back in seed order.

    A fixed ``start`` is used for every seed when given.
    """
    runs = []
    for seed in seeds:
        s = start if start is not None else random_start(seed)
        runs.append((seed, s, integrate_orbit(psi, epsilon, s, dt, steps, cap, halt_on_hit)))
    return runs
