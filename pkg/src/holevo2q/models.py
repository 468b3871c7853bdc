"""Built-in parametric model families.

Each family maps a parameter pair theta = (theta1, theta2) to a
:class:`~holevo2q.bloch.BlochModelPoint`:

* :class:`Unitary` -- fixed-length Bloch vector in spherical angles,
  optionally rotated by a frame; globally D-invariant.
* :class:`Planar` -- s = f1(theta) u1 + f2(theta) u2 with polynomial
  coefficient functions; asymptotically classical everywhere.
* :class:`GenericZ` -- s = (theta1, theta2, theta0) with fixed height
  theta0; generic away from the axes' origin.
* :class:`Explicit` -- any user-supplied s(theta), differentiated by
  central finite differences of step ``h`` (O(h^2) error).

Families serialize to plain JSON descriptors (``to_descriptor`` /
``from_descriptor``) so the CLI can load them from files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bloch import BlochModelPoint
from .errors import DomainError, PureStateError

__all__ = [
    "DEFAULT_FD_STEP",
    "Poly2D",
    "Domain",
    "Unitary",
    "Planar",
    "GenericZ",
    "Explicit",
    "ModelFamily",
    "evaluate",
    "from_descriptor",
    "load_model",
    "n_copy_bound",
]

DEFAULT_FD_STEP = 1e-5


@dataclass(frozen=True)
class Poly2D:
    """Bivariate polynomial f(x, y) = sum_ij c[i, j] x^i y^j."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if c.ndim != 2:
            raise DomainError("polynomial coefficients must form a 2-d array")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, x: float, y: float) -> float:
        xs = x ** np.arange(self.coeffs.shape[0])
        ys = y ** np.arange(self.coeffs.shape[1])
        return float(xs @ self.coeffs @ ys)

    def dx(self) -> Poly2D:
        c = self.coeffs
        if c.shape[0] == 1:
            return Poly2D(np.zeros((1, c.shape[1])))
        rows = np.arange(1, c.shape[0])
        return Poly2D(c[1:, :] * rows[:, None])

    def dy(self) -> Poly2D:
        c = self.coeffs
        if c.shape[1] == 1:
            return Poly2D(np.zeros((c.shape[0], 1)))
        cols = np.arange(1, c.shape[1])
        return Poly2D(c[:, 1:] * cols[None, :])

    def tolist(self) -> list:
        return self.coeffs.tolist()


@dataclass(frozen=True)
class Domain:
    """Rectangle in parameter space; evaluation outside raises DomainError."""

    theta1: tuple[float, float]
    theta2: tuple[float, float]

    def __post_init__(self):
        for name in ("theta1", "theta2"):
            lo, hi = (float(v) for v in getattr(self, name))
            if not lo < hi:
                raise DomainError(f"domain interval {name} = ({lo}, {hi}) is empty")
            object.__setattr__(self, name, (lo, hi))

    def contains(self, theta) -> bool:
        t1, t2 = float(theta[0]), float(theta[1])
        return self.theta1[0] <= t1 <= self.theta1[1] and self.theta2[0] <= t2 <= self.theta2[1]

    def require(self, theta) -> None:
        if not self.contains(theta):
            raise DomainError(f"theta = {tuple(theta)} outside domain {self}")

    def to_descriptor(self) -> dict:
        return {"theta1": list(self.theta1), "theta2": list(self.theta2)}


def _check_theta(theta) -> tuple[float, float]:
    t = np.asarray(theta, dtype=float)
    if t.shape != (2,) or not np.all(np.isfinite(t)):
        raise DomainError(f"theta must be a finite 2-vector, got {theta!r}")
    return float(t[0]), float(t[1])


def _point(s, d1s, d2s) -> BlochModelPoint:
    if float(np.dot(s, s)) >= 1.0:
        raise PureStateError(f"family evaluates to |s| = {np.linalg.norm(s):.6g} >= 1")
    return BlochModelPoint(s=s, d1s=d1s, d2s=d2s)


@dataclass(frozen=True)
class Unitary:
    """Fixed-length Bloch vector r (sin t1 cos t2, sin t1 sin t2, cos t1),
    optionally mapped through an orthonormal frame.  Globally D-invariant."""

    radius: float
    axes: np.ndarray = field(default_factory=lambda: np.eye(3))
    domain: Domain = field(
        default_factory=lambda: Domain((0.2, np.pi - 0.2), (0.0, 2.0 * np.pi))
    )

    kind = "unitary"

    def __post_init__(self):
        r = float(self.radius)
        if not 0.0 < r < 1.0:
            raise DomainError(f"unitary family radius must lie in (0, 1), got {r}")
        object.__setattr__(self, "radius", r)
        a = np.asarray(self.axes, dtype=float)
        if a.shape != (3, 3) or np.abs(a @ a.T - np.eye(3)).max() > 1e-10:
            raise DomainError("axes must form a 3x3 orthogonal matrix")
        object.__setattr__(self, "axes", a)

    def evaluate(self, theta) -> BlochModelPoint:
        t1, t2 = _check_theta(theta)
        self.domain.require((t1, t2))
        r, a = self.radius, self.axes
        sin1, cos1 = np.sin(t1), np.cos(t1)
        sin2, cos2 = np.sin(t2), np.cos(t2)
        s = r * a @ np.array([sin1 * cos2, sin1 * sin2, cos1])
        d1 = r * a @ np.array([cos1 * cos2, cos1 * sin2, -sin1])
        d2 = r * a @ np.array([-sin1 * sin2, sin1 * cos2, 0.0])
        return _point(s, d1, d2)

    def to_descriptor(self) -> dict:
        return {
            "kind": self.kind,
            "radius": self.radius,
            "axes": self.axes.tolist(),
            "domain": self.domain.to_descriptor(),
        }


@dataclass(frozen=True)
class Planar:
    """s = f1(theta) u1 + f2(theta) u2 with unit (not necessarily orthogonal)
    vectors u_i and polynomial f_i.  Asymptotically classical everywhere."""

    u1: np.ndarray
    u2: np.ndarray
    f1: Poly2D = field(default_factory=lambda: Poly2D([[0.0, 0.0], [1.0, 0.0]]))
    f2: Poly2D = field(default_factory=lambda: Poly2D([[0.0, 1.0], [0.0, 0.0]]))
    domain: Domain = field(default_factory=lambda: Domain((-0.7, 0.7), (-0.7, 0.7)))

    kind = "planar"

    def __post_init__(self):
        for name in ("u1", "u2"):
            u = np.asarray(getattr(self, name), dtype=float)
            if u.shape != (3,) or abs(np.linalg.norm(u) - 1.0) > 1e-10:
                raise DomainError(f"{name} must be a unit 3-vector")
            object.__setattr__(self, name, u)
        cross = np.linalg.norm(np.cross(self.u1, self.u2))
        if cross < 1e-10:
            raise DomainError("u1 and u2 must be linearly independent")

    def evaluate(self, theta) -> BlochModelPoint:
        t1, t2 = _check_theta(theta)
        self.domain.require((t1, t2))
        s = self.f1(t1, t2) * self.u1 + self.f2(t1, t2) * self.u2
        d1 = self.f1.dx()(t1, t2) * self.u1 + self.f2.dx()(t1, t2) * self.u2
        d2 = self.f1.dy()(t1, t2) * self.u1 + self.f2.dy()(t1, t2) * self.u2
        return _point(s, d1, d2)

    def to_descriptor(self) -> dict:
        return {
            "kind": self.kind,
            "u1": self.u1.tolist(),
            "u2": self.u2.tolist(),
            "f1": self.f1.tolist(),
            "f2": self.f2.tolist(),
            "domain": self.domain.to_descriptor(),
        }


def _generic_z_domain(theta0: float) -> Domain:
    r = np.sqrt(1.0 - theta0**2)
    return Domain((-r, r), (-r, r))


@dataclass(frozen=True)
class GenericZ:
    """s = (theta1, theta2, theta0) with fixed 0 < |theta0| < 1.

    Neither D-invariant nor asymptotically classical wherever both theta
    components are nonzero; D-invariant exactly at theta = (0, 0)."""

    theta0: float
    domain: Domain | None = None

    kind = "generic_z"

    def __post_init__(self):
        t0 = float(self.theta0)
        if not 0.0 < abs(t0) < 1.0:
            raise DomainError(f"generic-z height must satisfy 0 < |theta0| < 1, got {t0}")
        object.__setattr__(self, "theta0", t0)
        if self.domain is None:
            object.__setattr__(self, "domain", _generic_z_domain(t0))

    def evaluate(self, theta) -> BlochModelPoint:
        t1, t2 = _check_theta(theta)
        self.domain.require((t1, t2))
        s = np.array([t1, t2, self.theta0])
        return _point(s, np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]))

    def to_descriptor(self) -> dict:
        return {
            "kind": self.kind,
            "theta0": self.theta0,
            "domain": self.domain.to_descriptor(),
        }


@dataclass(frozen=True)
class Explicit:
    """User-supplied s(theta) with finite-difference derivatives.

    ``func`` maps a 2-vector to a real 3-vector.  When built from a JSON
    descriptor the three components are :class:`Poly2D`; direct library use
    may pass any callable.  Derivatives are central differences of step
    ``step`` (error O(step^2))."""

    func: Callable[[np.ndarray], np.ndarray]
    step: float = DEFAULT_FD_STEP
    domain: Domain = field(default_factory=lambda: Domain((-0.7, 0.7), (-0.7, 0.7)))
    components: tuple[Poly2D, Poly2D, Poly2D] | None = None

    kind = "explicit"

    def __post_init__(self):
        if not 0.0 < self.step < 1e-1:
            raise DomainError(f"finite-difference step {self.step} out of range")

    @classmethod
    def from_polynomials(cls, components, step: float = DEFAULT_FD_STEP,
                         domain: Domain | None = None) -> Explicit:
        polys = tuple(p if isinstance(p, Poly2D) else Poly2D(p) for p in components)
        if len(polys) != 3:
            raise DomainError("explicit family needs exactly 3 component polynomials")

        def func(theta):
            t1, t2 = float(theta[0]), float(theta[1])
            return np.array([p(t1, t2) for p in polys])

        kwargs = {} if domain is None else {"domain": domain}
        return cls(func=func, step=step, components=polys, **kwargs)

    def evaluate(self, theta) -> BlochModelPoint:
        t1, t2 = _check_theta(theta)
        self.domain.require((t1, t2))
        t = np.array([t1, t2])
        h = self.step
        s = np.asarray(self.func(t), dtype=float)
        e1 = np.array([h, 0.0])
        e2 = np.array([0.0, h])
        d1 = (np.asarray(self.func(t + e1)) - np.asarray(self.func(t - e1))) / (2.0 * h)
        d2 = (np.asarray(self.func(t + e2)) - np.asarray(self.func(t - e2))) / (2.0 * h)
        return _point(s, d1, d2)

    def to_descriptor(self) -> dict:
        if self.components is None:
            raise DomainError("only polynomial-backed explicit families serialize to JSON")
        return {
            "kind": self.kind,
            "components": [p.tolist() for p in self.components],
            "step": self.step,
            "domain": self.domain.to_descriptor(),
        }


ModelFamily = Unitary | Planar | GenericZ | Explicit


def evaluate(family: ModelFamily, theta) -> BlochModelPoint:
    """Evaluate a family at a parameter point."""
    return family.evaluate(theta)


def from_descriptor(desc: dict) -> ModelFamily:
    """Build a family from a JSON descriptor dictionary."""
    if not isinstance(desc, dict) or "kind" not in desc:
        raise DomainError("model descriptor must be an object with a 'kind' key")
    kind = desc["kind"]
    domain = None
    if "domain" in desc:
        d = desc["domain"]
        domain = Domain(tuple(d["theta1"]), tuple(d["theta2"]))
    try:
        if kind == "generic_z":
            kwargs = {"theta0": desc["theta0"]}
            if domain is not None:
                kwargs["domain"] = domain
            return GenericZ(**kwargs)
        if kind == "unitary":
            kwargs = {"radius": desc["radius"]}
            if "axes" in desc:
                kwargs["axes"] = np.asarray(desc["axes"], dtype=float)
            if domain is not None:
                kwargs["domain"] = domain
            return Unitary(**kwargs)
        if kind == "planar":
            kwargs = {
                "u1": np.asarray(desc["u1"], dtype=float),
                "u2": np.asarray(desc["u2"], dtype=float),
            }
            if "f1" in desc:
                kwargs["f1"] = Poly2D(desc["f1"])
            if "f2" in desc:
                kwargs["f2"] = Poly2D(desc["f2"])
            if domain is not None:
                kwargs["domain"] = domain
            return Planar(**kwargs)
        if kind == "explicit":
            return Explicit.from_polynomials(
                desc["components"],
                step=desc.get("step", DEFAULT_FD_STEP),
                domain=domain,
            )
    except KeyError as exc:
        raise DomainError(f"model descriptor missing required key {exc}") from exc
    raise DomainError(f"unknown model kind {kind!r}")


def load_model(path) -> ModelFamily:
    """Load a family from a JSON descriptor file."""
    import json

    with open(path, "r", encoding="utf-8") as fh:
        return from_descriptor(json.load(fh))


def n_copy_bound(single_copy_value: float, n: int) -> float:
    """Additivity of the Holevo bound over i.i.d. copies: value / n."""
    if n < 1:
        raise DomainError("copy count must be a positive integer")
    return single_copy_value / n
