"""Closed-form univalent maps of the unit disk and the pullback weight.

Three families are supported, all with exact derivatives:

* ``scale``:  delta * e^{i theta} * z
* ``poly``:   a1 z + a2 z^2 + ... (small coefficients)
* ``mobius``: delta * e^{i theta} * (z - a)/(1 - conj(a) z), |a| < 1

Univalence is certified by sampling: 720 boundary images must be pairwise
separated and wind once around the image, and |Phi'| must stay positive on a
grid of the closed disk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import ScalarField, u_lambda
from .mesh import Mesh, MappedGeometry

__all__ = ["ConformalMap", "NotInImage", "parse_map", "pullback_field"]

_UNIVALENCE_SAMPLES = 720
_UNIVALENCE_TOL = 1e-9


class NotInImage(RuntimeError):
    """Newton inversion left the closed unit disk and would not return."""


@dataclass(frozen=True)
class ConformalMap:
    """Conformal map of the closed unit disk with closed-form derivative."""

    kind: str                      # "scale" | "poly" | "mobius"
    coefficients: tuple            # kind-specific complex parameters

    def __post_init__(self):
        if self.kind not in ("scale", "poly", "mobius"):
            raise ValueError(f"unknown map kind {self.kind!r}")
        object.__setattr__(self, "coefficients",
                           tuple(complex(c) for c in self.coefficients))

    # -- constructors ------------------------------------------------------
    @classmethod
    def scaled_rotation(cls, delta: float, theta: float = 0.0) -> "ConformalMap":
        if delta <= 0:
            raise ValueError("scale factor must be positive")
        return cls("scale", (delta * np.exp(1j * theta),))

    @classmethod
    def polynomial(cls, coefficients) -> "ConformalMap":
        coeffs = tuple(complex(c) for c in coefficients)
        if not coeffs or coeffs[0] == 0:
            raise ValueError("polynomial map needs a nonzero linear coefficient")
        return cls("poly", coeffs)

    @classmethod
    def disk_automorphism(cls, a: complex, delta: float = 1.0,
                          theta: float = 0.0) -> "ConformalMap":
        if abs(a) >= 1:
            raise ValueError("automorphism parameter must satisfy |a| < 1")
        return cls("mobius", (delta * np.exp(1j * theta), complex(a)))

    # -- evaluation --------------------------------------------------------
    def _eval_raw(self, z: np.ndarray) -> np.ndarray:
        if self.kind == "scale":
            return self.coefficients[0] * z
        if self.kind == "poly":
            out = np.zeros_like(z)
            for k, c in enumerate(self.coefficients, start=1):
                out = out + c * z ** k
            return out
        s, a = self.coefficients
        return s * (z - a) / (1.0 - np.conj(a) * z)

    def _deriv_raw(self, z: np.ndarray) -> np.ndarray:
        if self.kind == "scale":
            return np.full_like(z, self.coefficients[0])
        if self.kind == "poly":
            out = np.zeros_like(z)
            for k, c in enumerate(self.coefficients, start=1):
                out = out + k * c * z ** (k - 1)
            return out
        s, a = self.coefficients
        return s * (1.0 - np.abs(a) ** 2) / (1.0 - np.conj(a) * z) ** 2

    def evaluate(self, z):
        """Phi(z) for complex scalars or arrays with |z| <= 1."""
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1 + 1e-12):
            raise ValueError("evaluate: point outside the closed unit disk")
        out = self._eval_raw(z)
        return out if out.shape else complex(out)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1 + 1e-12):
            raise ValueError("derivative: point outside the closed unit disk")
        out = self._deriv_raw(z)
        return out if out.shape else complex(out)

    def scaled(self, factor: float) -> "ConformalMap":
        """The map x -> factor * Phi(x); stays inside the same family."""
        if self.kind == "scale":
            return ConformalMap("scale", (factor * self.coefficients[0],))
        if self.kind == "poly":
            return ConformalMap("poly", tuple(factor * c for c in self.coefficients))
        s, a = self.coefficients
        return ConformalMap("mobius", (factor * s, a))

    # -- certification and inversion ----------------------------------------
    def univalence_check(self) -> bool:
        """Sampled univalence certificate on the closed disk.

        Requires (a) no zero of Phi' inside (argument principle on the
        boundary image of Phi'), (b) a simple boundary image (segment
        self-intersection scan over 720 samples), and (c) the boundary image
        winding once around an interior image point.
        """
        th = 2.0 * np.pi * np.arange(_UNIVALENCE_SAMPLES) / _UNIVALENCE_SAMPLES
        ring = np.exp(1j * th)
        img = np.asarray(self.evaluate(ring))
        dimg = np.asarray(self.derivative(ring))
        if np.abs(dimg).min() <= _UNIVALENCE_TOL:
            return False
        if _winding(dimg) != 0:  # zeros of Phi' inside the disk
            return False
        z0 = complex(np.asarray(self.evaluate(0.0)))
        if _winding(img - z0) != 1:
            return False
        return not _polyline_self_intersects(img)

    def invert(self, x, tol: float = 1e-12, max_iter: int = 80):
        """Newton solve of Phi(z) = x for points in the closed image."""
        x = np.asarray(x, dtype=complex)
        scalar = x.shape == ()
        xf = np.atleast_1d(x).astype(complex)
        z = (xf - self._eval_raw(np.zeros_like(xf))) / complex(self._deriv_raw(np.zeros(1, complex))[0])
        r = np.abs(z)
        z = np.where(r > 1.0, z / r, z)
        converged = False
        for _ in range(max_iter):
            f = self._eval_raw(z) - xf
            if np.abs(f).max() <= tol:
                converged = True
                break
            z = z - f / self._deriv_raw(z)
            # keep iterates near the closed disk; persistent escape = no preimage
            cap = 1.25
            if self.kind == "mobius":
                cap = min(cap, 0.5 * (1.0 + 1.0 / abs(self.coefficients[1])) if self.coefficients[1] else cap)
            r = np.abs(z)
            z = np.where(r > cap, cap * z / r, z)
        if not converged or np.abs(z).max() > 1.0 + 1e-7:
            raise NotInImage("no preimage in the closed unit disk")
        r = np.abs(z)
        z = np.where(r > 1.0, z / r, z)
        return complex(z[0]) if scalar else z

    def __repr__(self) -> str:
        cs = ", ".join(f"{c:.6g}" for c in self.coefficients)
        return f"ConformalMap({self.kind}: {cs})"


def _winding(curve: np.ndarray) -> int:
    """Winding number of a sampled closed curve about the origin."""
    ang = np.angle(np.append(curve, curve[0]))
    incr = np.diff(ang)
    incr = (incr + np.pi) % (2.0 * np.pi) - np.pi
    return int(round(float(incr.sum()) / (2.0 * np.pi)))


def _polyline_self_intersects(img: np.ndarray) -> bool:
    """Proper-crossing test over all non-adjacent segment pairs of the
    closed polyline through the sampled points."""
    n = len(img)
    a = np.column_stack([img.real, img.imag])
    b = np.roll(a, -1, axis=0)

    def orient(p, q, r):
        return ((q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1])
                - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0]))

    p1 = a[:, None, :]
    p2 = b[:, None, :]
    q1 = a[None, :, :]
    q2 = b[None, :, :]
    d1 = orient(p1, p2, q1)
    d2 = orient(p1, p2, q2)
    d3 = orient(q1, q2, p1)
    d4 = orient(q1, q2, p2)
    proper = (d1 * d2 < 0) & (d3 * d4 < 0)
    idx = np.arange(n)
    gap = (idx[:, None] - idx[None, :]) % n
    adjacent = (gap == 0) | (gap == 1) | (gap == n - 1)
    return bool(np.any(proper & ~adjacent))


def parse_map(spec: str) -> ConformalMap:
    """Parse CLI map syntax.

    ``scale:DELTA,THETA`` | ``poly:A1,A2,...`` | ``mobius:DELTA,THETA,AX,AY``
    """
    try:
        kind, _, payload = spec.partition(":")
        parts = [float(p) for p in payload.split(",") if p != ""]
        if kind == "scale":
            delta = parts[0]
            theta = parts[1] if len(parts) > 1 else 0.0
            return ConformalMap.scaled_rotation(delta, theta)
        if kind == "poly":
            return ConformalMap.polynomial(parts)
        if kind == "mobius":
            delta, theta, ax, ay = parts
            return ConformalMap.disk_automorphism(complex(ax, ay), delta, theta)
    except (ValueError, IndexError) as exc:
        raise ValueError(f"cannot parse map spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown map kind in {spec!r}")


def pullback_field(map: ConformalMap, lam: float, mesh: Mesh) -> ScalarField:
    """Weight w with e^{w(Phi(z))} |Phi'(z)|^2 = e^{U_lam(z)} on the mapped mesh.

    The mesh must come from ``mesh_mapped_disk`` with the same map so the
    unit-disk preimages are available; otherwise the preimages are recovered
    by Newton inversion.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if mesh.preimage is not None and isinstance(mesh.geometry, MappedGeometry) \
            and mesh.geometry.map == map:
        pre = mesh.preimage
        z = pre[:, 0] + 1j * pre[:, 1]
    else:
        x = mesh.vertices[:, 0] + 1j * mesh.vertices[:, 1]
        z = np.asarray(map.invert(x))
    vals = u_lambda(lam, np.column_stack([z.real, z.imag])) \
        - 2.0 * np.log(np.abs(np.asarray(map.derivative(z))))
    return ScalarField(mesh=mesh, values=vals)
