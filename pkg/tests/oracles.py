"""Independent oracles used to freeze expected values.

Everything here deliberately avoids the package's own discretizations:
1D shooting and 1D finite elements for radial problems, dense Gauss grids
for areas, Bessel zeros for disks and annuli, closed forms where the
integrals are elementary.
"""

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq
from scipy.sparse import diags
from scipy.sparse.linalg import eigsh
from scipy.special import j0, jn_zeros, y0

EIGHT_PI = 8.0 * np.pi


def disk_mass_exact(lam: float, delta: float) -> float:
    """Closed form of the radial weight's mass over the centered disk."""
    return np.pi * delta ** 2 * lam ** 2 / (1.0 + lam ** 2 * delta ** 2 / 8.0)


def disk_boundary_exact(lam: float, delta: float) -> float:
    """Closed form of the weighted boundary length of the centered disk."""
    return 2.0 * np.pi * delta * lam / (1.0 + lam ** 2 * delta ** 2 / 8.0)


def disk_mass_quadrature(lam: float, delta: float) -> float:
    val, _ = quad(lambda r: 2 * np.pi * r * (lam / (1 + lam ** 2 * r ** 2 / 8)) ** 2,
                  0.0, delta, epsabs=1e-12, epsrel=1e-12)
    return val


def bessel_j0_zero() -> float:
    return float(jn_zeros(0, 1)[0])


def annulus_first_dirichlet(r_in: float, r_out: float) -> float:
    """Smallest Dirichlet Laplace eigenvalue of the annulus, via the first
    zero of the Bessel cross-product."""
    def cross(k):
        return j0(k * r_in) * y0(k * r_out) - j0(k * r_out) * y0(k * r_in)
    guess = np.pi / (r_out - r_in)
    k = brentq(cross, 0.5 * guess, 1.5 * guess, xtol=1e-12)
    return k * k


def gelfand_profile(center_value: float, r_max: float = 1.0, n: int = 2000):
    """Radial shoot of u'' + u'/r + e^u = 0, u(0)=a, u'(0)=0."""
    def rhs(r, y):
        u, v = y
        if r == 0.0:
            return [v, -np.exp(u) / 2.0]
        return [v, -v / r - np.exp(u)]
    sol = solve_ivp(rhs, (1e-12, r_max), [center_value, 0.0],
                    rtol=1e-11, atol=1e-12, dense_output=True)
    return sol


def gelfand_center_for_boundary(boundary_value: float):
    """Minimal-branch center value with u(1) = boundary_value, or None when
    the data sits beyond the fold (max of u(1) along the branch is ln 2)."""
    def shoot(a):
        return gelfand_profile(a).y[0][-1] - boundary_value
    lo, hi = -30.0, np.log(8.0)
    if shoot(hi) < 0 and shoot(lo) < 0:
        return None
    try:
        return brentq(shoot, lo, hi, xtol=1e-11)
    except ValueError:
        return None


def radial_weighted_nu1(weight_of_r, R: float, n: int = 3000) -> float:
    """First eigenvalue of -(r phi')' = nu r e^{W(r)} phi, phi(R)=0, by 1D
    linear finite elements on a uniform radial grid."""
    r = np.linspace(0.0, R, n + 1)
    dr = r[1] - r[0]
    rm = 0.5 * (r[:-1] + r[1:])
    k_main = np.zeros(n + 1)
    k_off = -rm / dr
    np.add.at(k_main, np.arange(n), rm / dr)
    np.add.at(k_main, np.arange(1, n + 1), rm / dr)
    # weighted mass, 2-point Gauss per element, P1 basis
    g1, g2 = 0.5 - 0.5 / np.sqrt(3), 0.5 + 0.5 / np.sqrt(3)
    m_main = np.zeros(n + 1)
    m_off = np.zeros(n)
    for g in (g1, g2):
        rg = r[:-1] + g * dr
        wgt = 0.5 * dr * rg * np.exp(weight_of_r(rg))
        m_off += wgt * (1 - g) * g
        np.add.at(m_main, np.arange(n), wgt * (1 - g) ** 2)
        np.add.at(m_main, np.arange(1, n + 1), wgt * g ** 2)
    K = diags([k_off[:-1], k_main[:-1], k_off[:-1]], [-1, 0, 1]).tocsc()
    M = diags([m_off[:-1], m_main[:-1], m_off[:-1]], [-1, 0, 1]).tocsc()
    vals = eigsh(K, k=1, M=M, sigma=0, which="LM")[0]
    return float(vals[0])


def u_lambda_radial(lam: float):
    def w(r):
        return 2 * np.log(lam) - 2 * np.log1p(lam ** 2 * r ** 2 / 8)
    return w


def lambda_for_mass(mass: float, delta: float = 1.0) -> float:
    """lam with disk_mass_exact(lam, delta) = mass."""
    return np.sqrt(mass / (np.pi * delta ** 2) * EIGHT_PI / (EIGHT_PI - mass))


def huber_defect_radial(h_of_r, r_out: float, r_in: float = 0.0) -> float:
    """(int_bnd e^{h/2})^2 - 4 pi int e^h for a radial field by quadrature."""
    mass, _ = quad(lambda r: 2 * np.pi * r * np.exp(h_of_r(r)), r_in, r_out,
                   epsabs=1e-12, epsrel=1e-12)
    bnd = 2 * np.pi * r_out * np.exp(0.5 * h_of_r(r_out))
    if r_in > 0:
        bnd += 2 * np.pi * r_in * np.exp(0.5 * h_of_r(r_in))
    return bnd ** 2 - 4 * np.pi * mass


def mapped_area_gauss(coefficients, n_r: int = 120, n_th: int = 512) -> float:
    """Area of the polynomial map's image by a dense polar Gauss grid of
    |Phi'|^2 over the unit disk."""
    x, wx = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * (x + 1.0)
    wr = 0.5 * wx
    th = 2 * np.pi * np.arange(n_th) / n_th
    z = r[:, None] * np.exp(1j * th[None, :])
    dphi = np.zeros_like(z)
    for k, c in enumerate(coefficients, start=1):
        dphi += k * c * z ** (k - 1)
    integrand = np.abs(dphi) ** 2 * r[:, None]
    return float((integrand.sum(axis=1) * (2 * np.pi / n_th) * wr).sum())


def disk_exp_mass_of_radius(r: float) -> float:
    """int_{B_r} e^{U_1} from the closed form."""
    return EIGHT_PI * r * r / (8.0 + r * r)


def _u_lambda_xy(lam, x, y):
    return 2 * np.log(lam) - 2 * np.log1p(lam ** 2 * (x * x + y * y) / 8.0)


def offcenter_disk_mass(lam: float, radius: float, center,
                        n_r: int = 200, n_th: int = 1024) -> float:
    """int over a translated disk of the centered radial weight, by a dense
    polar Gauss grid around the disk's own center."""
    x0, y0 = center
    xg, wx = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * radius * (xg + 1.0)
    wr = 0.5 * radius * wx
    th = 2 * np.pi * np.arange(n_th) / n_th
    X = x0 + r[:, None] * np.cos(th)[None, :]
    Y = y0 + r[:, None] * np.sin(th)[None, :]
    vals = np.exp(_u_lambda_xy(lam, X, Y)) * r[:, None]
    return float((vals.sum(axis=1) * (2 * np.pi / n_th) * wr).sum())


def offcenter_circle_weighted_length(lam: float, radius: float, center,
                                     n_th: int = 4096) -> float:
    """int of e^{w/2} along a translated circle for the centered radial
    weight, by the trapezoid rule (periodic, spectrally accurate)."""
    x0, y0 = center
    th = 2 * np.pi * np.arange(n_th) / n_th
    X = x0 + radius * np.cos(th)
    Y = y0 + radius * np.sin(th)
    vals = np.exp(0.5 * _u_lambda_xy(lam, X, Y))
    return float(vals.sum() * (2 * np.pi * radius / n_th))
