"""Closed-form petrophysical and elastic relations.

Elastic moduli use velocities in ft/us, density in g/cm3 and return psi,
with the 1.34e10 conversion factor. Sonic-derived velocities elsewhere in
the package are in km/s; :func:`kms_to_ftus` / :func:`ftus_to_kms` bridge
the two.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

MODULUS_FACTOR = 1.34e10
FT_PER_US_IN_KMS = 304.8
CASTAGNA_SLOPE = 0.80416
CASTAGNA_INTERCEPT = 0.85588


class NonPhysicalWarning(UserWarning):
    """Emitted when a relation produces a physically meaningless value."""


@dataclass(frozen=True)
class ElasticModuli:
    E: float
    K: float
    G: float
    C: float
    nu: float
    M: float
    lam: float


@dataclass(frozen=True)
class VelocityPair:
    vp: float
    vs: float
    rho: float
    unit: str = "km/s"


def ftus_to_kms(v):
    return np.asarray(v, dtype=float) * FT_PER_US_IN_KMS / 1000.0


def kms_to_ftus(v):
    return np.asarray(v, dtype=float) * 1000.0 / FT_PER_US_IN_KMS


def vp_from_dt(dt):
    """Compressional velocity in km/s from sonic transit time in us/ft."""
    dt = np.asarray(dt, dtype=float)
    if np.any(dt <= 0):
        raise ValueError("transit time must be positive")
    out = FT_PER_US_IN_KMS / dt
    return float(out) if out.ndim == 0 else out


def castagna_vs(vp, slope=CASTAGNA_SLOPE, intercept=CASTAGNA_INTERCEPT):
    """Mudrock-line shear velocity (km/s). Negative results warn."""
    vp = np.asarray(vp, dtype=float)
    vs = slope * vp - intercept
    if np.any(vs <= 0):
        warnings.warn(
            f"{int(np.sum(vs <= 0))} non-positive shear velocities from mudrock line",
            NonPhysicalWarning,
            stacklevel=2,
        )
    return float(vs) if vs.ndim == 0 else vs


def moduli_from_velocities(vp: float, vs: float, rho: float) -> ElasticModuli:
    """Dynamic moduli (psi) from vp, vs in ft/us and rho in g/cm3."""
    if rho <= 0:
        raise ValueError("density must be positive")
    if vs < 0:
        raise ValueError("shear velocity must be non-negative")
    vp2, vs2 = vp * vp, vs * vs
    if vp2 == vs2:
        raise ZeroDivisionError("vp == vs is a pole of the Young's modulus relation")
    K = MODULUS_FACTOR * rho * (3 * vp2 - 4 * vs2) / 3
    if K <= 0:
        raise ValueError("non-positive bulk modulus (vp too small relative to vs)")
    G = MODULUS_FACTOR * rho * vs2
    E = MODULUS_FACTOR * rho * vs2 * (3 * vp2 - 4 * vs2) / (vp2 - vs2)
    nu = (vp2 - 2 * vs2) / (2 * vp2 - 2 * vs2)
    return ElasticModuli(E=E, K=K, G=G, C=1.0 / K, nu=nu,
                         M=K + 4 * G / 3, lam=K - 2 * G / 3)


def velocities_from_moduli(moduli: ElasticModuli, rho: float) -> VelocityPair:
    """Invert moduli back to velocities in ft/us.

    vp uses the constrained modulus, vs the shear modulus, both scaled by
    the same factor as :func:`moduli_from_velocities`.
    """
    if rho <= 0:
        raise ValueError("density must be positive")
    if moduli.G < 0 or moduli.M <= 0:
        raise ValueError("negative modulus")
    vp = np.sqrt(moduli.M / (MODULUS_FACTOR * rho))
    vs = np.sqrt(moduli.G / (MODULUS_FACTOR * rho))
    return VelocityPair(vp=float(vp), vs=float(vs), rho=rho, unit="ft/us")


def vp_vs_ratio_from_poisson(nu):
    nu = np.asarray(nu, dtype=float)
    if np.any(nu >= 0.5) or np.any(nu < 0):
        raise ValueError("Poisson's ratio must lie in [0, 0.5)")
    out = np.sqrt((1 - nu) / (0.5 - nu))
    return float(out) if out.ndim == 0 else out


def gamma_ray_index(gr_log, gr_min: float, gr_max: float):
    """Gamma-ray index clipped to [0, 1]."""
    if gr_max <= gr_min:
        raise ValueError("gr_max must exceed gr_min")
    igr = np.clip((np.asarray(gr_log, dtype=float) - gr_min) / (gr_max - gr_min), 0.0, 1.0)
    return float(igr) if igr.ndim == 0 else igr


def vsh_linear(igr):
    return igr


def wyllie_porosity(dt, dt_matrix: float, dt_fluid: float):
    """Time-average sonic porosity, with dt_fluid as the pore-fluid transit time."""
    if dt_fluid == dt_matrix:
        raise ZeroDivisionError("dt_fluid equals dt_matrix")
    phi = (np.asarray(dt, dtype=float) - dt_matrix) / (dt_fluid - dt_matrix)
    return float(phi) if phi.ndim == 0 else phi


def density_porosity(rho_b, rho_matrix: float, rho_fluid: float):
    if rho_matrix == rho_fluid:
        raise ZeroDivisionError("rho_matrix equals rho_fluid")
    phi = (rho_matrix - np.asarray(rho_b, dtype=float)) / (rho_matrix - rho_fluid)
    return float(phi) if phi.ndim == 0 else phi


def neutron_response(phi, sxo, vsh, phi_nmf, phi_nhc, phi_sh, phi_nma):
    """Neutron log reading from the volumetric mix of filtrate, hydrocarbon,
    shale and matrix responses."""
    for name, v in (("phi", phi), ("sxo", sxo), ("vsh", vsh), ("phi_nmf", phi_nmf),
                    ("phi_nhc", phi_nhc), ("phi_sh", phi_sh), ("phi_nma", phi_nma)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name}={v} outside [0, 1]")
    if phi + vsh > 1.0:
        raise ValueError("phi + vsh exceeds 1")
    return (phi * sxo * phi_nmf + phi * (1 - sxo) * phi_nhc
            + vsh * phi_sh + (1 - phi - vsh) * phi_nma)


def gr_response(components, rho_b: float) -> float:
    """Gamma-ray reading from (density, volume fraction, activity) triples."""
    if rho_b <= 0:
        raise ValueError("bulk density must be positive")
    total = 0.0
    for rho_i, v_i, a_i in components:
        if v_i < 0:
            raise ValueError("volume fractions must be non-negative")
        total += rho_i * v_i * a_i
    return total / rho_b


def pe_index(components) -> float:
    """Photoelectric index from (atomic fraction, atomic number, weight) triples."""
    components = list(components)
    if not components:
        raise ValueError("need at least one component")
    num = sum(a * z ** 4 * p for a, z, p in components)
    den = sum(a * p for a, z, p in components)
    if den <= 0:
        raise ZeroDivisionError("sum of a_i * p_i must be positive")
    return num / den
