"""Seeded two-well synthetic field of layered sand/shale logs.

Porosity follows an exponential compaction trend with depth and is
reduced in shaly layers. GR, NPHI and RHOB respond linearly to porosity
and shale volume, while sonic transit time carries a porosity x shale
interaction plus a burial-dependent cement term, so the log -> Vs mapping
is not linear. Resistivity is drawn per layer independently of the rock
frame. Well B reuses the recipe with some end members shifted by ``drift``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .las_io import Curve, WellLog
from .seeding import derive_seed


@dataclass(frozen=True)
class Lithology:
    gr_sand: float = 30.0
    gr_shale: float = 130.0
    nphi_shale: float = 0.28
    rho_matrix: float = 2.65
    rho_shale_excess: float = 0.05
    rho_fluid: float = 1.0
    dt_matrix: float = 55.5
    dt_shale_excess: float = 35.0
    dt_fluid: float = 189.0
    dt_interaction: float = 320.0
    phi_surface: float = 0.34
    compaction: float = 2e-4
    shale_phi_loss: float = 0.55
    cementation: float = 0.03

    def drifted(self, factor: float) -> "Lithology":
        """Well-B end members: GR reads ``factor`` hotter and the matrix
        transit time is ``factor`` shorter.

        Both shifts make well-A relations under-predict Vs in well B, so
        they compound rather than cancel.
        """
        up = ("gr_sand", "gr_shale")
        down = ("dt_matrix",)
        changes = {n: getattr(self, n) * (1 + factor) for n in up}
        changes.update({n: getattr(self, n) * (1 - factor) for n in down})
        return replace(self, **changes)


@dataclass
class SynthConfig:
    seed: int = 2021
    n_samples: int = 1500
    depth_top: float = 1500.0
    depth_bottom: float = 2100.0
    n_layers: int = 400
    shale_probability: float = 0.45
    lithology: Lithology = field(default_factory=Lithology)
    noise: dict = field(default_factory=lambda: {
        "GR": 4.0, "NPHI": 0.012, "RHOB": 0.02, "DT": 2.5, "RES": 0.08})
    missing_fraction: float = 0.02
    drift: float = 0.10
    # DT noise sigma at the base of the well is (1 + gain) x its value at the top
    dt_noise_depth_gain: float = 1.0

    def __post_init__(self):
        if isinstance(self.lithology, dict):
            self.lithology = Lithology(**self.lithology)
        for name in ("shale_probability", "missing_fraction", "drift"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.n_samples < 10:
            raise ValueError("n_samples must be >= 10")
        if not self.depth_bottom > self.depth_top:
            raise ValueError("depth range must be positive")
        if self.n_layers < 1:
            raise ValueError("n_layers must be >= 1")

    @classmethod
    def from_dict(cls, d: dict | None) -> "SynthConfig":
        d = dict(d or {})
        noise = {**cls().noise, **d.pop("noise", {})}
        return cls(noise=noise, **d)

    def to_dict(self) -> dict:
        return asdict(self)


UNITS = {"GR": "GAPI", "NPHI": "V/V", "RHOB": "G/C3", "DT": "US/F", "RES": "OHMM"}
DESCRIPTIONS = {
    "GR": "Gamma ray",
    "NPHI": "Neutron porosity",
    "RHOB": "Bulk density",
    "DT": "Compressional sonic transit time",
    "RES": "Deep resistivity",
}


def _layer_index(depth, n_layers, rng):
    weights = rng.exponential(1.0, size=n_layers)
    bounds = np.cumsum(weights) / weights.sum()
    rel = (depth - depth[0]) / (depth[-1] - depth[0])
    return np.minimum(np.searchsorted(bounds, rel, side="right"), n_layers - 1)


def _generate_well(name: str, cfg: SynthConfig, lith: Lithology, rng) -> WellLog:
    n = cfg.n_samples
    depth = np.linspace(cfg.depth_top, cfg.depth_bottom, n)
    layer = _layer_index(depth, cfg.n_layers, rng)

    is_shale = rng.random(cfg.n_layers) < cfg.shale_probability
    vsh_layer = np.where(is_shale, rng.uniform(0.55, 0.95, cfg.n_layers),
                         rng.uniform(0.0, 0.3, cfg.n_layers))
    vsh = np.clip(vsh_layer[layer] + rng.normal(0, 0.04, n), 0.0, 1.0)
    log_res_layer = rng.uniform(0.2, 1.6, cfg.n_layers)

    burial = depth - cfg.depth_top
    rel = burial / (cfg.depth_bottom - cfg.depth_top)
    phi_clean = lith.phi_surface * np.exp(-lith.compaction * burial)
    phi_layer = rng.normal(1.0, 0.08, cfg.n_layers)
    phi = np.clip(phi_clean * phi_layer[layer] * (1 - lith.shale_phi_loss * vsh), 0.02, 0.45)

    noise = cfg.noise
    gr = lith.gr_sand + vsh * (lith.gr_shale - lith.gr_sand) + rng.normal(0, noise["GR"], n)
    nphi = phi + lith.nphi_shale * vsh + rng.normal(0, noise["NPHI"], n)
    rho_ma = lith.rho_matrix + lith.rho_shale_excess * vsh
    rhob = (1 - phi) * rho_ma + phi * lith.rho_fluid + rng.normal(0, noise["RHOB"], n)
    dt = ((lith.dt_matrix + lith.dt_shale_excess * vsh) * (1 - phi)
          + lith.dt_fluid * phi
          + lith.dt_interaction * phi * vsh
          + rng.normal(0, 1, n) * noise["DT"] * (1 + cfg.dt_noise_depth_gain * rel ** 2))
    # cement stiffening grows with burial and is only partly visible in the logs
    dt *= 1 - lith.cementation * rel ** 2
    res = 10 ** (log_res_layer[layer] + rng.normal(0, noise["RES"], n))

    values = {
        "GR": np.clip(gr, 0.0, 400.0),
        "NPHI": np.clip(nphi, -0.05, 1.0),
        "RHOB": np.clip(rhob, 1.0, 3.5),
        "DT": np.clip(dt, 40.0, 300.0),
        "RES": res,
    }
    curves = []
    for mnem, samples in values.items():
        samples = samples.copy()
        if cfg.missing_fraction > 0:
            samples[rng.random(n) < cfg.missing_fraction] = np.nan
        curves.append(Curve(mnem, UNITS[mnem], DESCRIPTIONS[mnem], samples))
    return WellLog(well_name=name, depth=depth, curves=curves)


def generate_field(cfg: SynthConfig | None = None) -> tuple[WellLog, WellLog]:
    """Return wells A and B. Deterministic for a given config."""
    cfg = cfg or SynthConfig()
    rng_a = np.random.default_rng(derive_seed(cfg.seed, "synth", "A"))
    rng_b = np.random.default_rng(derive_seed(cfg.seed, "synth", "B"))
    well_a = _generate_well("SYNTH-A", cfg, cfg.lithology, rng_a)
    lith_b = cfg.lithology.drifted(cfg.drift)
    well_b = _generate_well("SYNTH-B", cfg, lith_b, rng_b)
    return well_a, well_b
