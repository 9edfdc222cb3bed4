"""Scenario engine: wires channels, link metrics and device power models into
per-cell operating points, rate/SE sweeps, crossing detection and the
energy-efficiency curve.

Traffic model: the swept total rate is split equally across every indoor user
of the cell.  In separate mode each building's aggregate then rides over its
relay beams (building rate / beam count per beam), so the backhaul always
carries exactly the indoor traffic it serves.  A point is infeasible when any
amplifier would exceed its rating or an indoor link cannot reach the demanded
rate; infeasible points carry no power value.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import db_to_linear, lifi_angles, lifi_los_gain, pathloss_freespace, \
    pathloss_winner_b5a, apply_penetration
from .config import ConfigBundle, ConfigError, validate_bundle
from .metrics import UniformAngles, expected_kernel_power, required_sinr, sinr_lifi
from .power import (
    SaturationError,
    bmaa_load,
    iap_load,
    mbs_load,
    mbsala_load,
    power_bmaa,
    power_cell,
    power_iap_mmwave,
    power_lifi_iap,
    power_mbs,
    power_mbsala,
)

RATE_VARIABLE = "total_rate_bps"
SE_VARIABLE = "se_bits_per_hz"


class GridMismatchError(ValueError):
    """Two variants were compared on different grids."""


@dataclass(frozen=True)
class VariantSpec:
    """One scenario variant of a sweep."""

    name: str
    separation: str      # 'separate' | 'non-separate'
    iap_kind: str        # 'mmwave' | 'lifi' (unused when non-separate)
    m_t: int

    def __post_init__(self):
        if self.separation not in ("separate", "non-separate"):
            raise ConfigError(f"variant {self.name}: bad separation {self.separation!r}")
        if self.iap_kind not in ("mmwave", "lifi"):
            raise ConfigError(f"variant {self.name}: bad iap_kind {self.iap_kind!r}")
        if self.m_t < 1:
            raise ConfigError(f"variant {self.name}: m_t must be >= 1")


@dataclass(frozen=True)
class SweepSpec:
    """Sweep request: which variable, over which grid, for which variants."""

    variable: str
    grid: tuple
    variants: tuple

    def __post_init__(self):
        if self.variable not in (RATE_VARIABLE, SE_VARIABLE):
            raise ConfigError(f"sweep variable must be {RATE_VARIABLE} or "
                              f"{SE_VARIABLE}, got {self.variable!r}")
        if len(self.grid) < 2:
            raise ConfigError("sweep grid needs at least 2 points")
        prev = None
        for x in self.grid:
            if x < 0:
                raise ConfigError(f"sweep grid values must be >= 0, got {x!r}")
            if prev is not None and x <= prev:
                raise ConfigError("sweep grid must be strictly increasing")
            prev = x
        if not self.variants:
            raise ConfigError("sweep needs at least one variant")
        names = [v.name for v in self.variants]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate variant names in sweep: {names}")


@dataclass(frozen=True)
class PointResult:
    """One evaluated sweep point."""

    variant: str
    x_value: float
    x_kind: str
    feasible: bool
    total_power_w: float | None
    ee: float | None                # cell SE on the outdoor band per watt
    p_mbs_w: float | None
    p_bmaa_w: float | None
    p_iap_w: float | None


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    seed: int
    rows: tuple  # PointResult, variant-major then grid order

    def variant_rows(self, name: str) -> tuple:
        rows = tuple(r for r in self.rows if r.variant == name)
        if not rows:
            raise KeyError(f"no rows for variant {name!r}")
        return rows


@dataclass(frozen=True)
class EeSeCurve:
    """Energy efficiency against the per-link SE grid for one variant."""

    variant: str
    se: tuple
    ee: tuple            # None where infeasible
    peak_index: int | None
    peak_interior: bool
    unimodal: bool


class ScenarioModel:
    """Everything static about one variant; operating points are queried from it."""

    def __init__(self, bundle: ConfigBundle, variant: VariantSpec,
                 rng: np.random.Generator | None = None):
        validate_bundle(bundle)
        self.bundle = bundle
        self.variant = variant
        cfg = replace(bundle.scenario, m_t=variant.m_t,
                      iap_kind=variant.iap_kind, separation=variant.separation)
        self.cfg = cfg
        k, lifi, gops, layout = (bundle.constants, bundle.lifi, bundle.gops,
                                 bundle.layout)
        self.k = k
        self.lifi = lifi

        # geometry: fixed layout, or one seeded draw per model
        if layout.placement == "random":
            if rng is None:
                rng = np.random.default_rng(0)
            distances = np.sort(rng.uniform(layout.distance_min_m,
                                            layout.distance_max_m,
                                            cfg.n_buildings))
            offsets = rng.uniform(-layout.room_halfwidth_m, layout.room_halfwidth_m,
                                  size=(cfg.n_iue, 2))
        else:
            distances = np.asarray(layout.building_distances_m, float)
            offsets = np.asarray(layout.user_offsets_m[:cfg.n_iue], float)
        self.building_distances = distances
        self.user_offsets = offsets

        # outdoor large-scale gains per building
        pl = np.array([pathloss_winner_b5a(d, cfg.carrier_freq_out)
                       for d in distances])
        self.beta_backhaul = np.array([db_to_linear(-x) for x in pl])
        pl_pen = np.array([apply_penetration(x, cfg.penetration_loss_db) for x in pl])
        self.beta_direct = np.array([db_to_linear(-x) for x in pl_pen])

        self.sigma_out = cfg.noise_variance
        # indoor noise: identical density and noise figure, wider band
        self.sigma_in = cfg.noise_variance * cfg.bandwidth_in / cfg.bandwidth_out

        # indoor geometry shared by every building
        iap_pos = np.array([0.0, 0.0, layout.iap_height_m])
        user_pos = np.column_stack([offsets,
                                    np.full(cfg.n_iue, layout.user_height_m)])
        self.user_distances = np.linalg.norm(user_pos - iap_pos, axis=1)

        if variant.separation == "separate" and variant.iap_kind == "mmwave":
            self.beta_access = np.array([
                db_to_linear(-pathloss_freespace(d, cfg.carrier_freq_in))
                for d in self.user_distances])
            self._init_beam_codebook()
        if variant.separation == "separate" and variant.iap_kind == "lifi":
            self._init_lifi(iap_pos, user_pos)

        # static loads and device powers
        self._mbsala_load = mbsala_load(cfg, gops)
        self._site_load = mbs_load(cfg, gops)
        if variant.separation == "separate":
            self._bmaa_power = power_bmaa(bmaa_load(cfg, gops), k, cfg.m_r)
            self._iap_bb_load = iap_load(gops)

    # -- indoor access precomputation ------------------------------------

    def _init_beam_codebook(self):
        """Evenly spaced sine-space beams, one per indoor user; a user's
        departure angle is uniform over its beam's cell."""
        cfg = self.cfg
        n = cfg.n_iue
        width = 2.0 / n
        centers = -1.0 + (np.arange(n) + 0.5) * width
        cells = [UniformAngles(c - width / 2, c + width / 2) for c in centers]
        self.beam_centers = centers
        fbar = np.empty(n)
        emat = np.zeros((n, n))
        for i in range(n):
            fbar[i] = expected_kernel_power(cfg.m_t_iap, centers[i], cells[i])
            for j in range(n):
                if j != i:
                    emat[i, j] = expected_kernel_power(cfg.m_t_iap, centers[j],
                                                       cells[i])
        self.access_fbar = fbar
        self.access_emat = emat

    def _init_lifi(self, iap_pos, user_pos):
        lifi = self.lifi
        h = []
        for pos in user_pos:
            geom = lifi_angles(iap_pos, pos, lifi.n_tx, lifi.n_rx)
            h.append(lifi_los_gain(geom, lifi))
        self.lifi_h = np.asarray(h)
        self.lifi_sinr = np.array([
            sinr_lifi(lifi.c_f, lifi.p_opt, hu, (), lifi.n0,
                      self.cfg.bandwidth_in).value
            for hu in self.lifi_h])

    # -- per-point solves --------------------------------------------------

    def _solve_mmwave_powers(self, sinr_target: float):
        """Per-user transmit powers hitting a common SINR target, or None.

        Equal targets couple through beam sidelobes, giving a small linear
        system per access point.
        """
        n = self.cfg.n_iue
        if sinr_target == 0.0:
            return np.zeros(n)
        mat = np.zeros((n, n))
        for i in range(n):
            mat[i, i] = self.beta_access[i] * self.access_fbar[i]
            for j in range(n):
                if j != i:
                    mat[i, j] = -sinr_target * self.beta_access[i] * self.access_emat[i, j]
        try:
            powers = np.linalg.solve(mat, np.full(n, sinr_target * self.sigma_in))
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(powers)):
            return None
        if np.any(powers < -1e-18):
            return None
        return np.clip(powers, 0.0, None)

    def rate_point(self, total_rate: float, x_value: float | None = None,
                   x_kind: str = RATE_VARIABLE) -> PointResult:
        """Evaluate the cell at one total offered rate (bit/s)."""
        if total_rate < 0:
            raise ValueError(f"total rate must be >= 0, got {total_rate!r}")
        cfg = self.cfg
        x = total_rate if x_value is None else x_value
        n_users = cfg.n_arrays * cfg.n_buildings * cfg.n_iue
        rate_user = total_rate / n_users

        def infeasible():
            return PointResult(variant=self.variant.name, x_value=x, x_kind=x_kind,
                               feasible=False, total_power_w=None, ee=None,
                               p_mbs_w=None, p_bmaa_w=None, p_iap_w=None)

        try:
            if cfg.separation == "separate":
                result = self._separate_point(rate_user)
            else:
                result = self._direct_point(rate_user)
        except SaturationError:
            return infeasible()
        if result is None:
            return infeasible()
        mbs, bmaa_list, iap_list = result
        total = power_cell(mbs, bmaa_list, iap_list)
        se_cell = total_rate / cfg.bandwidth_out
        return PointResult(
            variant=self.variant.name, x_value=x, x_kind=x_kind, feasible=True,
            total_power_w=total, ee=se_cell / total,
            p_mbs_w=mbs.p_total,
            p_bmaa_w=sum(p.p_total for p in bmaa_list),
            p_iap_w=sum(p.p_total for p in iap_list),
        )

    def _backhaul_beam_powers(self, rate_user: float):
        """Per-beam relay transmit powers, building-major; saturation raises."""
        cfg = self.cfg
        rate_beam = rate_user * cfg.n_iue / cfg.n_beams
        target = required_sinr(rate_beam / cfg.bandwidth_out, cfg.gamma)
        powers = []
        for beta in self.beta_backhaul:
            p = target * self.sigma_out / (beta * cfg.m_t * cfg.m_r)
            if p > self.k.mbsala.pa_max:
                raise SaturationError(p, self.k.mbsala.pa_max, where="backhaul pa")
            powers.extend([p] * cfg.n_beams)
        return powers

    def _separate_point(self, rate_user: float):
        cfg, k = self.cfg, self.k
        n_devices = cfg.n_arrays * cfg.n_buildings

        if cfg.iap_kind == "mmwave":
            target = required_sinr(rate_user / cfg.bandwidth_in, cfg.gamma)
            powers = self._solve_mmwave_powers(target)
            if powers is None:
                return None
            p_out = float(np.sum(powers))
            if p_out > k.iap.pa_max:
                return None
            iap = power_iap_mmwave(self._iap_bb_load, k, cfg.m_t_iap, p_out)
        else:
            # fixed optical drive: each user must fit its TDMA share of the band
            share = cfg.bandwidth_in / cfg.n_iue
            for sinr in self.lifi_sinr:
                capacity = cfg.gamma * share * math.log2(1.0 + sinr)
                if rate_user > capacity:
                    return None
            iap = power_lifi_iap(self.lifi, float(np.mean(self.lifi_h)))

        beams = self._backhaul_beam_powers(rate_user)
        mbsala = power_mbsala(self._mbsala_load, k, cfg.m_t, beams)
        mbs = power_mbs(k, self._site_load, [mbsala] * cfg.n_arrays)
        return mbs, [self._bmaa_power] * n_devices, [iap] * n_devices

    def _direct_point(self, rate_user: float):
        cfg, k = self.cfg, self.k
        target = required_sinr(rate_user / cfg.bandwidth_out, cfg.gamma)
        beams = []
        for beta in self.beta_direct:
            p = target * self.sigma_out / (beta * cfg.m_t * cfg.ue_antennas)
            if p > k.mbsala.pa_max:
                raise SaturationError(p, k.mbsala.pa_max, where="direct pa")
            beams.extend([p] * cfg.n_iue)
        mbsala = power_mbsala(self._mbsala_load, k, cfg.m_t, beams)
        mbs = power_mbs(k, self._site_load, [mbsala] * cfg.n_arrays)
        return mbs, [], []

    def se_point(self, se_per_link: float) -> PointResult:
        """Evaluate at a per-link SE target (bit/s/Hz on the outdoor band).

        Every user demands se * bandwidth_out, so with the default layout the
        relay beams and direct links run at exactly this SE.
        """
        if se_per_link < 0:
            raise ValueError(f"SE target must be >= 0, got {se_per_link!r}")
        cfg = self.cfg
        n_users = cfg.n_arrays * cfg.n_buildings * cfg.n_iue
        rate = se_per_link * cfg.bandwidth_out * n_users
        return self.rate_point(rate, x_value=se_per_link, x_kind=SE_VARIABLE)


def build_scenario(bundle: ConfigBundle, variant: VariantSpec | None = None,
                   rng: np.random.Generator | None = None) -> ScenarioModel:
    """Build the model for one variant; None derives the variant from the config."""
    if variant is None:
        s = bundle.scenario
        name = "sep-" + s.iap_kind if s.separation == "separate" else "nonsep"
        variant = VariantSpec(name=name, separation=s.separation,
                              iap_kind=s.iap_kind, m_t=s.m_t)
    return ScenarioModel(bundle, variant, rng=rng)


def solve_rate_point(model: ScenarioModel, total_rate: float) -> PointResult:
    return model.rate_point(total_rate)


def _variant_stream(seed: int, name: str) -> np.random.Generator:
    # keyed on the variant name, not its list position: reordering or adding
    # variants must not move anyone's random placement
    digest = int.from_bytes(hashlib.sha256(name.encode()).digest()[:8], "big")
    return np.random.default_rng(np.random.SeedSequence([seed, digest]))


def run_sweep(bundle: ConfigBundle, spec: SweepSpec, seed: int = 0) -> SweepResult:
    """Evaluate every variant over the grid; deterministic for a (config, seed).

    Each variant gets an independent child RNG keyed on its name, so
    evaluation order cannot change random placements.
    """
    rows = []
    for variant in spec.variants:
        model = build_scenario(bundle, variant, rng=_variant_stream(seed, variant.name))
        for x in spec.grid:
            if spec.variable == RATE_VARIABLE:
                rows.append(model.rate_point(float(x)))
            else:
                rows.append(model.se_point(float(x)))
    return SweepResult(spec=spec, seed=seed, rows=tuple(rows))


def _interp_crossing(xs, pa, pb):
    """First sign flip of pa - pb with linear interpolation; None without one."""
    prev = None
    for i in range(len(xs)):
        if pa[i] is None or pb[i] is None:
            prev = None
            continue
        diff = pa[i] - pb[i]
        if prev is not None:
            x0, d0 = prev
            if d0 * diff < 0:
                return x0 + (xs[i] - x0) * abs(d0) / (abs(d0) + abs(diff))
        prev = (xs[i], diff)
    return None


def find_crossing(result: SweepResult, variant_a: str, variant_b: str):
    """Grid value where the two variants' total powers cross, or None.

    Only intervals with both endpoints feasible for both variants count.
    """
    rows_a = result.variant_rows(variant_a)
    rows_b = result.variant_rows(variant_b)
    xs_a = [r.x_value for r in rows_a]
    xs_b = [r.x_value for r in rows_b]
    if xs_a != xs_b:
        raise GridMismatchError(
            f"variants {variant_a!r} and {variant_b!r} were swept on different grids")
    return _interp_crossing(xs_a,
                            [r.total_power_w for r in rows_a],
                            [r.total_power_w for r in rows_b])


def ee_se_curve(model, se_grid) -> EeSeCurve:
    """EE against per-link SE; flags whether the peak is interior and unique.

    *model* only needs a se_point(se) method, so synthetic stubs can be swept
    by the same code the real scenario uses.
    """
    points = [model.se_point(float(s)) for s in se_grid]
    ee = [p.ee if p.feasible else None for p in points]
    feasible_idx = [i for i, e in enumerate(ee) if e is not None]
    if not feasible_idx:
        return EeSeCurve(variant=points[0].variant if points else "",
                         se=tuple(se_grid), ee=tuple(ee), peak_index=None,
                         peak_interior=False, unimodal=True)
    peak = max(feasible_idx, key=lambda i: ee[i])
    interior = feasible_idx[0] < peak < feasible_idx[-1]
    rises = 0
    direction = 0  # +1 while ascending, -1 after the first descent
    for prev, cur in zip(feasible_idx, feasible_idx[1:]):
        step = ee[cur] - ee[prev]
        if step > 0:
            if direction <= 0:
                rises += 1
            direction = 1
        elif step < 0:
            direction = -1
    return EeSeCurve(variant=points[0].variant, se=tuple(se_grid), ee=tuple(ee),
                     peak_index=peak, peak_interior=interior,
                     unimodal=rises <= 1)
