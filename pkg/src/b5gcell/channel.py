"""Channel models: beamspace array responses, the normalised beam kernel,
outdoor path loss with wall penetration, and the LiFi line-of-sight link.

Angles on the antenna side live in sine space: a steering value of x means a
physical departure angle asin(x/ (2*spacing)) for spacing in wavelengths, so
with half-wavelength spacing the full visible range is x in [-1, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import lambertian_order, LiFiDeviceParams

# below this, sin(pi*x/2) is treated as a removable singularity of the kernel
_KERNEL_SINGULARITY_EPS = 1e-9


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(linear: float) -> float:
    if linear <= 0:
        raise ValueError(f"linear gain must be > 0 to convert to dB, got {linear!r}")
    return 10.0 * math.log10(linear)


# ---------------------------------------------------------------------------
# arrays and beams
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArrayResponse:
    """Unit-norm uniform-linear-array response vector."""

    length: int
    spacing: float       # element spacing in wavelengths
    steering: float      # sine-space steering value
    entries: np.ndarray  # complex, shape (length,)


@dataclass(frozen=True)
class BeamChannel:
    """Rank-one outdoor beam channel between two arrays."""

    beta: float          # linear large-scale gain
    m_t: int
    m_r: int
    aod: float           # sine-space departure angle
    aoa: float           # sine-space arrival angle


def array_response(length: int, spacing: float, steering: float) -> ArrayResponse:
    """Response vector (1/sqrt(M)) * exp(-j 2 pi spacing (m-1) steering), m = 1..M."""
    if length < 1:
        raise ValueError(f"array length must be >= 1, got {length}")
    if spacing <= 0:
        raise ValueError(f"element spacing must be > 0, got {spacing}")
    phase = -2j * math.pi * spacing * steering * np.arange(length)
    entries = np.exp(phase) / math.sqrt(length)
    return ArrayResponse(length=length, spacing=spacing, steering=steering,
                         entries=entries)


def fejer_kernel(length: int, x):
    """Normalised beam kernel sin(pi M x / 2) / (M sin(pi x / 2)).

    Scalar in, scalar out; arrays broadcast elementwise.  At the removable
    singularities (sin(pi x / 2) = 0) the limiting value
    cos(pi M x / 2) / cos(pi x / 2) is returned, which is 1 at x = 0 and
    +/-1 at even integers.
    """
    if length < 1:
        raise ValueError(f"kernel order must be >= 1, got {length}")
    arr = np.asarray(x, dtype=float)
    half = 0.5 * math.pi * arr
    den_core = np.sin(half)
    singular = np.abs(den_core) < _KERNEL_SINGULARITY_EPS
    safe_den = np.where(singular, 1.0, length * den_core)
    regular = np.sin(length * half) / safe_den
    limit = np.cos(length * half) / np.cos(half)
    out = np.where(singular, limit, regular)
    if np.isscalar(x) or arr.ndim == 0:
        return float(out)
    return out


def beam_gain(channel: BeamChannel, tx_beam: float, rx_beam: float) -> float:
    """Effective power gain of a beam pair against the channel's true angles.

    beta * M_t * M_r * F_{M_t}(|aod - tx_beam|)^2 * F_{M_r}(|aoa - rx_beam|)^2;
    the kernel is even, so mismatches enter through their magnitude.
    """
    f_tx = fejer_kernel(channel.m_t, abs(channel.aod - tx_beam))
    f_rx = fejer_kernel(channel.m_r, abs(channel.aoa - rx_beam))
    return channel.beta * channel.m_t * channel.m_r * f_tx ** 2 * f_rx ** 2


# ---------------------------------------------------------------------------
# large-scale losses
# ---------------------------------------------------------------------------

def pathloss_winner_b5a(distance_m: float, carrier_ghz: float) -> float:
    """Rooftop-to-rooftop LOS path loss in dB, valid from 1 m.

    23.5 log10(d) + 42.5 + 20 log10(f / 5.0) with d in metres, f in GHz.
    """
    if distance_m < 1.0:
        raise ValueError(f"path-loss law needs distance >= 1 m, got {distance_m!r}")
    if carrier_ghz <= 0:
        raise ValueError(f"carrier frequency must be > 0 GHz, got {carrier_ghz!r}")
    return 23.5 * math.log10(distance_m) + 42.5 + 20.0 * math.log10(carrier_ghz / 5.0)


def pathloss_freespace(distance_m: float, carrier_ghz: float) -> float:
    """Free-space path loss in dB: 20 log10(4 pi d f / c). Used for short indoor links."""
    if distance_m <= 0:
        raise ValueError(f"distance must be > 0 m, got {distance_m!r}")
    if carrier_ghz <= 0:
        raise ValueError(f"carrier frequency must be > 0 GHz, got {carrier_ghz!r}")
    return 20.0 * math.log10(4.0 * math.pi * distance_m * carrier_ghz * 1e9 / 299792458.0)


def apply_penetration(path_loss_db: float, penetration_db: float) -> float:
    """Add a wall-penetration loss to a path-loss budget (both in dB)."""
    if penetration_db < 0:
        raise ValueError(f"penetration loss must be >= 0 dB, got {penetration_db!r}")
    return path_loss_db + penetration_db


# ---------------------------------------------------------------------------
# LiFi line of sight
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LiFiGeometry:
    """Geometry of one LED-to-photodiode link."""

    distance: float   # m
    phi: float        # radiance angle at the LED, rad
    psi: float        # incidence angle at the photodiode, rad


def lifi_angles(tx_pos, rx_pos, n_tx, n_rx) -> LiFiGeometry:
    """Radiance and incidence angles from positions and unit normals."""
    d = np.asarray(rx_pos, float) - np.asarray(tx_pos, float)
    dist = float(np.linalg.norm(d))
    if dist <= 0:
        raise ValueError("transmitter and receiver positions coincide")
    cos_phi = float(np.dot(d, np.asarray(n_tx, float))) / dist
    cos_psi = float(np.dot(-d, np.asarray(n_rx, float))) / dist
    return LiFiGeometry(distance=dist,
                        phi=math.acos(min(1.0, max(-1.0, cos_phi))),
                        psi=math.acos(min(1.0, max(-1.0, cos_psi))))


def lifi_los_gain(geom: LiFiGeometry, params: LiFiDeviceParams) -> float:
    """Lambertian LOS channel gain; zero outside the receiver field of view.

    (m+1) A / (2 pi d^2) * cos^m(phi) * g_filter * g(psi) * cos(psi), with the
    concentrator gain g(psi) = n^2 / sin^2(FOV) inside the field of view.
    """
    if geom.psi < 0 or geom.psi > params.fov:
        return 0.0
    if geom.phi >= math.pi / 2:
        return 0.0
    m = lambertian_order(params.half_angle)
    conc = params.refr_index ** 2 / math.sin(params.fov) ** 2
    return ((m + 1.0) * params.area_pd / (2.0 * math.pi * geom.distance ** 2)
            * math.cos(geom.phi) ** m
            * params.g_filter * conc * math.cos(geom.psi))
