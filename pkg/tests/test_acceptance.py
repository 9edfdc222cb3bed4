"""Acceptance gate: every headline requirement, one printed pass/fail line each.

Grouped the same way the requirements are stated: exact formula checks,
oracle equivalence, figure-shape reproduction, loose calibration targets,
and determinism/schema.  Each line prints [PASS]/[FAIL] with the measured
number so a red run says what was off, not only that something was.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from b5gcell import (
    UniformAngles,
    default_bundle,
    fejer_kernel,
    lambertian_order,
    pa_power_doherty,
    pathloss_winner_b5a,
    required_sinr,
    snr_macro,
    spectral_efficiency,
)
from b5gcell.cli import main as cli_main
from b5gcell.metrics import expected_kernel_power, macro_snr_draws, mc_kernel_power
from b5gcell.power import (
    bmaa_load,
    iap_load,
    mbsala_load,
    overhead_divisor,
    power_bmaa,
    power_iap_mmwave,
    power_lifi_iap,
    power_mbsala,
)
from b5gcell.scenario import SweepSpec, VariantSpec, build_scenario, ee_se_curve, find_crossing, run_sweep

GOLDEN = Path(__file__).parent / "golden" / "device_powers.txt"
RATE_GRID = tuple(float(x) for x in np.linspace(0.0, 6e9, 25))
SE_GRID = tuple(float(x) for x in np.linspace(0.5, 24.0, 48))


def _flush(lines):
    for _, line in lines:
        print(line)
    failed = [line for ok, line in lines if not ok]
    assert not failed, "\n".join(failed)


def _check(lines, name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    lines.append((bool(ok), f"[{tag}] {name}{suffix}"))


def _rel(a, b):
    return abs(a - b) / abs(b)


# --- 1. exact formula checks ---------------------------------------------------

def test_exact_formula_checks():
    lines = []

    ok = (_rel(pathloss_winner_b5a(100.0, 5.0), 89.5) <= 1e-9
          and _rel(pathloss_winner_b5a(1.0, 5.0), 42.5) <= 1e-9)
    _check(lines, "pathloss reference points 89.5 / 42.5 dB", ok,
           f"got {pathloss_winner_b5a(100.0, 5.0):.10f} / "
           f"{pathloss_winner_b5a(1.0, 5.0):.10f}")

    ok = (_rel(lambertian_order(math.pi / 3), 1.0) <= 1e-9
          and _rel(lambertian_order(math.pi / 4), 2.0) <= 1e-9)
    _check(lines, "lambertian order at 60 / 45 deg", ok,
           f"got {lambertian_order(math.pi / 3):.12f} / "
           f"{lambertian_order(math.pi / 4):.12f}")

    worst = max(abs(fejer_kernel(m, 0.0) - 1.0) for m in range(1, 513))
    ok = (worst <= 1e-9 and abs(fejer_kernel(2, 1.0)) <= 1e-12
          and abs(fejer_kernel(4, 0.5)) <= 1e-12)
    _check(lines, "beam kernel: unity at broadside (M=1..512), known zeros", ok,
           f"worst broadside dev {worst:.2e}")

    below = math.nextafter(0.25, 0.0)
    ok = (_rel(pa_power_doherty(1.0, 1.0), 6 / math.pi) <= 1e-9
          and _rel(pa_power_doherty(0.01, 1.0), 2 / (10 * math.pi)) <= 1e-9
          and _rel(pa_power_doherty(below, 1.0), (2 / math.pi) * 0.5) <= 1e-9
          and _rel(pa_power_doherty(0.25, 1.0), (6 / math.pi) * 0.5) <= 1e-9)
    _check(lines, "doherty values incl. both branch values at quarter rating", ok,
           f"jump {pa_power_doherty(0.25, 1.0) / pa_power_doherty(below, 1.0):.6f}x")

    divisor = overhead_divisor(default_bundle().constants)
    ok = _rel(1.0 / divisor, 1.2778736182991504) <= 1e-9
    _check(lines, "supply overhead: 1 W numerator -> 1.27787 W", ok,
           f"got {1.0 / divisor:.10f}")

    rng = np.random.default_rng(2024)
    exact = True
    for _ in range(100):
        beta = 10.0 ** rng.uniform(-14, -4)
        p = 10.0 ** rng.uniform(-3, 2)
        s2 = 10.0 ** rng.uniform(-16, -10)
        m_t = int(rng.integers(1, 512))
        m_r = int(rng.integers(1, 512))
        base = snr_macro(beta, m_t, m_r, p, s2).value
        exact &= snr_macro(beta, 2 * m_t, m_r, p, s2).value == 2.0 * base
        exact &= snr_macro(beta, m_t, 2 * m_r, p, s2).value == 2.0 * base
    _check(lines, "macro SNR doubles exactly with either array (100 configs)", exact)

    _flush(lines)


# --- 2. oracle equivalence -----------------------------------------------------

def test_oracle_equivalence():
    lines = []
    start = time.perf_counter()

    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(20):
        m = int(rng.integers(2, 129))
        lo = rng.uniform(-1.0, 0.8)
        hi = lo + rng.uniform(0.05, 1.0 - max(lo, 0.0) / 2)
        hi = min(hi, 1.0)
        cell = UniformAngles(lo, hi)
        beam = rng.uniform(-1.0, 1.0)
        grid = expected_kernel_power(m, beam, cell)
        mc = mc_kernel_power(m, beam, cell, n_draws=1_000_000, rng=rng)
        worst = max(worst, _rel(mc, grid))
    elapsed = time.perf_counter() - start
    _check(lines, "beam expectation: grid vs 1e6-draw MC within 1% (20 cases)",
           worst <= 1e-2 and elapsed <= 60.0,
           f"worst {worst * 100:.4f}%, {elapsed:.1f}s")

    rng = np.random.default_rng(7)
    worst = 0.0
    for m_t, m_r in ((64, 64), (128, 64), (256, 64)):
        for mean in (1.0, 10.0, 1000.0):
            draws = macro_snr_draws(mean, m_t, m_r, 100_000, rng)
            approx = spectral_efficiency(mean).value
            exact = spectral_efficiency(mean, mode="exact-mc", draws=draws).value
            worst = max(worst, _rel(approx, exact))
    _check(lines, "SE: approx-at-mean vs exact-MC within 2% (hardened arrays)",
           worst <= 2e-2, f"worst {worst * 100:.4f}%")

    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        se = rng.uniform(0.01, 30.0)
        gamma = rng.uniform(0.3, 1.0)
        back = spectral_efficiency(required_sinr(se, gamma), gamma=gamma).value
        worst = max(worst, _rel(back, se))
    _check(lines, "required-SINR / SE round trip within 1e-12 (1000 values)",
           worst <= 1e-12, f"worst {worst:.2e}")

    _flush(lines)


# --- 3. figure-shape reproduction ------------------------------------------------

def test_figure_shape_reproduction():
    lines = []
    bundle = default_bundle()
    start = time.perf_counter()

    crossings = {}
    for m_t in (64, 128, 256):
        spec = SweepSpec("total_rate_bps", RATE_GRID,
                         (VariantSpec("sep", "separate", "mmwave", m_t),
                          VariantSpec("non", "non-separate", "mmwave", m_t)))
        result = run_sweep(bundle, spec, seed=0)
        sep = result.variant_rows("sep")
        non = result.variant_rows("non")

        flips = 0
        prev = None
        for a, b in zip(sep, non):
            if not (a.feasible and b.feasible):
                prev = None
                continue
            diff = b.total_power_w - a.total_power_w
            if prev is not None and prev * diff < 0:
                flips += 1
            prev = diff
        cross = find_crossing(result, "non", "sep")
        crossings[m_t] = cross
        _check(lines, f"M_T={m_t}: exactly one separate/non-separate crossing",
               flips == 1 and cross is not None,
               f"{flips} sign flips, crossing at "
               f"{cross / 1e9:.3f} Gbit/s" if cross else f"{flips} sign flips")

        sides_ok = True
        for a, b in zip(sep, non):
            if not (a.feasible and b.feasible) or cross is None:
                continue
            if a.x_value < cross:
                sides_ok &= b.total_power_w < a.total_power_w
            elif a.x_value > cross:
                sides_ok &= a.total_power_w < b.total_power_w
        _check(lines, f"M_T={m_t}: direct cheaper below crossing, relayed above",
               sides_ok)

        for name, rows in (("separate", sep), ("non-separate", non)):
            feas = [r.total_power_w for r in rows if r.feasible]
            mono = all(x <= y + 1e-9 for x, y in zip(feas, feas[1:]))
            _check(lines, f"M_T={m_t}: {name} power nondecreasing in rate", mono)

    peaks = {}
    for sep_kind in ("separate", "non-separate"):
        for m_t in (64, 128, 256):
            model = build_scenario(bundle, VariantSpec("v", sep_kind, "mmwave", m_t))
            curve = ee_se_curve(model, SE_GRID)
            peaks[(sep_kind, m_t)] = curve.ee[curve.peak_index]
            if m_t in (128, 256):
                _check(lines,
                       f"EE-SE {sep_kind} M_T={m_t}: interior maximum, single rise",
                       curve.peak_interior and curve.unimodal,
                       f"peak {curve.ee[curve.peak_index]:.3f} (bit/s/Hz)/W "
                       f"at SE {curve.se[curve.peak_index]:.2f}")
    for sep_kind in ("separate", "non-separate"):
        hi, lo = peaks[(sep_kind, 256)], peaks[(sep_kind, 64)]
        _check(lines, f"EE-SE {sep_kind}: peak at M_T=256 >= peak at M_T=64",
               hi >= lo, f"{hi:.3f} vs {lo:.3f}")

    elapsed = time.perf_counter() - start
    _check(lines, "figure-shape battery under 60 s", elapsed <= 60.0,
           f"{elapsed:.1f}s")
    _flush(lines)


# --- 4. calibration targets -----------------------------------------------------

def test_calibration_targets():
    lines = []
    bundle = default_bundle()

    sep = build_scenario(bundle, VariantSpec("sep", "separate", "mmwave", 256))
    non = build_scenario(bundle, VariantSpec("non", "non-separate", "mmwave", 256))
    p_sep = sep.rate_point(5e9)
    p_non = non.rate_point(5e9)
    ok = (p_sep.feasible and p_non.feasible
          and p_non.total_power_w / p_sep.total_power_w >= 2.0)
    ratio = (p_non.total_power_w / p_sep.total_power_w
             if p_sep.feasible and p_non.feasible else float("nan"))
    _check(lines, "M_T=256 at 5 Gbit/s: direct-to-relayed power ratio >= 2", ok,
           f"achieved {ratio:.2f}x ({p_non.total_power_w:.0f} W vs "
           f"{p_sep.total_power_w:.0f} W)")

    spec = SweepSpec("total_rate_bps", RATE_GRID,
                     (VariantSpec("mmwave", "separate", "mmwave", 64),
                      VariantSpec("lifi", "separate", "lifi", 64)))
    result = run_sweep(bundle, spec, seed=0)
    savings = []
    for a, b in zip(result.variant_rows("lifi"), result.variant_rows("mmwave")):
        if a.feasible and b.feasible:
            savings.append(1.0 - a.total_power_w / b.total_power_w)
    mean = float(np.mean(savings))
    ok = all(s > 0 for s in savings) and 0.05 <= mean <= 0.20
    _check(lines, "LiFi beats mmWave access at every point, mean saving in [5%,20%]",
           ok, f"mean {mean * 100:.2f}%, min {min(savings) * 100:.2f}%")

    _flush(lines)


# --- 5. determinism and schema ----------------------------------------------------

def test_determinism_and_schema(tmp_path):
    lines = []

    dirs = [tmp_path / "a", tmp_path / "b"]
    for out in dirs:
        code = cli_main(["sweep", "--out", str(out), "--seed", "0",
                         "--grid", "0:6e9:25"])
        assert code == 0
    identical = ((dirs[0] / "results.csv").read_bytes()
                 == (dirs[1] / "results.csv").read_bytes())
    _check(lines, "identical (config, seed) -> byte-identical results.csv",
           identical)

    bundle = default_bundle()
    cfg, k, gops = bundle.scenario, bundle.constants, bundle.gops
    mbsala = power_mbsala(mbsala_load(cfg, gops), k, 64, [1.0] * 4)
    bmaa = power_bmaa(bmaa_load(cfg, gops), k, 64)
    iap = power_iap_mmwave(iap_load(gops), k, 16, 0.1)
    lifi = power_lifi_iap(bundle.lifi, 1e-5)
    current = {
        "mbsala.p_bb": mbsala.p_bb, "mbsala.p_rf": mbsala.p_rf,
        "mbsala.p_pa": mbsala.p_pa, "mbsala.p_total": mbsala.p_total,
        "bmaa.p_bb": bmaa.p_bb, "bmaa.p_rf": bmaa.p_rf,
        "bmaa.p_total": bmaa.p_total,
        "iap.p_bb": iap.p_bb, "iap.p_rf": iap.p_rf,
        "iap.p_pa": iap.p_pa, "iap.p_total": iap.p_total,
        "lifi.p_illum": lifi.p_illum, "lifi.p_comm": lifi.p_comm,
        "lifi.p_total": lifi.p_total,
    }
    golden = {}
    for raw in GOLDEN.read_text().splitlines():
        raw = raw.strip()
        if raw and not raw.startswith("#"):
            key, _, val = raw.partition("=")
            golden[key] = float(val)
    worst = max(_rel(current[key], golden[key]) for key in golden)
    _check(lines, "golden device powers match the independent oracle at 1e-6",
           set(golden) == set(current) and worst <= 1e-6, f"worst {worst:.2e}")

    _flush(lines)
