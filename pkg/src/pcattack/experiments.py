"""Parameter sweeps over the secrecy metrics, with CSV output.

Config files are UTF-8, one ``key = value`` per line, ``#`` starts a comment
and lists are comma separated::

    m_list = 1, 2, 4, 8
    gammaE_db_list = 5
    gamma0_db_range = 0, 30, 1     # start, stop, step (stop inclusive)
    attacks = rayleigh
    mc_samples = 1000000
    seed = 42
    x_axis = gamma0_db             # or gammaB_db
    gammaE_scaling = fixed         # or reduce_by_10log10M

Every Monte-Carlo point of a sweep reuses the config seed (common random
numbers), which keeps MC curves smooth across the x axis.
"""

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import List, Optional, Tuple

from . import analytics
from .channel import AttackKind, ScenarioParams, linear_to_db
from .montecarlo import MIN_SAMPLES, estimate_rates

log = logging.getLogger(__name__)

__all__ = [
    "ConfigError",
    "SweepConfig",
    "SweepRow",
    "PRESETS",
    "CSV_FIELDS",
    "parse_config",
    "sweep_points",
    "run_sweep",
    "write_csv",
    "read_csv",
]

X_AXES = ("gamma0_db", "gammaB_db")
SCALINGS = ("fixed", "reduce_by_10log10M")


class ConfigError(ValueError):
    """Malformed or invalid sweep configuration."""


@dataclass(frozen=True)
class SweepConfig:
    gamma0_db_range: Tuple[float, float, float]
    m_list: Tuple[int, ...] = (1,)
    gammaE_db_list: Tuple[float, ...] = (5.0,)
    attacks: Tuple[AttackKind, ...] = (AttackKind.NONE, AttackKind.RAYLEIGH, AttackKind.UNIFORM)
    mc_samples: int = 1_000_000
    seed: int = 42
    x_axis: str = "gamma0_db"
    gammaE_scaling: str = "fixed"

    def x_values(self):
        """Inclusive grid ``start, start+step, ..., <= stop``."""
        start, stop, step = self.gamma0_db_range
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 10) for k in range(count)]


PRESETS = {
    "fig1": dict(m_list=(1, 2, 4, 8), gammaE_db_list=(5.0,), gamma0_db_range=(0.0, 30.0, 1.0),
                 attacks=(AttackKind.RAYLEIGH,), mc_samples=1_000_000),
    "fig2": dict(m_list=(4,), gammaE_db_list=(5.0, 10.0, 15.0), gamma0_db_range=(0.0, 30.0, 1.0),
                 attacks=(AttackKind.UNIFORM,), mc_samples=1_000_000),
    "fig3": dict(m_list=(1, 2, 4, 8), gammaE_db_list=(15.0,), gamma0_db_range=(0.0, 40.0, 1.0),
                 attacks=(AttackKind.RAYLEIGH, AttackKind.UNIFORM), mc_samples=0,
                 x_axis="gammaB_db", gammaE_scaling="reduce_by_10log10M"),
}


def _split(value):
    items = [v.strip() for v in value.split(",")]
    if not items or any(v == "" for v in items):
        raise ValueError("empty list element")
    return items


def _as_int(text):
    v = float(text)
    if not v.is_integer():
        raise ValueError(f"{text!r} is not an integer")
    return int(v)


_PARSERS = {
    "m_list": lambda v: tuple(_as_int(x) for x in _split(v)),
    "gammaE_db_list": lambda v: tuple(float(x) for x in _split(v)),
    "gamma0_db_range": lambda v: tuple(float(x) for x in _split(v)),
    "attacks": lambda v: tuple(AttackKind.parse(x) for x in _split(v)),
    "mc_samples": _as_int,
    "seed": _as_int,
    "x_axis": str.strip,
    "gammaE_scaling": str.strip,
}


def _validate(values):
    def bad(key, why):
        raise ConfigError(f"invalid value for {key}: {why}")

    rng = values["gamma0_db_range"]
    if len(rng) != 3:
        bad("gamma0_db_range", "expected start, stop, step")
    if not all(math.isfinite(v) for v in rng):
        bad("gamma0_db_range", "values must be finite")
    if not rng[2] > 0:
        bad("gamma0_db_range", "step must be > 0")
    if rng[0] > rng[1]:
        bad("gamma0_db_range", "start must be <= stop")
    if not values["m_list"] or any(m < 1 for m in values["m_list"]):
        bad("m_list", "need one or more integers >= 1")
    if not values["gammaE_db_list"] or not all(math.isfinite(g) for g in values["gammaE_db_list"]):
        bad("gammaE_db_list", "need one or more finite dB values")
    if not values["attacks"]:
        bad("attacks", "need at least one attack kind")
    mc = values["mc_samples"]
    if mc != 0 and mc < MIN_SAMPLES:
        bad("mc_samples", f"must be 0 or >= {MIN_SAMPLES}")
    if not 0 <= values["seed"] < 2**64:
        bad("seed", "must fit in 64 unsigned bits")
    if values["x_axis"] not in X_AXES:
        bad("x_axis", f"expected one of {X_AXES}")
    if values["gammaE_scaling"] not in SCALINGS:
        bad("gammaE_scaling", f"expected one of {SCALINGS}")


def parse_config(text, preset=None):
    """Parse a config document into a validated :class:`SweepConfig`.

    Keys absent from ``text`` come from ``preset`` (a name in
    :data:`PRESETS`), then from the class defaults. ``gamma0_db_range`` has
    no default.
    """
    values = {f.name: f.default for f in fields(SweepConfig)}
    values["gamma0_db_range"] = None
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; expected one of {sorted(PRESETS)}")
        values.update(PRESETS[preset])
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: invalid value for {key}: {exc}") from None
    if values["gamma0_db_range"] is None:
        raise ConfigError("missing required key gamma0_db_range")
    _validate(values)
    return SweepConfig(**values)


@dataclass(frozen=True)
class SweepRow:
    m: int
    gamma0_db: float
    gammaB_db: float
    gammaE_db: float
    attack: AttackKind
    cs_analytic: float
    rs_analytic: float
    d_excess: float
    d_asymptote: float
    cs_mc: Optional[float] = None
    cs_mc_stderr: Optional[float] = None
    rs_mc: Optional[float] = None
    rs_mc_stderr: Optional[float] = None
    error: Optional[str] = field(default=None, compare=False)


CSV_FIELDS = tuple(f.name for f in fields(SweepRow) if f.name != "error")


def sweep_points(config):
    """Scenario points in emission order: M, then Eve SNR, then attack, then x."""
    points = []
    for m in config.m_list:
        offset = linear_to_db(m)
        for ge_db in config.gammaE_db_list:
            if config.gammaE_scaling == "reduce_by_10log10M":
                ge_db = ge_db - offset
            for attack in config.attacks:
                for x in config.x_values():
                    g0 = x if config.x_axis == "gamma0_db" else x - offset
                    points.append((ScenarioParams(m, g0, ge_db), attack))
    return points


def _evaluate(params, attack, mc_samples, seed, mc_workers):
    base = dict(m=params.m, gamma0_db=params.gamma0_db, gammaB_db=params.gammaB_db,
                gammaE_db=params.gammaE_db, attack=attack)
    try:
        cs = analytics.secrecy_rate(params, AttackKind.NONE)
        if attack is AttackKind.NONE:
            rs, d, d_asym = cs, 0.0, 0.0
        else:
            rs = analytics.secrecy_rate(params, attack)
            d = cs.loss - rs.loss
            d_asym = analytics.excess_rate_asymptote(params.gamma_e, attack)
        row = SweepRow(cs_analytic=cs.rate, rs_analytic=rs.rate, d_excess=d,
                       d_asymptote=d_asym, **base)
        if mc_samples:
            cs_mc, rs_mc = estimate_rates(params, attack, mc_samples, seed, workers=mc_workers)
            row = replace(row, cs_mc=cs_mc.mean, cs_mc_stderr=cs_mc.stderr,
                          rs_mc=rs_mc.mean, rs_mc_stderr=rs_mc.stderr)
        if cs.anomalous or rs.anomalous:
            log.warning("negative average rate at %s/%s (numerical anomaly)", params, attack.value)
        return row
    except (ArithmeticError, ValueError) as exc:
        nan = math.nan
        log.error("row failed at %s, attack=%s: %s", params, attack.value, exc)
        return SweepRow(cs_analytic=nan, rs_analytic=nan, d_excess=nan, d_asymptote=nan,
                        error=f"{type(exc).__name__}: {exc}", **base)


def run_sweep(config, workers=1, mc_workers=1):
    """Evaluate every point of ``config``; rows come back in :func:`sweep_points` order.

    A point that raises a numerical error yields a row of NaNs with
    ``row.error`` set instead of aborting the sweep.
    """
    points = sweep_points(config)
    log.info("sweep: %d points, mc_samples=%d", len(points), config.mc_samples)

    def job(pt):
        return _evaluate(pt[0], pt[1], config.mc_samples, config.seed, mc_workers)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, points))
    return [job(p) for p in points]


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, AttackKind):
        return value.value
    if isinstance(value, int):
        return str(value)
    return f"{value:.9g}"


def write_csv(rows, destination):
    """Write rows as CSV to a binary sink; returns the number of bytes written."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, name)) for name in CSV_FIELDS])
    data = buf.getvalue().encode("utf-8")
    destination.write(data)
    return len(data)


def read_csv(text) -> List[dict]:
    """Parse CSV written by :func:`write_csv` back into typed dicts."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for key, value in rec.items():
            if key == "attack":
                row[key] = AttackKind.parse(value)
            elif key == "m":
                row[key] = int(value)
            else:
                row[key] = float(value) if value != "" else None
        out.append(row)
    return out
