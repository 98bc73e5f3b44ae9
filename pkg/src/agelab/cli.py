"""Command-line experiment runner.

Usage::

    agelab baker verify   [--config FILE] [--out DIR] [--seed N] [--quiet]
    agelab baker converge --config FILE   [--out DIR] [--seed N] [--quiet]
    agelab packets evolve --config FILE   [--out DIR] [--seed N] [--quiet]
    agelab theorem        --config FILE   [--out DIR] [--seed N] [--quiet]
    agelab report SUMMARY.json ... --out FILE

Configuration files are INI files with one section per experiment
(``[baker-verify]``, ``[baker-converge]``, ``[packets-evolve]``,
``[theorem]``). The README documents every key. Grid sizes never have
defaults. The exit status is 0 exactly when every check passes.
"""

from __future__ import annotations

import argparse
import configparser
import itertools
import json
import logging
import math
import re
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.special import erfc

from . import __version__
from .baker_core import (
    BitTape,
    CylinderSpec,
    WalshExpansion,
    age_commutation_residual,
    baker_forward,
    baker_inverse,
    baker_iterate,
    baker_real,
    koopman_apply,
    measure_cylinder,
    random_expansion,
    random_tape,
)
from .errors import AgelabError, ConfigError
from .hardy_continuous import (
    max_in_window_t,
    tail_mass_quadrature,
    theorem_sweep,
)
from .hardy_discrete import (
    absorption_time,
    convergence_table,
    minus_norm_after,
    split_by_age,
    verify_forward_stability,
    write_convergence_csv,
)
from .liouville_packets import (
    DEFAULT_DECAY_THRESHOLD,
    DensityKernel,
    EnergyGrid,
    GaussianMonomial,
    NuSigmaGrid,
    build_kernel,
    commutator_residual,
    evolve_age,
    evolve_nu,
    from_age,
    make_packet,
    to_age,
)

log = logging.getLogger("agelab")

EXPERIMENTS = ("baker-verify", "baker-converge", "packets-evolve", "theorem")


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ProfileSpec:
    """One pure component ``weight * |f><f|`` of the initial state."""

    monomials: tuple[GaussianMonomial, ...]
    weight: float = 1.0
    channel: int = 0


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int = 0
    out: Path = Path("results")
    # physical grids (no defaults; required where used)
    n_nu: int | None = None
    nu_max: float | None = None
    sigma_min: float | None = None
    sigma_max: float | None = None
    n_sigma: int | None = None
    n_omega: int | None = None
    omega_max: float | None = None
    channels: int = 1
    profiles: tuple[ProfileSpec, ...] = ()
    t_schedule: tuple[float, ...] = ()
    horizon: bool = False
    oracle: str = "quadrature"
    decay_threshold: float = DEFAULT_DECAY_THRESHOLD
    certification_threshold: float = 1e-8
    oracle_tolerance: float = 1e-6
    # Walsh / Baker parameters
    expansion: WalshExpansion | None = None
    n_max: int = 32
    depth: int = 12
    coord_radius: int = 6
    samples: int = 1000
    index_radius: int = 16
    max_terms: int = 64
    shift_radius: int = 8


_GAUSS = re.compile(r"gaussian\(([^)]*)\)")
_KV = re.compile(r"(\w+)\s*=\s*([^\s,]+)")


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def parse_profile(text: str, where: str) -> ProfileSpec:
    """``weight=0.3 channel=0 gaussian(omega0=8, width=0.7) + gaussian(...)``."""
    monos = []
    for body in _GAUSS.findall(text):
        kw = dict(_KV.findall(body))
        try:
            monos.append(
                GaussianMonomial(
                    omega0=float(kw.pop("omega0")),
                    width=float(kw.pop("width")),
                    power=int(kw.pop("power", 0)),
                    amplitude=complex(kw.pop("amplitude", "1")),
                )
            )
        except KeyError as exc:
            raise ConfigError(where, f"gaussian(...) needs {exc.args[0]}") from None
        except ValueError as exc:
            raise ConfigError(where, str(exc)) from None
        if kw:
            raise ConfigError(where, f"unknown profile keys {sorted(kw)}")
    if not monos:
        raise ConfigError(where, f"no gaussian(...) term in {text!r}")
    outer = dict(_KV.findall(_GAUSS.sub("", text)))
    extra = set(outer) - {"weight", "channel"}
    if extra:
        raise ConfigError(where, f"unknown component keys {sorted(extra)}")
    weight = float(outer.get("weight", 1.0))
    if weight < 0:
        raise ConfigError(where, "weight must be nonnegative")
    return ProfileSpec(tuple(monos), weight, int(outer.get("channel", 0)))


def parse_schedule(text: str, where: str) -> tuple[float, ...]:
    """``start:stop:step`` (inclusive) or a comma separated list."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(s) for s in text.split(":"))
            if step <= 0:
                raise ConfigError(where, "step must be positive")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            values = tuple(start + k * step for k in range(count))
        else:
            values = tuple(float(s) for s in text.replace("\n", ",").split(",") if s.strip())
    except ValueError as exc:
        raise ConfigError(where, str(exc)) from None
    if not values:
        raise ConfigError(where, "empty schedule")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(where, "schedule must be strictly increasing")
    return values


def load_config(path: str | Path | None, experiment: str, overrides: dict | None = None) -> ExperimentConfig:
    """Read the ``[experiment]`` section of an INI file into a config."""
    cfg = ExperimentConfig(experiment)
    section: dict[str, str] = {}
    base = Path.cwd()
    if path is not None:
        path = Path(path)
        parser = configparser.ConfigParser(interpolation=None)
        try:
            with path.open() as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(str(path), f"cannot read config: {exc}") from None
        except configparser.Error as exc:
            raise ConfigError(str(path), str(exc)) from None
        if not parser.has_section(experiment):
            raise ConfigError(experiment, f"section [{experiment}] missing from {path}")
        section = dict(parser.items(experiment))
        base = path.parent

    def key(name: str) -> str:
        return f"{experiment}.{name}"

    def num(name: str, kind: Callable, positive: bool = False):
        raw = section.pop(name)
        try:
            val = kind(raw)
        except ValueError:
            raise ConfigError(key(name), f"not a valid {kind.__name__}: {raw!r}") from None
        if positive and not val > 0:
            raise ConfigError(key(name), "must be positive")
        return val

    ints = ("seed", "n_nu", "n_sigma", "n_omega", "channels", "n_max", "depth",
            "coord_radius", "samples", "index_radius", "max_terms", "shift_radius")
    floats = ("nu_max", "sigma_min", "sigma_max", "omega_max")
    positive_floats = ("decay_threshold", "certification_threshold", "oracle_tolerance")
    for name in ints:
        if name in section:
            setattr(cfg, name, num(name, int))
    for name in floats:
        if name in section:
            setattr(cfg, name, num(name, float))
    for name in positive_floats:
        if name in section:
            setattr(cfg, name, num(name, float, positive=True))
    if "out" in section:
        cfg.out = base / section.pop("out")
    if "profiles" in section:
        lines = [ln.strip() for ln in section.pop("profiles").splitlines() if ln.strip()]
        cfg.profiles = tuple(parse_profile(ln, key(f"profiles[{i}]")) for i, ln in enumerate(lines))
    if "t_schedule" in section:
        cfg.t_schedule = parse_schedule(section.pop("t_schedule"), key("t_schedule"))
    if "horizon" in section:
        cfg.horizon = section.pop("horizon").strip().lower() in ("1", "true", "yes", "on")
    if "oracle" in section:
        cfg.oracle = section.pop("oracle").strip()
        if cfg.oracle not in ("quadrature", "erfc"):
            raise ConfigError(key("oracle"), "must be 'quadrature' or 'erfc'")
    if "expansion" in section and "expansion_file" in section:
        raise ConfigError(key("expansion"), "give either expansion or expansion_file, not both")
    try:
        if "expansion" in section:
            text = section.pop("expansion").replace(";", "\n")
            cfg.expansion = WalshExpansion.from_text(text)
        if "expansion_file" in section:
            cfg.expansion = WalshExpansion.from_text((base / section.pop("expansion_file")).read_text())
    except (ValueError, OSError) as exc:
        raise ConfigError(key("expansion"), str(exc)) from None
    if section:
        raise ConfigError(key(sorted(section)[0]), "unknown key")
    for name, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, name, value)
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig) -> None:
    e = cfg.experiment

    def need(*names):
        for n in names:
            if getattr(cfg, n) is None:
                raise ConfigError(f"{e}.{n}", "required (grid sizes have no defaults)")

    for n in ("n_nu", "n_omega"):
        v = getattr(cfg, n)
        if v is not None and not _is_pow2(v):
            raise ConfigError(f"{e}.{n}", f"must be a power of two, got {v}")
    if cfg.channels < 1:
        raise ConfigError(f"{e}.channels", "must be positive")
    if e in ("packets-evolve", "theorem"):
        need("n_nu", "nu_max", "sigma_min", "sigma_max", "n_sigma", "n_omega", "omega_max")
        if not cfg.profiles:
            raise ConfigError(f"{e}.profiles", "at least one profile is required")
        if not cfg.t_schedule:
            raise ConfigError(f"{e}.t_schedule", "required")
        if cfg.n_nu < 16:
            raise ConfigError(f"{e}.n_nu", "must be at least 16")
        if cfg.n_omega < 16:
            raise ConfigError(f"{e}.n_omega", "must be at least 16")
        try:
            NuSigmaGrid(cfg.nu_max, cfg.n_nu, cfg.sigma_min, cfg.sigma_max, cfg.n_sigma, cfg.channels)
            EnergyGrid(cfg.omega_max, cfg.n_omega, cfg.channels)
        except ValueError as exc:
            raise ConfigError(f"{e}.grid", str(exc)) from None
        for i, p in enumerate(cfg.profiles):
            if p.channel >= cfg.channels:
                raise ConfigError(f"{e}.profiles[{i}]", f"channel {p.channel} >= channels {cfg.channels}")
    if e == "baker-converge" and cfg.expansion is None:
        raise ConfigError(f"{e}.expansion", "an expansion or expansion_file is required")
    if e == "baker-verify" and not 1 <= cfg.depth <= 2 * cfg.coord_radius + 1:
        raise ConfigError(f"{e}.depth", "must lie in 1..2*coord_radius+1")


# --------------------------------------------------------------------------
# summaries


@dataclass
class Check:
    name: str
    passed: bool
    value: float | int | str
    threshold: float | int | str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunSummary:
    experiment: str
    checks: list[Check] = field(default_factory=list)
    duration_s: float = 0.0
    seed: int = 0
    version: str = __version__
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, value, threshold) -> None:
        if isinstance(value, float) and not math.isfinite(value):
            value = repr(value)
        self.checks.append(Check(name, bool(passed), value, threshold))

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "status": "pass" if self.passed else "fail",
            "checks": [c.to_dict() for c in self.checks],
            "duration_s": self.duration_s,
            "seed": self.seed,
            "version": self.version,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> RunSummary:
        return cls(
            experiment=d["experiment"],
            checks=[Check(**c) for c in d.get("checks", [])],
            duration_s=d.get("duration_s", 0.0),
            seed=d.get("seed", 0),
            version=d.get("version", __version__),
            error=d.get("error"),
        )


def emit_report(summaries: Sequence[RunSummary], path: str | Path) -> Path:
    """Aggregate run summaries into one JSON document.

    A name that occurs more than once gets ``#<run index>`` appended on every
    occurrence, the index being its position in ``summaries``.
    """
    counts: dict[str, int] = {}
    for s in summaries:
        counts[s.experiment] = counts.get(s.experiment, 0) + 1
    runs = []
    for i, s in enumerate(summaries):
        d = s.to_dict()
        if counts[s.experiment] > 1:
            d["experiment"] = f"{s.experiment}#{i}"
        runs.append(d)
    doc = {
        "overall": "pass" if all(s.passed for s in summaries) else "fail",
        "count": len(runs),
        "experiments": runs,
    }
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    except OSError as exc:
        raise AgelabError(f"cannot write report {path}: {exc}") from exc
    return path


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_rows(path: Path, header: Sequence[str], rows) -> None:
    with path.open("w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")


# --------------------------------------------------------------------------
# experiments


def _baker_verify(cfg: ExperimentConfig, summary: RunSummary) -> None:
    rng = np.random.default_rng(cfg.seed)
    r, n_samples, radius, shift = cfg.coord_radius, cfg.samples, cfg.index_radius, cfg.shift_radius
    rows = []

    bad = 0
    for _ in range(n_samples):
        tape = random_tape(rng, 24, 24)
        back = baker_inverse(baker_forward(tape))
        fwd = baker_forward(baker_inverse(tape))
        bad += back != tape or fwd != tape or len(baker_forward(tape)) != len(tape)
    summary.add("invertibility", bad == 0, bad, 0)

    bad = 0
    for _ in range(n_samples):
        tape = random_tape(rng, 40, 40)
        img = baker_forward(tape)
        bad += baker_real(float(tape.x), float(tape.y)) != (float(img.x), float(img.y))
    summary.add("real_map_agreement", bad == 0, bad, 0)

    coords = range(-r, r + 1)
    bad = count = 0
    for d in range(1, cfg.depth + 1):
        target = 2 ** -d
        for times in itertools.combinations(coords, d):
            for cells in itertools.product((1, 2), repeat=d):
                count += 1
                if measure_cylinder(CylinderSpec(zip(times, cells))) != target:
                    bad += 1
    summary.add("independence", bad == 0, bad, 0)
    rows.append(("independence_specs", count))

    bad = 0
    for _ in range(n_samples):
        d = int(rng.integers(1, cfg.depth + 1))
        times = rng.choice(np.arange(-r, r + 1), size=d, replace=False).tolist()
        spec = CylinderSpec(zip(times, rng.integers(1, 3, size=d).tolist()))
        k = int(rng.integers(-shift, shift + 1))
        bad += measure_cylinder(spec.shifted(k)) != measure_cylinder(spec)
    summary.add("measure_preservation", bad == 0, bad, 0)

    depth = radius + shift + 1
    bad = 0
    for _ in range(n_samples):
        rho = random_expansion(rng, cfg.max_terms, radius, mean_zero=False)
        tape = random_tape(rng, 2 * depth, 2 * depth)
        n = int(rng.integers(-shift, shift + 1))
        bad += koopman_apply(rho, n).evaluate(tape) != rho.evaluate(baker_iterate(tape, -n))
    summary.add("koopman_duality", bad == 0, bad, 0)

    bad_cov = bad_abs = 0
    for _ in range(n_samples):
        rho = random_expansion(rng, cfg.max_terms, radius)
        n = int(rng.integers(-shift, shift + 1))
        bad_cov += age_commutation_residual(rho, n) != 0
        n_star = absorption_time(rho)
        scan = [minus_norm_after(rho, m) for m in range(n_star + 3)]
        brute = next(m for m in range(len(scan)) if all(v == 0 for v in scan[m:]))
        bad_abs += brute != n_star or (n_star >= 1 and scan[n_star - 1] == 0)
    summary.add("age_covariance", bad_cov == 0, bad_cov, 0)
    summary.add("discrete_absorption", bad_abs == 0, bad_abs, 0)

    bad = 0
    for _ in range(n_samples):
        rho = random_expansion(rng, cfg.max_terms, radius, min_age=1)
        bad += not verify_forward_stability(rho)
    summary.add("forward_stability", bad == 0, bad, 0)

    rows.extend((c.name, c.value) for c in summary.checks)
    _write_rows(cfg.out / "baker_verify.csv", ("check", "value"), rows)


def _baker_converge(cfg: ExperimentConfig, summary: RunSummary) -> None:
    rho = cfg.expansion
    rows = convergence_table(rho, cfg.n_max)
    write_convergence_csv(cfg.out / "baker_converge.csv", rows)
    minus = [m for _, m, _ in rows]
    summary.add("monotone_minus_norm", all(b <= a for a, b in zip(minus, minus[1:])), 0, 0)
    total = rho.norm()
    summary.add(
        "norm_conserved",
        all(math.isclose(math.hypot(m, p), total, rel_tol=1e-12, abs_tol=0) for _, m, p in rows),
        total, 0,
    )
    if rho.is_mean_zero and rho:
        n_star = absorption_time(rho)
        after = [m for n, m, _ in rows if n >= n_star]
        absorbed = n_star <= cfg.n_max and all(m == 0 for m in after)
        summary.add("absorbed_by_n_star", absorbed, n_star, cfg.n_max)
    else:
        summary.add("equilibrium_component", True, float(abs(rho.constant_term)), 0)
    stable = split_by_age(rho).plus
    summary.add("forward_stability", (not stable) or verify_forward_stability(stable), 0, 0)


def _build_state(cfg: ExperimentConfig) -> DensityKernel:
    energy = EnergyGrid(cfg.omega_max, cfg.n_omega, cfg.channels)
    grid = NuSigmaGrid(cfg.nu_max, cfg.n_nu, cfg.sigma_min, cfg.sigma_max, cfg.n_sigma, cfg.channels)
    comps = []
    for p in cfg.profiles:
        f = make_packet(list(p.monomials), energy, p.channel, cfg.decay_threshold).normalized()
        comps.append((p.weight, f, f))
    return build_kernel(comps, grid).normalized()


def _packets_evolve(cfg: ExperimentConfig, summary: RunSummary) -> None:
    rho = _build_state(cfg)
    mass0 = rho.mass()
    rep = to_age(rho, cfg.decay_threshold)
    back = from_age(rep)
    rt = float(np.linalg.norm(back.samples - rho.samples) / np.linalg.norm(rho.samples))
    summary.add("round_trip", rt <= 1e-10, rt, 1e-10)
    parseval = abs(rep.mass() - mass0) / mass0
    summary.add("parseval", parseval <= 1e-10, parseval, 1e-10)
    comm = commutator_residual(rho, cfg.decay_threshold)
    summary.add("commutator", comm < 1e-6, comm, 1e-6)

    rows = []
    worst_drift = worst_route = worst_herm = 0.0
    for t in cfg.t_schedule:
        ev = evolve_nu(rho, t)
        drift = abs(ev.mass() - mass0)
        route1 = to_age(ev, None).samples
        route2 = evolve_age(rep, t).samples
        two = float(np.linalg.norm(route1 - route2) / np.linalg.norm(rho.samples))
        herm = ev.hermiticity_error() if rho.hermitian else 0.0
        worst_drift, worst_route, worst_herm = max(worst_drift, drift), max(worst_route, two), max(worst_herm, herm)
        rows.append((float(t), ev.mass(), drift, two))
    _write_rows(cfg.out / "packets_evolve.csv", ("t", "mass", "mass_drift", "two_route_error"), rows)
    summary.add("unitarity", worst_drift <= 1e-12, worst_drift, 1e-12)
    summary.add("two_route_evolution", worst_route <= 1e-10, worst_route, 1e-10)
    summary.add("hermiticity_preserved", worst_herm <= 1e-12, worst_herm, 1e-12)


def _theorem(cfg: ExperimentConfig, summary: RunSummary) -> None:
    rho = _build_state(cfg)
    rep = to_age(rho, cfg.decay_threshold)
    schedule = list(cfg.t_schedule)
    if cfg.horizon:
        t_h = max_in_window_t(rep)
        if t_h > schedule[-1]:
            schedule.append(t_h)
    result = theorem_sweep(rho, schedule, cfg.certification_threshold, decay_threshold=cfg.decay_threshold)
    result.write_csv(cfg.out / "theorem.csv")
    result.write_json(cfg.out / "theorem_summary.json", cfg.seed)

    mass0 = result.initial_mass
    worst = 0.0
    for row in result.rows:
        if cfg.oracle == "erfc":
            expected = 0.5 * float(erfc(row.t)) * mass0
        else:
            expected = tail_mass_quadrature(rep, row.t)
        worst = max(worst, abs(row.plus_mass - expected))
    summary.add(f"oracle_{cfg.oracle}", worst <= cfg.oracle_tolerance * mass0, worst, cfg.oracle_tolerance)
    summary.add("monotone_plus_mass", result.monotone, 0, 1e-12)
    cons = result.conservation_error
    summary.add("conservation", cons <= 1e-10 * mass0, cons, 1e-10)
    last = result.rows[-1]
    summary.add("certified", result.certified, last.hardy_residual, cfg.certification_threshold)
    summary.add("final_plus_fraction", last.plus_mass / mass0 < cfg.certification_threshold,
                last.plus_mass / mass0, cfg.certification_threshold)


RUNNERS = {
    "baker-verify": _baker_verify,
    "baker-converge": _baker_converge,
    "packets-evolve": _packets_evolve,
    "theorem": _theorem,
}


def run(cfg: ExperimentConfig) -> RunSummary:
    """Run one experiment, write its artifacts and ``summary.json``."""
    summary = RunSummary(cfg.experiment, seed=cfg.seed)
    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise AgelabError(f"cannot create output directory {cfg.out}: {exc}") from exc
    start = time.perf_counter()
    try:
        RUNNERS[cfg.experiment](cfg, summary)
    except (AgelabError, ValueError) as exc:
        summary.error = f"{cfg.experiment}: {type(exc).__name__}: {exc}"
    summary.duration_s = time.perf_counter() - start
    (cfg.out / "summary.json").write_text(json.dumps(summary.to_dict(), sort_keys=True, indent=2) + "\n")
    return summary


# --------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser, config_required: bool) -> None:
    p.add_argument("--config", required=config_required, help="INI configuration file")
    p.add_argument("--out", help="output directory (overrides the config)")
    p.add_argument("--seed", type=int, help="random seed (overrides the config)")
    p.add_argument("--quiet", action="store_true", help="only report failures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="agelab", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"agelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    baker = sub.add_parser("baker", help="exact Baker-map experiments")
    bsub = baker.add_subparsers(dest="action", required=True)
    _common(bsub.add_parser("verify", help="exact identities of the symbolic dynamics"), False)
    _common(bsub.add_parser("converge", help="absorption of a Walsh expansion into H+"), True)

    packets = sub.add_parser("packets", help="Liouvillian wave-packet experiments")
    psub = packets.add_subparsers(dest="action", required=True)
    _common(psub.add_parser("evolve", help="transform, commutator and unitarity checks"), True)

    _common(sub.add_parser("theorem", help="convergence of evolved states to Psi-"), True)

    rep = sub.add_parser("report", help="merge summary.json files into one report")
    rep.add_argument("summaries", nargs="*", help="summary.json files")
    rep.add_argument("--out", required=True, help="report file to write")
    rep.add_argument("--quiet", action="store_true")
    return parser


def _experiment_name(args) -> str:
    if args.command == "theorem":
        return "theorem"
    return f"{args.command}-{args.action}"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")

    if args.command == "report":
        try:
            summaries = [RunSummary.from_dict(json.loads(Path(p).read_text())) for p in args.summaries]
            path = emit_report(summaries, args.out)
        except (OSError, ValueError, KeyError, AgelabError) as exc:
            log.error("report: %s", exc)
            return 2
        overall = all(s.passed for s in summaries)
        log.info("report %s: %d experiments, %s", path, len(summaries), "pass" if overall else "fail")
        return 0 if overall else 1

    name = _experiment_name(args)
    overrides = {"seed": args.seed, "out": Path(args.out) if args.out else None}
    try:
        cfg = load_config(args.config, name, overrides)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return 2
    try:
        summary = run(cfg)
    except AgelabError as exc:
        log.error("%s: %s", name, exc)
        return 2
    for c in summary.checks:
        if not c.passed or not args.quiet:
            log.log(logging.INFO if c.passed else logging.ERROR,
                    "%-24s %s  value=%s threshold=%s", c.name, "PASS" if c.passed else "FAIL", c.value, c.threshold)
    if summary.error:
        log.error("%s", summary.error)
    log.info("%s: %s (seed %d, %.2fs) -> %s", name, "pass" if summary.passed else "fail",
             summary.seed, summary.duration_s, cfg.out)
    return 0 if summary.passed else 1


if __name__ == "__main__":
    sys.exit(main())
