"""Command-line front end.

Subcommands: ``run`` executes a scenario (preset name or config file) and
writes the CSV outputs plus a manifest, ``list-presets`` shows the stock
scenarios, ``verify`` runs built-in invariant checks on a small seeded
instance.  Scenario files are flat ``key = value`` text with ``#``
comments; unknown keys are errors.  The manifest written next to the CSVs
is itself a valid scenario file that parses back to the executed config.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import platform
import shutil
import sys
import tempfile

import numpy as np

from . import __version__
from . import capacity as cap
from . import channel as chan
from . import designs as des
from . import experiments as xp
from .designs import DesignKind
from .linalg import trace_gram, vec

__all__ = ["ConfigParseError", "parse_scenario_file", "config_to_text", "main"]

MANIFEST_NAME = "manifest.txt"

_CHANNEL_KEYS = ("n_tx", "n_rx", "n_ris", "n_paths_h", "n_paths_g")

_ALL_KEYS = _CHANNEL_KEYS + (
    "preset", "name", "los", "los_power_ratio_db", "n_realizations",
    "base_seed", "snr_grid_db", "designs", "budget_mode", "snr_ref_mode",
)


class ConfigParseError(ValueError):
    """A scenario file is malformed; the message carries the line number."""


def _parse_kv_lines(text: str):
    """Collect key -> (raw value, line number), rejecting junk early."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"line {lineno}: expected 'key = value', "
                                   f"got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigParseError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigParseError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigParseError(f"line {lineno}: empty value for {key!r}")
        entries[key] = (value, lineno)
    return entries


def _want(entries, key, convert, default=None):
    if key not in entries:
        return default
    value, lineno = entries[key]
    try:
        return convert(value)
    except ConfigParseError:
        raise
    except Exception as exc:
        raise ConfigParseError(f"line {lineno}: bad value for {key}: {exc}") from None


def _to_int(value: str) -> int:
    return int(value, 10)


def _to_bool(value: str) -> bool:
    low = value.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"expected true/false, got {value!r}")


def _to_grid(value: str) -> tuple:
    return tuple(float(part.strip()) for part in value.split(",") if part.strip())


def _to_designs(value: str) -> tuple:
    return tuple(DesignKind.from_label(part.strip())
                 for part in value.split(",") if part.strip())


def parse_scenario_text(text: str, default_name: str = "scenario") -> xp.ScenarioConfig:
    entries = _parse_kv_lines(text)

    base = None
    if "preset" in entries:
        value, lineno = entries["preset"]
        try:
            base = xp.preset_by_name(value)
        except KeyError:
            raise ConfigParseError(f"line {lineno}: unknown preset {value!r}") from None

    if base is None:
        missing = [k for k in _CHANNEL_KEYS if k not in entries]
        if missing:
            raise ConfigParseError(
                "no preset given and channel keys missing: " + ", ".join(missing)
            )

    def channel_default(field):
        return getattr(base.channel, field) if base is not None else None

    spec_kwargs = {}
    for key in _CHANNEL_KEYS:
        spec_kwargs[key] = _want(entries, key, _to_int, channel_default(key))
    spec_kwargs["los"] = _want(entries, "los", _to_bool,
                               channel_default("los") or False)
    spec_kwargs["los_power_ratio_db"] = _want(
        entries, "los_power_ratio_db", float,
        channel_default("los_power_ratio_db") if base is not None else 10.0,
    )

    base_seed = _want(entries, "base_seed", _to_int,
                      base.base_seed if base is not None else xp.DEFAULT_BASE_SEED)
    name = _want(entries, "name", str,
                 base.name if base is not None else default_name)
    cfg_kwargs = dict(
        name=name,
        n_realizations=_want(entries, "n_realizations", _to_int,
                             base.n_realizations if base is not None else 100),
        snr_grid_db=_want(entries, "snr_grid_db", _to_grid,
                          base.snr_grid_db if base is not None
                          else xp.DEFAULT_SNR_GRID_DB),
        designs=_want(entries, "designs", _to_designs,
                      base.designs if base is not None else xp.ALL_DESIGNS),
        base_seed=base_seed,
        budget_mode=_want(entries, "budget_mode", str,
                          base.budget_mode if base is not None
                          else "per_symbol_total"),
        snr_ref_mode=_want(entries, "snr_ref_mode", str,
                           base.snr_ref_mode if base is not None else "per_design"),
    )
    try:
        spec = chan.ChannelSpec(seed=base_seed, **spec_kwargs)
        return xp.ScenarioConfig(channel=spec, **cfg_kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigParseError(str(exc)) from None


def parse_scenario_file(path: str) -> xp.ScenarioConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc.strerror}") from None
    stem = os.path.splitext(os.path.basename(path))[0]
    return parse_scenario_text(text, default_name=stem or "scenario")


def config_to_text(cfg: xp.ScenarioConfig, comments: tuple = ()) -> str:
    """Serialize a config in the scenario-file grammar (round-trips exactly)."""
    lines = [f"# {c}" for c in comments]
    c = cfg.channel
    lines += [
        f"name = {cfg.name}",
        f"n_tx = {c.n_tx}",
        f"n_rx = {c.n_rx}",
        f"n_ris = {c.n_ris}",
        f"n_paths_h = {c.n_paths_h}",
        f"n_paths_g = {c.n_paths_g}",
        f"los = {'true' if c.los else 'false'}",
        f"los_power_ratio_db = {c.los_power_ratio_db!r}",
        f"n_realizations = {cfg.n_realizations}",
        f"base_seed = {cfg.base_seed}",
        "snr_grid_db = " + ", ".join(repr(s) for s in cfg.snr_grid_db),
        "designs = " + ", ".join(k.value for k in cfg.designs),
        f"budget_mode = {cfg.budget_mode}",
        f"snr_ref_mode = {cfg.snr_ref_mode}",
    ]
    return "\n".join(lines) + "\n"


def _load_run_config(source: str) -> xp.ScenarioConfig:
    try:
        return xp.preset_by_name(source)
    except KeyError:
        pass
    if os.path.exists(source):
        return parse_scenario_file(source)
    raise ConfigParseError(
        f"{source!r} is neither a preset name nor a scenario file; "
        f"presets: {', '.join(p.name for p in xp.preset_scenarios())}"
    )


def _cmd_run(args) -> int:
    cfg = _load_run_config(args.scenario)
    if args.seed is not None or args.realizations is not None:
        channel_spec = cfg.channel
        seed = args.seed if args.seed is not None else cfg.base_seed
        channel_spec = dataclasses.replace(channel_spec, seed=seed)
        cfg = dataclasses.replace(
            cfg,
            channel=channel_spec,
            base_seed=seed,
            n_realizations=(args.realizations if args.realizations is not None
                            else cfg.n_realizations),
        )

    out_root = args.out
    target = os.path.join(out_root, cfg.name)
    if os.path.isdir(target) and os.listdir(target) and not args.force:
        raise RuntimeError(
            f"output directory {target} exists and is not empty (use --force)"
        )

    result = xp.run_scenario(cfg, threads=args.threads)

    os.makedirs(out_root, exist_ok=True)
    tmp_dir = tempfile.mkdtemp(prefix=f".{cfg.name}-", dir=out_root)
    try:
        xp.write_scenario_csvs(result, tmp_dir)
        comments = (
            "run record; parses back to the executed scenario config",
            f"ristrace_version = {__version__}",
            f"numpy_version = {np.__version__}",
            f"python_version = {platform.python_version()}",
            f"threads = {args.threads}",
        )
        with open(os.path.join(tmp_dir, MANIFEST_NAME), "w") as fh:
            fh.write(config_to_text(result.config, comments=comments))
        if os.path.isdir(target):
            shutil.rmtree(target)
        os.rename(tmp_dir, target)
    except Exception:
        shutil.rmtree(tmp_dir, ignore_errors=True)
        raise
    print(f"wrote {cfg.name}: {cfg.n_realizations} realizations, "
          f"{len(cfg.designs)} designs -> {target}")
    return 0


def _cmd_list_presets(_args) -> int:
    for p in xp.preset_scenarios():
        c = p.channel
        los = f"LoS+NLoS ({c.los_power_ratio_db:g} dB)" if c.los else "NLoS"
        print(f"{p.name:18s} n_ris={c.n_ris:<3d} n_paths={c.n_paths_h:<4d} {los}")
    return 0


def _verify_checks(seed: int):
    """Yield (check name, bool) pairs for the built-in invariant suite."""
    spec = chan.ChannelSpec(n_tx=8, n_rx=8, n_ris=8, n_paths_h=6, n_paths_g=6,
                            los=True, los_power_ratio_db=10.0, seed=seed)
    real = chan.realize(spec)
    h, g = real.h, real.g
    rng = np.random.default_rng(seed)

    built = {kind: des.build_for_kind(kind, h, g, rng=rng) for kind in DesignKind}
    yield ("power constraint on every design kind", all(
        abs(trace_gram(d.phi) - 8.0) <= 1e-9 * 8.0 for d in built.values()
    ))

    k = des.build_k(h, g)
    phi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    phi *= math.sqrt(8.0 / float(np.sum(np.abs(phi) ** 2)))
    lhs = float(np.real(phi.conj() @ k @ phi))
    rhs = trace_gram(g @ np.diag(phi) @ h)
    yield ("diagonal quadratic form matches composite power",
           abs(lhs - rhs) <= 1e-10 * abs(rhs))

    m = des.build_m(h, g)
    psi = vec(built[DesignKind.OPT_GEN].phi)
    lhs = float(np.real(psi.conj() @ m @ psi))
    rhs = built[DesignKind.OPT_GEN].achieved_trace_objective
    yield ("generalized quadratic form matches composite power",
           abs(lhs - rhs) <= 1e-10 * abs(rhs))

    cand_best = 0.0
    for _ in range(200):
        z = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        z *= math.sqrt(8.0 / float(np.sum(np.abs(z) ** 2)))
        cand_best = max(cand_best, float(np.real(z.conj() @ k @ z)))
    d_diag = built[DesignKind.OPT_DIAG].achieved_trace_objective
    d_gen = built[DesignKind.OPT_GEN].achieved_trace_objective
    yield ("optimal designs dominate random candidates",
           d_gen >= d_diag * (1 - 1e-12) and d_diag >= cand_best * (1 - 1e-9))

    dense = des.design_opt_gen_dense(h, g)
    yield ("generalized fast path matches dense oracle",
           abs(d_gen - dense.achieved_trace_objective) <= 1e-8 * d_gen)

    f = des.compose_f(g, built[DesignKind.OPT_DIAG].phi, h)
    prof = cap.eigenprofile(f, 8)
    yield ("eigenprofile sums to channel power",
           abs(prof.total - trace_gram(f)) <= 1e-10 * trace_gram(f))

    res = cap.waterfill(prof, total_power=5.0)
    ok = abs(res.powers.sum() - 5.0) <= 5.0 * 1e-9
    for p, l in zip(res.powers, prof.eigenvalues):
        if p > 0:
            ok = ok and abs(p + 1.0 / l - res.water_level) <= 1e-9 * res.water_level
        elif l > 0:
            ok = ok and 1.0 / l >= res.water_level * (1 - 1e-9)
    yield ("waterfilling conserves the budget and satisfies optimality", ok)

    tiny = xp.ScenarioConfig(
        name="verify", channel=spec, n_realizations=2,
        snr_grid_db=(-10.0, 10.0), base_seed=seed,
    )
    a = xp.run_scenario(tiny)
    b = xp.run_scenario(tiny)
    same = all(
        np.array_equal(a.per_design[kd].power_samples,
                       b.per_design[kd].power_samples)
        and a.per_design[kd].capacity_curve == b.per_design[kd].capacity_curve
        for kd in tiny.designs
    )
    yield ("scenario reruns are bit-identical", same)


def _cmd_verify(args) -> int:
    failures = 0
    for name, ok in _verify_checks(args.seed):
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures += 1
    if failures:
        print(f"{failures} check(s) failed", file=sys.stderr)
        return 1
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ristrace",
        description="Trace-maximizing RIS designs over simulated MIMO links",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and write CSV results")
    run.add_argument("--scenario", required=True,
                     help="preset name or scenario file path")
    run.add_argument("--out", required=True, help="output root directory")
    run.add_argument("--seed", type=int, default=None,
                     help="override the base seed")
    run.add_argument("--realizations", type=int, default=None,
                     help="override the realization count")
    run.add_argument("--threads", type=int, default=1,
                     help="worker threads for realizations")
    run.add_argument("--force", action="store_true",
                     help="replace an existing non-empty scenario directory")
    run.set_defaults(func=_cmd_run)

    lp = sub.add_parser("list-presets", help="list the stock scenarios")
    lp.set_defaults(func=_cmd_list_presets)

    ver = sub.add_parser("verify", help="run built-in invariant checks")
    ver.add_argument("--seed", type=int, default=8)
    ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigParseError as exc:
        print(f"ristrace: config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # one-line diagnostic, nonzero exit
        print(f"ristrace: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
