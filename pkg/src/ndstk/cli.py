"""``ndstk`` command line: run one experiment, write self-describing artifacts.

Each subcommand resolves its configuration as defaults < ``--config`` file <
explicit flags < ``NDSTK_SEED``, validates it before computing, writes
``<out>/<experiment>.json``, ``.csv`` and ``.plot.csv`` atomically, and prints
a JSON summary. Exit codes: 0 success, 2 configuration error, 3 incomplete or
inconclusive.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .chains import check_chain_property
from .entropy import entropy_estimate
from .fuzzy import d_endograph, d_infty
from .hyperspace import arc_hausdorff, hausdorff
from .schemas import SchemaError, load
from .sensitivity import (FAMILIES, FamilyPredicate, check_multi_F_sensitive, family_member, induced_containments,
                          sensitivity_times)
from .shadowing import (decide_finite_shadowing, decide_h_shadowing, estimate_shadowing_modulus,
                        mixing_from_shadowing)
from .spaces import (autonomous, build_fm, build_rotation_sequence, build_transitive_zero_entropy, constant,
                     frac, identity, nds_to_dict, rotation, tent)
from .systems import (LatticeError, arcs_system, base_system, fuzzy_system, hyper_system, power_system,
                      product_system)

EXIT_OK, EXIT_CONFIG, EXIT_INCOMPLETE = 0, 2, 3
BUILDERS = ("tent", "identity", "rotation", "rotations", "fm", "constant", "construction")
SYSTEM_KINDS = ("base", "power", "product", "hyper", "fuzzy", "arcs")

SYSTEM_DEFAULTS = {
    "system": "tent", "nds": None, "angle": "1/3", "angles": ["1/3", "1/5", "2/7"], "fm_index": 1,
    "value": "0", "construction_levels": 4, "kind": "base", "k": 2, "m": 2, "partner": "identity",
}
DEFAULTS = {
    "entropy": {**SYSTEM_DEFAULTS, "eps": ["1/64"], "n_max": 10, "budget": None, "spanning": True, "rho": 4,
                "fuzzy_metric": "d_infty"},
    "construct": {"levels": 3, "verify": False},
    "chains": {**SYSTEM_DEFAULTS, "property": "mixing", "eps": "1/10", "grid_step": "1/50", "horizon": 64,
               "order": 2, "exhaustive": False},
    "shadow": {**SYSTEM_DEFAULTS, "mode": "finite", "orbit": ["2/5", "9/10", "3/10"], "eps": "3/20",
               "delta": "1/20", "trials": 50, "length": 6, "deltas": ["1/10", "1/20", "1/50", "1/100"],
               "u_center": "1/5", "v_center": "4/5", "radius": "1/10", "horizon": 8},
    "sense": {**SYSTEM_DEFAULTS, "mode": "times", "points": ["1/3"], "compact": None, "fuzzy": None,
              "eps": "1/20", "delta": "1/4", "horizon": 20, "samples": 16, "family": "cofinite",
              "family_param": 6, "random_extra": 0},
    "metrics": {"hausdorff": None, "d_infty": None, "endograph": None, "arc": None, "resolution": 1000},
}


class ConfigError(ValueError):
    pass


class Incomplete(Exception):
    """Raised after artifacts are written when the result is partial."""


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _system_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("system")
    g.add_argument("--system", choices=BUILDERS, help="builder name")
    g.add_argument("--nds", metavar="FILE", help="NdsSpec JSON fixture (overrides --system)")
    g.add_argument("--angle", help="rotation angle")
    g.add_argument("--angles", nargs="+", help="cycled rotation angles")
    g.add_argument("--fm-index", dest="fm_index", type=int, help="m for the map F_m")
    g.add_argument("--value", help="value of the constant map")
    g.add_argument("--construction-levels", dest="construction_levels", type=int,
                   help="levels of the transitive zero-entropy construction")
    g.add_argument("--kind", choices=SYSTEM_KINDS)
    g.add_argument("--k", type=int, help="power k")
    g.add_argument("--m", type=int, help="set size for hyper/fuzzy")
    g.add_argument("--partner", choices=BUILDERS, help="second factor of a product")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", metavar="FILE", help="JSON config file")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", metavar="DIR", help="artifact directory (default: current directory)")

    ap = argparse.ArgumentParser(prog="ndstk", description="Experiments on non-autonomous dynamical systems.")
    ap.add_argument("--version", action="version", version=f"ndstk {__version__}")
    sub = ap.add_subparsers(dest="experiment", required=True)
    kw = {"parents": [common], "argument_default": argparse.SUPPRESS}

    p = sub.add_parser("entropy", help="separated/spanning entropy estimates", **kw)
    _system_flags(p)
    p.add_argument("--eps", nargs="+", help="strictly decreasing eps schedule")
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--budget", type=int, help="candidate budget per row")
    p.add_argument("--no-spanning", dest="spanning", action="store_false")
    p.add_argument("--rho", type=int)
    p.add_argument("--fuzzy-metric", dest="fuzzy_metric", choices=["d_infty"])

    p = sub.add_parser("construct", help="transitive zero-entropy construction", **kw)
    p.add_argument("--levels", type=int)
    p.add_argument("--verify", action="store_true")

    p = sub.add_parser("chains", help="chain transitivity and mixing on a grid", **kw)
    _system_flags(p)
    p.add_argument("--property", choices=["transitive", "mixing", "weak_mixing"])
    p.add_argument("--eps")
    p.add_argument("--grid-step", dest="grid_step")
    p.add_argument("--horizon", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--exhaustive", action="store_true")

    p = sub.add_parser("shadow", help="exact shadowing decisions", **kw)
    _system_flags(p)
    p.add_argument("--mode", choices=["finite", "h", "modulus", "mixing"])
    p.add_argument("--orbit", nargs="+")
    p.add_argument("--eps")
    p.add_argument("--delta")
    p.add_argument("--trials", type=int)
    p.add_argument("--length", type=int)
    p.add_argument("--deltas", nargs="+")
    p.add_argument("--u-center", dest="u_center")
    p.add_argument("--v-center", dest="v_center")
    p.add_argument("--radius")
    p.add_argument("--horizon", type=int)

    p = sub.add_parser("sense", help="sensitivity time sets", **kw)
    _system_flags(p)
    p.add_argument("--mode", choices=["times", "containments"])
    p.add_argument("--points", nargs="+")
    p.add_argument("--compact", metavar="FILE", help="FiniteCompact fixture")
    p.add_argument("--fuzzy", metavar="FILE", help="PCFuzzy fixture")
    p.add_argument("--eps")
    p.add_argument("--delta")
    p.add_argument("--horizon", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--family-param", dest="family_param", type=int)
    p.add_argument("--random-extra", dest="random_extra", type=int)

    p = sub.add_parser("metrics", help="distances between fixtures", **kw)
    p.add_argument("--hausdorff", nargs=2, metavar=("A", "B"))
    p.add_argument("--d-infty", dest="d_infty", nargs=2, metavar=("A", "B"))
    p.add_argument("--endograph", nargs=2, metavar=("A", "B"))
    p.add_argument("--arc", nargs=2, metavar=("A", "B"))
    p.add_argument("--resolution", type=int)
    return ap


def resolve_config(args: argparse.Namespace, environ=None) -> dict:
    """Merge defaults, the config file, explicit flags and ``NDSTK_SEED``."""
    environ = os.environ if environ is None else environ
    exp = args.experiment
    flags = {k: v for k, v in vars(args).items() if k not in ("experiment", "config")}
    cfg = dict(DEFAULTS[exp])
    cfg.update({"seed": 0, "out": "."})
    path = getattr(args, "config", None)
    if path:
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config file must hold a JSON object")
        if doc.get("experiment", exp) != exp:
            raise ConfigError(f"config is for {doc['experiment']!r}, not {exp!r}")
        unknown = sorted(set(doc) - set(cfg) - {"experiment", "version"})
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        cfg.update({k: v for k, v in doc.items() if k not in ("experiment", "version")})
    cfg.update(flags)
    if "NDSTK_SEED" in environ:
        try:
            cfg["seed"] = int(environ["NDSTK_SEED"])
        except ValueError:
            raise ConfigError("NDSTK_SEED must be an integer") from None
    cfg["experiment"] = exp
    cfg["version"] = __version__
    return cfg


# ---------------------------------------------------------------------------
# validation helpers
# ---------------------------------------------------------------------------


def _fraction(cfg, key, positive=True) -> Fraction:
    try:
        v = frac(cfg[key]) if not isinstance(cfg[key], float) else None
    except (TypeError, ValueError, ZeroDivisionError):
        v = None
    if v is None:
        raise ConfigError(f"{key} must be an exact fraction string like '1/64'")
    if positive and v <= 0:
        raise ConfigError(f"{key} must be positive")
    return v


def _fractions(cfg, key, positive=True) -> list:
    vals = cfg[key]
    if not isinstance(vals, list) or not vals:
        raise ConfigError(f"{key} must be a nonempty list")
    return [_fraction({key: v}, key, positive) for v in vals]


def _int(cfg, key, lo=None, hi=None) -> int:
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{key} must be an integer")
    if (lo is not None and v < lo) or (hi is not None and v > hi):
        raise ConfigError(f"{key} must lie in [{lo}, {hi if hi is not None else 'inf'}]")
    return v


def _normalise(cfg: dict, keys: dict) -> None:
    """Rewrite fraction-valued keys in canonical ``p/q`` form."""
    for k, kind in keys.items():
        if cfg.get(k) is None:
            continue
        if kind == "list":
            cfg[k] = [str(v) for v in _fractions(cfg, k, positive=False)]
        else:
            cfg[k] = str(_fraction(cfg, k, positive=False))


def _builder(name: str, cfg: dict):
    if name == "tent":
        return autonomous(tent())
    if name == "identity":
        return autonomous(identity())
    if name == "rotation":
        return autonomous(rotation(_fraction(cfg, "angle", positive=False)))
    if name == "rotations":
        return build_rotation_sequence(_fractions(cfg, "angles", positive=False))
    if name == "fm":
        return autonomous(build_fm(_int(cfg, "fm_index", 1)))
    if name == "constant":
        v = _fraction(cfg, "value", positive=False)
        if not 0 <= v <= 1:
            raise ConfigError("value must lie in [0, 1]")
        return autonomous(constant(v))
    if name == "construction":
        return build_transitive_zero_entropy(_int(cfg, "construction_levels", 1, 8)).nds
    raise ConfigError(f"unknown builder {name!r}; choose from {', '.join(BUILDERS)}")


def build_nds(cfg: dict):
    if cfg.get("nds"):
        try:
            return load(cfg["nds"], "nds")
        except OSError as e:
            raise ConfigError(f"cannot read {cfg['nds']}: {e}") from None
    return _builder(cfg["system"], cfg)


def build_system(cfg: dict, allowed=SYSTEM_KINDS):
    nds = build_nds(cfg)
    kind = cfg["kind"]
    if kind not in allowed:
        raise ConfigError(f"kind {kind!r} is not supported here; choose from {', '.join(allowed)}")
    if kind == "base":
        return base_system(nds)
    if kind == "power":
        return power_system(nds, _int(cfg, "k", 1, 8))
    if kind == "product":
        return product_system(nds, _builder(cfg["partner"], cfg))
    if kind == "hyper":
        return hyper_system(nds, _int(cfg, "m", 1, 8))
    if kind == "fuzzy":
        return fuzzy_system(nds, _int(cfg, "m", 1, 8))
    return arcs_system(nds)


# ---------------------------------------------------------------------------
# artifacts
# ---------------------------------------------------------------------------


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def embedded_config(cfg: dict) -> dict:
    """The resolved config as stored in artifacts; the output directory is left
    out so that runs into different directories stay byte-identical."""
    return {k: v for k, v in cfg.items() if k != "out"}


def _config_field(cfg: dict) -> str:
    return json.dumps(embedded_config(cfg), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def to_csv(header: list, rows: list, cfg: dict) -> str:
    """RFC-4180 CSV; every record carries the seed and the resolved config."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(list(header) + ["seed", "config"])
    c = _config_field(cfg)
    for r in rows:
        w.writerow(["" if v is None else v for v in r] + [cfg["seed"], c])
    return buf.getvalue()


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


PLOT_COLUMNS = {
    "entropy": ["eps", "n", "log_count"],
    "chains": ["pair_index", "min_chain_length"],
    "sense": ["n", "member_flag"],
    "construct": ["level", "s_k", "verified"],
    "shadow": ["x", "y"],
}


def emit_plot_data(experiment: str, rows: list, cfg: dict) -> str:
    """Columnar plot data; an empty series is an incomplete result."""
    if not rows:
        raise Incomplete("empty plot series")
    return to_csv(PLOT_COLUMNS[experiment], rows, cfg)


class Artifacts:
    def __init__(self, cfg: dict):
        self.cfg = cfg
        self.dir = Path(cfg["out"])
        self.written = []

    def json(self, payload: dict, complete: bool = True):
        doc = {"config": embedded_config(self.cfg), "seed": self.cfg["seed"], "complete": complete, "result": payload}
        self._write("json", dumps(doc))

    def csv(self, header, rows):
        self._write("csv", to_csv(header, rows, self.cfg))

    def plot(self, rows):
        self._write("plot.csv", emit_plot_data(self.cfg["experiment"], rows, self.cfg))

    def _write(self, ext, text):
        p = self.dir / f"{self.cfg['experiment']}.{ext}"
        write_atomic(p, text)
        self.written.append(str(p))


# ---------------------------------------------------------------------------
# experiments; each returns (summary, complete)
# ---------------------------------------------------------------------------


def run_entropy(cfg: dict, art: Artifacts):
    _normalise(cfg, {"eps": "list", "angle": "one", "angles": "list", "value": "one"})
    eps = _fractions(cfg, "eps")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ConfigError("eps must be strictly decreasing")
    n_max = _int(cfg, "n_max", 4, 64)
    rho = _int(cfg, "rho", 2, 64)
    budget = None if cfg["budget"] is None else _int(cfg, "budget", 1)
    sysh = build_system(cfg)
    series = entropy_estimate(sysh, eps, n_max, budget, spanning=bool(cfg["spanning"]), rho=rho)
    rows = [[series.kind, r.n, str(r.eps), r.sep, r.span, f"{r.slope:.12g}", r.grid, r.resolved]
            for r in series.rows]
    art.csv(["kind", "n", "eps", "sep", "span", "slope", "grid", "resolved"], rows)
    summary = series.summary()
    summary["sandwich_violations"] = [[n, str(e), why] for n, e, why in series.sandwich_violations()]
    art.json(summary, series.complete)
    art.plot([[str(r.eps), r.n, f"{math.log(r.sep):.12g}"] for r in series.rows])
    return summary, series.complete


def run_construct(cfg: dict, art: Artifacts):
    levels = _int(cfg, "levels", 1, 8)
    con = build_transitive_zero_entropy(levels)
    rows = con.verify() if cfg["verify"] else [(k, s, None) for k, s in enumerate(con.boundaries, 1)]
    summary = {
        "levels": levels,
        "s": list(con.boundaries),
        "block_lengths": list(con.block_lengths),
        "verification": [{"level": k, "s_k": s, "onto_unit_interval": ok} for k, s, ok in rows],
        "nds": nds_to_dict(con.nds),
    }
    ok = all(r[2] is not False for r in rows)
    art.json(summary, ok)
    art.plot([[k, s, "" if v is None else v] for k, s, v in rows])
    return {k: v for k, v in summary.items() if k != "nds"}, ok


def run_chains(cfg: dict, art: Artifacts):
    _normalise(cfg, {"eps": "one", "grid_step": "one", "angle": "one", "angles": "list", "value": "one"})
    eps, step = _fraction(cfg, "eps"), _fraction(cfg, "grid_step")
    if step > 1 or (1 / step).denominator != 1:
        raise ConfigError("grid_step must be 1/N for a positive integer N")
    horizon = _int(cfg, "horizon", 1, 64)
    order = _int(cfg, "order", 2, 16)
    sysh = build_system(cfg, ("base",))
    N = int(1 / step)
    grid = [Fraction(i, N) for i in range(N + (0 if sysh.space == "circle" else 1))]
    rep = check_chain_property(sysh, cfg["property"], eps, grid, horizon, order=order,
                               exhaustive=bool(cfg["exhaustive"]))
    summary = rep.to_dict()
    done = rep.verdict != "inconclusive"
    art.json(summary, done)
    art.plot([[i, v] for i, v in enumerate(rep.min_lengths)])
    return summary, done


def run_shadow(cfg: dict, art: Artifacts):
    _normalise(cfg, {"orbit": "list", "eps": "one", "delta": "one", "deltas": "list", "u_center": "one",
                     "v_center": "one", "radius": "one", "angle": "one", "angles": "list", "value": "one"})
    sysh = build_system(cfg, ("base",))
    if sysh.space == "circle":
        raise ConfigError("shadowing is decided for interval systems only")
    eps = _fraction(cfg, "eps")
    mode = cfg["mode"]
    if mode in ("finite", "h"):
        orbit = _fractions(cfg, "orbit", positive=False)
        if not all(0 <= x <= 1 for x in orbit):
            raise ConfigError("orbit points must lie in [0, 1]")
        dec = (decide_finite_shadowing if mode == "finite" else decide_h_shadowing)(sysh, orbit, eps)
        summary = dec.to_dict()
        plot = [[str(a), str(b)] for a, b in dec.feasible] or [["", ""]]
        done = True
    elif mode == "modulus":
        est = estimate_shadowing_modulus(sysh, eps, _int(cfg, "trials", 1), _int(cfg, "length", 1),
                                         _fractions(cfg, "deltas"), seed=cfg["seed"])
        summary = est.to_dict()
        summary["rows"] = [[str(d), f] for d, f in est.rows]
        plot = [[str(d), f] for d, f in est.rows]
        done = est.delta > 0
    else:
        tr = mixing_from_shadowing(sysh, eps, _fraction(cfg, "delta"), _fraction(cfg, "u_center", False),
                                   _fraction(cfg, "v_center", False), _fraction(cfg, "radius"),
                                   _int(cfg, "horizon", 1, 64))
        summary = tr.to_dict()
        plot = [[r[0], int(r[2] and r[4] and r[5])] for r in tr.rows]
        done = tr.verdict != "inconclusive"
    art.json(summary, done)
    art.plot(plot)
    return summary, done


# one eps and a finite horizon cannot certify sensitivity, only support it
EVIDENCE = "evidence at schedule"


def run_sense(cfg: dict, art: Artifacts):
    _normalise(cfg, {"points": "list", "eps": "one", "delta": "one", "angle": "one", "angles": "list",
                     "value": "one"})
    eps, delta = _fraction(cfg, "eps"), _fraction(cfg, "delta")
    horizon = _int(cfg, "horizon", 1, 4096)
    samples = _int(cfg, "samples", 1)
    fam = FamilyPredicate(cfg["family"], _int(cfg, "family_param", 0))
    if cfg["mode"] == "containments":
        if not cfg["compact"] or not cfg["fuzzy"]:
            raise ConfigError("containments need --compact and --fuzzy fixtures")
        nds = build_nds(cfg)
        rep = induced_containments(nds, _fixture(cfg["compact"], "compact"), _fixture(cfg["fuzzy"], "fuzzy"),
                                   eps, delta, horizon, samples)
        summary = {**rep.to_dict(), "status": EVIDENCE}
        ts = rep.fuzzy_u
        art.json(summary, True)
    else:
        kind = cfg["kind"]
        sysh = build_system(cfg, ("base", "hyper", "fuzzy"))
        if kind == "base":
            pts = _fractions(cfg, "points", positive=False)
        elif kind == "hyper":
            pts = [_fixture(cfg["compact"], "compact")] if cfg["compact"] else None
        else:
            pts = [_fixture(cfg["fuzzy"], "fuzzy")] if cfg["fuzzy"] else None
        if pts is None:
            raise ConfigError(f"kind {kind} needs a --{'compact' if kind == 'hyper' else 'fuzzy'} fixture")
        extra = _int(cfg, "random_extra", 0)
        if extra and kind != "base":
            raise ConfigError("random_extra applies to base systems only")
        if extra:
            sets = [sensitivity_times(sysh, p, eps, delta, horizon, samples, random_extra=extra, seed=cfg["seed"])
                    for p in pts]
            ts = sets[0]
            for s in sets[1:]:
                ts = ts & s
            member = family_member(fam, ts)
        else:
            member, ts = check_multi_F_sensitive(sysh, pts, eps, delta, fam, horizon, samples)
        summary = {"family": str(fam), "member": member, "times": ts.to_dict(), "status": EVIDENCE}
        art.json(summary, True)
    members = set(ts.members)
    art.plot([[n, int(n in members)] for n in range(1, horizon + 1)])
    return summary, True


def _fixture(path, kind):
    try:
        return load(path, kind)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from None


def run_metrics(cfg: dict, art: Artifacts):
    chosen = [k for k in ("hausdorff", "d_infty", "endograph", "arc") if cfg.get(k)]
    if len(chosen) != 1:
        raise ConfigError("give exactly one of --hausdorff, --d-infty, --endograph, --arc")
    which = chosen[0]
    a, b = cfg[which]
    if which == "hausdorff":
        d = hausdorff(_fixture(a, "compact"), _fixture(b, "compact"))
        extra = {}
    elif which == "arc":
        d = arc_hausdorff(_fixture(a, "arc"), _fixture(b, "arc"))
        extra = {}
    elif which == "d_infty":
        d = d_infty(_fixture(a, "fuzzy"), _fixture(b, "fuzzy"))
        extra = {}
    else:
        res = _int(cfg, "resolution", 1)
        d = d_endograph(_fixture(a, "fuzzy"), _fixture(b, "fuzzy"), res)
        extra = {"resolution": res}
    summary = {"metric": which, "distance": str(d), "distance_float": float(d), **extra}
    art.json(summary, True)
    return summary, True


RUNNERS = {"entropy": run_entropy, "construct": run_construct, "chains": run_chains, "shadow": run_shadow,
           "sense": run_sense, "metrics": run_metrics}


def run(cfg: dict, stdout=None) -> int:
    stdout = stdout or sys.stdout
    art = Artifacts(cfg)
    try:
        summary, complete = RUNNERS[cfg["experiment"]](cfg, art)
    except Incomplete as e:
        print(f"ndstk: incomplete: {e}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except (ConfigError, SchemaError, LatticeError) as e:
        print(f"ndstk: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as e:
        # parameter checks inside the library run before any heavy computation
        print(f"ndstk: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    stdout.write(dumps({"experiment": cfg["experiment"], "complete": complete, "artifacts": art.written,
                        "summary": summary}))
    return EXIT_OK if complete else EXIT_INCOMPLETE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    try:
        cfg = resolve_config(args)
    except ConfigError as e:
        print(f"ndstk: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
