"""Command-line entry point.

    legsheaf invariants --front trefoil.frt
    legsheaf enumerate --braid "1 1 1" --field 3 --stratify
    legsheaf khr --braid "1 1 1" --strands 2 --qmax 6
    legsheaf verify

Exit codes: 0 success, 1 failed verification, 2 bad input, 3 resource cap hit.
JSON output is deterministic (sorted keys, fixed orderings).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import corpus
from . import exthom as E
from .diagram import (
    CYLINDER,
    FrontDiagram,
    FrontError,
    binary_potential,
    classical_invariants,
    front,
    maslov_potentials,
    parse_braid,
    rainbow_closure,
)
from .homfly import INTRO, THEOREM, homfly, lowest_a_coefficient, rutherford_sum
from .rulings import enumerate_rulings, ruling_polynomial
from .sheafmoduli import (
    ModelError,
    SearchCapExceeded,
    enumerate_cylindrical,
    enumerate_front,
    stratified_counts,
)
from .soergel import DEFAULT_QMAX, BraidTooLarge, SoergelError, bracket_series, khr_series

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3
SUBCOMMANDS = ("invariants", "rulings", "homfly", "enumerate", "ext", "khr", "verify")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    front: str | None = None
    braid: str | None = None
    strands: int | None = None
    field: int = 2
    rank: int = 1
    qmax: int = DEFAULT_QMAX
    sign: str = INTRO
    format: str = "json"
    jobs: int = 1
    stratify: bool = False
    pairs: str = "all"
    closure: str = "rainbow"
    bracket: bool = False
    criteria: tuple[int, ...] = ()

    def validate(self) -> None:
        if self.command not in SUBCOMMANDS:
            raise InputError(f"unknown subcommand {self.command!r}")
        if self.front is not None and self.braid is not None:
            raise InputError("give either --front or --braid, not both")
        if self.jobs < 1:
            raise InputError("--jobs must be at least 1")
        if self.rank < 1:
            raise InputError("--rank must be at least 1")
        if self.qmax < 0:
            raise InputError("--qmax must be nonnegative")
        if self.strands is not None and self.strands < 1:
            raise InputError("--strands must be at least 1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="legsheaf", description="Sheaf invariants of Legendrian fronts.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, inputs=True):
        if inputs:
            p.add_argument("--front", help="front file, or the name of a shipped corpus front")
            p.add_argument("--braid", help='braid word such as "1 1 -2"; fronts use its rainbow closure')
            p.add_argument("--strands", type=int)
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("invariants", help="tb, rotation numbers, writhe and Maslov potentials")
    common(p)
    p = sub.add_parser("rulings", help="graded normal rulings and the ruling polynomial")
    common(p)
    p = sub.add_parser("homfly", help="HOMFLY polynomial of a braid closure")
    common(p)
    p.add_argument("--sign", choices=(INTRO, THEOREM), default=INTRO)
    p = sub.add_parser("enumerate", help="isomorphism classes of objects over F_p")
    common(p)
    p.add_argument("--field", type=int, default=2)
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--stratify", action="store_true", help="add per-ruling counts (rainbow closures)")
    p.add_argument("--closure", choices=("rainbow", "cylindrical"), default="rainbow")
    p = sub.add_parser("ext", help="Ext dimensions between objects, by both routes")
    common(p)
    p.add_argument("--field", type=int, default=2)
    p.add_argument("--pairs", choices=("all", "diagonal"), default="all")
    p = sub.add_parser("khr", help="triply graded series of a braid closure")
    common(p)
    p.add_argument("--qmax", type=int, default=DEFAULT_QMAX)
    p.add_argument("--bracket", action="store_true", help="omit the (a q^-1/2)^(w-n) normalization")
    p = sub.add_parser("verify", help="run the acceptance suite")
    common(p, inputs=False)
    p.add_argument("--criteria", help="comma separated criterion numbers (default: all)")
    return parser


def config_from(ns: argparse.Namespace) -> RunConfig:
    crit = ()
    if getattr(ns, "criteria", None):
        try:
            crit = tuple(int(c) for c in ns.criteria.split(","))
        except ValueError as exc:
            raise InputError(f"bad --criteria {ns.criteria!r}") from exc
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    fields["criteria"] = crit
    cfg = RunConfig(**fields)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# Inputs


def load_diagram(cfg: RunConfig) -> FrontDiagram:
    if cfg.front is not None:
        p = Path(cfg.front)
        if p.exists():
            return corpus.read_front_file(p)
        if cfg.front in corpus.NAMES:
            return corpus.load(cfg.front)
        raise InputError(f"no front file {cfg.front!r}")
    if cfg.braid is not None:
        b = load_braid(cfg)
        if not b.positive:
            raise InputError("fronts from braids use the rainbow closure, which needs a positive braid")
        return front(rainbow_closure(b))
    raise InputError("give --front or --braid")


def load_braid(cfg: RunConfig):
    if cfg.braid is None:
        raise InputError("give --braid")
    try:
        return parse_braid(cfg.braid, cfg.strands)
    except ValueError as exc:
        raise InputError(f"bad braid word: {exc}") from exc


# ---------------------------------------------------------------------------
# Commands


def cmd_invariants(cfg: RunConfig) -> dict:
    d = load_diagram(cfg)
    out = {
        "word": d.word.to_text(),
        "components": len(d.components),
        "cusps": 2 * d.n_right_cusps,
        "crossings": len(d.crossings),
    }
    if d.ambient == CYLINDER:
        return out
    out.update(classical_invariants(d).to_json())
    pots = maslov_potentials(d, 0)
    out["maslov_potential"] = pots[0].to_json() if pots else None
    out["binary"] = binary_potential(d) is not None
    return out


def cmd_rulings(cfg: RunConfig) -> dict:
    d = load_diagram(cfg)
    rulings = enumerate_rulings(d)
    return {
        "word": d.word.to_text(),
        "rulings": [r.to_json() for r in rulings],
        "ruling_polynomial": ruling_polynomial(rulings).to_json(),
    }


def cmd_homfly(cfg: RunConfig) -> dict:
    b = load_braid(cfg)
    P = homfly(b)
    out = {"braid": list(b.letters), "strands": b.strands, "writhe": b.writhe, "homfly": P.to_json(),
           "sign_convention": cfg.sign}
    if b.positive:
        d = front(rainbow_closure(b))
        out["lowest_a_coefficient"] = lowest_a_coefficient(P, b.strands, b.writhe, cfg.sign).to_json()
        out["ruling_sum"] = rutherford_sum(enumerate_rulings(d), b.writhe, b.strands).to_json()
    return out


def cmd_enumerate(cfg: RunConfig) -> dict:
    if cfg.closure == "cylindrical":
        b = load_braid(cfg)
        return {"closure": "cylindrical", "field": cfg.field, **enumerate_cylindrical(b, cfg.field, cfg.rank).to_json()}
    d = load_diagram(cfg)
    e = enumerate_front(d, cfg.field, cfg.rank)
    out = {
        "word": d.word.to_text(),
        "field": cfg.field,
        "rank": cfg.rank,
        "classes": e.count,
        "orbifold": str(e.orbifold),
        "aut_histogram": {str(k): v for k, v in e.aut_histogram().items()},
    }
    if cfg.stratify:
        table = stratified_counts(e)
        out["strata"] = [{"switches": list(k), "classes": v[0], "orbifold": str(v[1])} for k, v in sorted(table.items())]
    out["objects"] = [o.to_json() for o in e.objects]
    return out


def cmd_ext(cfg: RunConfig) -> dict:
    d = load_diagram(cfg)
    e = enumerate_front(d, cfg.field)
    t = E.ext_table(e.model, e.objects, pairs=cfg.pairs, jobs=cfg.jobs)
    return {"word": d.word.to_text(), "field": cfg.field, "objects": e.count,
            "aut": [o.aut for o in e.objects], **t.to_json()}


def cmd_khr(cfg: RunConfig) -> dict:
    b = load_braid(cfg)
    if cfg.bracket:
        S = bracket_series(b, cfg.qmax)
        norm = {"a": 0, "q2": 0}
    else:
        S = khr_series(b, cfg.qmax)
        norm = {"a": b.writhe - b.strands, "q2": -(b.writhe - b.strands)}
    return {"braid": list(b.letters), "strands": b.strands,
            "series": [[a, q2, t, c] for (a, q2, t), c in S.terms],
            "normalization": norm, "truncation": cfg.qmax}


def cmd_verify(cfg: RunConfig, stream) -> tuple[dict, bool]:
    from .acceptance import CRITERIA, run

    numbers = cfg.criteria or tuple(sorted(CRITERIA))
    unknown = [k for k in numbers if k not in CRITERIA]
    if unknown:
        raise InputError(f"unknown criteria {unknown}")
    results = []
    for r in run(numbers):
        if cfg.format == "table":
            print(r.line(), file=stream, flush=True)
        results.append(r)
    ok = all(r.passed for r in results)
    return {"passed": ok, "criteria": [
        {"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail} for r in results]}, ok


COMMANDS = {
    "invariants": cmd_invariants,
    "rulings": cmd_rulings,
    "homfly": cmd_homfly,
    "enumerate": cmd_enumerate,
    "ext": cmd_ext,
    "khr": cmd_khr,
}


# ---------------------------------------------------------------------------
# Output


def render_table(data, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for k in sorted(data):
            v = data[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    elif isinstance(data, list):
        for item in data:
            if isinstance(item, (dict, list)) and not _flat(item):
                lines.append(f"{pad}-")
                lines.append(render_table(item, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(item, sort_keys=True)}")
    else:
        lines.append(f"{pad}{data}")
    return "\n".join(lines)


def _flat(v) -> bool:
    items = v.values() if isinstance(v, dict) else v
    return all(not isinstance(x, (dict, list)) for x in items)


def load_schema(command: str) -> dict:
    """JSON schema describing the output of a subcommand."""
    return json.loads((resources.files(__package__) / "schemas" / f"{command}.json").read_text())


def emit(data: dict, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(json.dumps(data, sort_keys=True, indent=2) + "\n")
    else:
        stream.write(render_table(data) + "\n")


def main(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        cfg = config_from(ns)
        if cfg.command == "verify":
            t0 = time.perf_counter()
            data, ok = cmd_verify(cfg, stream)
            if cfg.format == "json":
                emit(data, "json", stream)
            else:
                print(f"{'all criteria passed' if ok else 'FAILED'} in {time.perf_counter() - t0:.1f}s", file=stream)
            return EXIT_OK if ok else EXIT_FAILED
        emit(COMMANDS[cfg.command](cfg), cfg.format, stream)
        return EXIT_OK
    except (SearchCapExceeded, BraidTooLarge, E.ResolutionCapExceeded) as exc:
        print(f"error: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, FrontError, ModelError, SoergelError, E.ExtError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
