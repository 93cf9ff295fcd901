"""Command-line entry point: ``twodom <command> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, TextIO

from . import patterns as pt
from .construct import Certificate, random_member
from .errors import SelfCheckFailed, TwoDomError
from .recognize import recognize, verify_certificate
from .solvers import BRUTE_FORCE_CAP, alpha2, brute_both, brute_gamma2, gamma2
from .tree import Tree, decode_graph6, encode_graph6, enumerate_free_trees

COMMANDS = ("compute", "recognize", "verify-cert", "generate", "sweep", "patterns-selfcheck")
SWEEP_CAP = 18

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    input_path: str | None = None
    max_n: int = 10
    seed: int = 0
    steps: int = 5
    count: int = 1
    paranoid: bool = False
    o4_includes_t14: bool = True
    fmt: str = "tsv"
    jobs: int = 1
    brute: bool = False
    cert_path: str | None = None
    cert_out: str | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command}")
        if self.command == "sweep" and not 1 <= self.max_n <= SWEEP_CAP:
            raise InputError(f"--max-n must be in 1..{SWEEP_CAP}")
        if self.fmt not in ("tsv", "json"):
            raise InputError("--format must be tsv or json")
        if self.jobs < 1:
            raise InputError("--jobs must be positive")


def _read_trees(cfg: RunConfig) -> list[tuple[str, Tree]]:
    lines: list[str] = list(cfg.inputs)
    if cfg.input_path:
        try:
            with open(cfg.input_path) as fh:
                lines += fh.read().splitlines()
        except OSError as exc:
            raise InputError(f"cannot read {cfg.input_path}: {exc}") from exc
    out = []
    for raw in lines:
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        try:
            out.append((s, decode_graph6(s)))
        except TwoDomError as exc:
            raise InputError(f"{s!r}: {exc}") from exc
    if not out:
        raise InputError("no input trees (give graph6 strings or --input)")
    return out


def _bool(x: bool) -> str:
    return "true" if x else "false"


def _emit(out: TextIO, cfg: RunConfig, record: dict, columns: Iterable[str]) -> None:
    if cfg.fmt == "json":
        out.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        cells = [_bool(record[c]) if isinstance(record[c], bool) else str(record[c]) for c in columns]
        out.write("\t".join(cells) + "\n")


def cmd_compute(cfg: RunConfig, out: TextIO) -> int:
    for g6, t in _read_trees(cfg):
        if cfg.brute:
            if t.n > BRUTE_FORCE_CAP:
                raise InputError(f"{g6}: brute force is capped at order {BRUTE_FORCE_CAP}")
            g, a = brute_both(t)
        else:
            g, a = gamma2(t), alpha2(t)
        rec = {"graph6": g6, "gamma2": g, "alpha2": a, "equal": g == a}
        _emit(out, cfg, rec, ("graph6", "gamma2", "alpha2", "equal"))
    return EXIT_OK


def cmd_recognize(cfg: RunConfig, out: TextIO) -> int:
    certs = []
    status = EXIT_OK
    for g6, t in _read_trees(cfg):
        v = recognize(t, cfg.o4_includes_t14, strict=False, paranoid=cfg.paranoid)
        if v.accepted != (v.gamma2 == v.alpha2):
            status = EXIT_MISMATCH
        rec = {"graph6": g6, "gamma2": v.gamma2, "alpha2": v.alpha2, "accepted": v.accepted}
        if cfg.fmt == "json" and v.certificate is not None:
            rec["certificate"] = v.certificate.to_dict()
        _emit(out, cfg, rec, ("graph6", "gamma2", "alpha2", "accepted"))
        if v.certificate is not None:
            certs.append(v.certificate.to_json())
    if cfg.cert_out:
        with open(cfg.cert_out, "w") as fh:
            fh.writelines(c + "\n" for c in certs)
    return status


def cmd_verify(cfg: RunConfig, out: TextIO) -> int:
    if not cfg.cert_path:
        raise InputError("verify-cert needs --cert")
    try:
        with open(cfg.cert_path) as fh:
            cert = Certificate.from_json(fh.read())
    except (OSError, ValueError, KeyError, TypeError, TwoDomError) as exc:
        raise InputError(f"cannot load certificate: {exc}") from exc
    for g6, t in _read_trees(cfg):
        chk = verify_certificate(cert, t, cfg.o4_includes_t14)
        rec = {
            "graph6": g6,
            "ok": chk.ok,
            "reason": chk.reason or "-",
            "step": "-" if chk.step is None else chk.step,
        }
        _emit(out, cfg, rec, ("graph6", "ok", "reason", "step"))
    return EXIT_OK


def cmd_generate(cfg: RunConfig, out: TextIO) -> int:
    for i in range(cfg.count):
        t, cert = random_member(cfg.seed + i, cfg.steps, o4_includes_t14=cfg.o4_includes_t14)
        rec = {"graph6": encode_graph6(t), "certificate": cert.to_dict()}
        if cfg.fmt == "json":
            out.write(json.dumps(rec, sort_keys=True) + "\n")
        else:
            out.write(f"{rec['graph6']}\t{cert.to_json()}\n")
    return EXIT_OK


def _sweep_part(args: tuple[int, int, int, bool, bool]) -> tuple[int, int, list[tuple[str, int, int, bool]]]:
    n, part, parts, o4, paranoid = args
    trees = members = 0
    bad = []
    for i, t in enumerate(enumerate_free_trees(n)):
        if i % parts != part:
            continue
        v = recognize(t, o4, strict=False, paranoid=paranoid)
        trees += 1
        members += v.accepted
        if v.accepted != (v.gamma2 == v.alpha2):
            bad.append((encode_graph6(t), v.gamma2, v.alpha2, v.accepted))
    return trees, members, bad


def cmd_sweep(cfg: RunConfig, out: TextIO) -> int:
    tasks = [
        (n, k, cfg.jobs, cfg.o4_includes_t14, cfg.paranoid)
        for n in range(1, cfg.max_n + 1)
        for k in range(cfg.jobs)
    ]
    if cfg.jobs == 1:
        results = [_sweep_part(a) for a in tasks]
    else:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(_sweep_part, tasks))
    status = EXIT_OK
    for n in range(1, cfg.max_n + 1):
        chunk = results[(n - 1) * cfg.jobs: n * cfg.jobs]
        trees = sum(r[0] for r in chunk)
        members = sum(r[1] for r in chunk)
        bad = [b for r in chunk for b in r[2]]
        if bad:
            status = EXIT_MISMATCH
        rec = {"n": n, "trees": trees, "members": members, "equivalence": not bad}
        _emit(out, cfg, rec, ("n", "trees", "members", "equivalence"))
        for g6, g, a, acc in bad:
            out.write(f"mismatch\t{g6}\t{g}\t{a}\t{_bool(acc)}\n")
    return status


def cmd_selfcheck(cfg: RunConfig, out: TextIO) -> int:
    try:
        pats = pt.load_registry()
    except SelfCheckFailed as exc:
        out.write(f"FAIL\t{exc.pattern_id}\t{exc.invariant}\n")
        return EXIT_MISMATCH
    cols = ("id", "order", "white", "roles", "squares", "gamma2", "diamonds", "alpha2", "status")
    if cfg.fmt == "tsv":
        out.write("\t".join(cols) + "\n")
    gaps = {pid: (d, a) for pid, d, a in pt.diamond_discrepancies(pats)}
    for p in pats:
        a = gaps[p.id][1] if p.id in gaps else len(p.diamonds)
        rec = {
            "id": p.id,
            "order": p.order,
            "white": p.white,
            "roles": ",".join(f"{k}:{v}" for k, v in sorted(p.roles.items())),
            "squares": len(p.squares),
            "gamma2": brute_gamma2(p.shape),
            "diamonds": len(p.diamonds),
            "alpha2": a,
            "status": "ok",
        }
        _emit(out, cfg, rec, cols)
    for pid, (d, a) in gaps.items():
        if cfg.fmt == "json":
            out.write(json.dumps({"discrepancy": pid, "diamonds": d, "alpha2": a}) + "\n")
        else:
            out.write(f"discrepancy\t{pid}\tdiamonds={d}\talpha2={a}\n")
    return EXIT_OK


HANDLERS = {
    "compute": cmd_compute,
    "recognize": cmd_recognize,
    "verify-cert": cmd_verify,
    "generate": cmd_generate,
    "sweep": cmd_sweep,
    "patterns-selfcheck": cmd_selfcheck,
}


def run(cfg: RunConfig, out: TextIO | None = None) -> int:
    return HANDLERS[cfg.command](cfg, out or sys.stdout)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twodom", description="2-domination and 2-independence on trees")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("graph6", nargs="*", help="inline graph6 strings")
    ap.add_argument("--input", help="file with one graph6 string per line")
    ap.add_argument("--max-n", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--steps", type=int, default=5, help="operations per generated tree")
    ap.add_argument("--count", type=int, default=1, help="trees to generate")
    ap.add_argument("--paranoid", action="store_true", help="backtrack over all reductions")
    ap.add_argument("--o4-t14", choices=("on", "off"), default="on")
    ap.add_argument("--format", choices=("tsv", "json"), default="tsv")
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--brute", action="store_true", help="compute by exhaustive search")
    ap.add_argument("--cert", help="certificate JSON for verify-cert")
    ap.add_argument("--cert-out", help="write certificates of accepted trees here")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        jobs = args.jobs if args.jobs is not None else int(os.environ.get("TWODOM_JOBS", "1"))
        cfg = RunConfig(
            command=args.command,
            inputs=tuple(args.graph6),
            input_path=args.input,
            max_n=args.max_n,
            seed=args.seed,
            steps=args.steps,
            count=args.count,
            paranoid=args.paranoid,
            o4_includes_t14=args.o4_t14 == "on",
            fmt=args.format,
            jobs=jobs,
            brute=args.brute,
            cert_path=args.cert,
            cert_out=args.cert_out,
        )
        return run(cfg)
    except (InputError, ValueError) as exc:
        print(f"twodom: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
