"""Command-line front end: construct, verify, hadamard, search.

Exit codes: 0 success/verified, 1 verification failure, 2 usage or I/O
error.  Given the same inputs and seed, stdout is byte-identical across
runs; timing goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from . import constructions, designs, hadamard, search
from .constructions import PreconditionError
from .field import FieldCtx, factorize, load_poly_table
from .galois import RingCtx
from .hadamard import AssemblyError

POLY_TABLE_ENV = "DESIGNFORGE_POLY_TABLE"


@dataclass
class RunConfig:
    poly_table_path: Optional[str] = None
    fmt: str = "json"
    seed: int = 0
    budget: Optional[int] = None
    out: Optional[str] = None

    def poly_table(self) -> Optional[Dict[Tuple[int, int], tuple]]:
        path = self.poly_table_path or os.environ.get(POLY_TABLE_ENV)
        if path is None:
            return None
        if not os.path.exists(path):
            raise FileNotFoundError(f"polynomial table {path} does not exist")
        return load_poly_table(path)


def _dump(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _emit(text: str, config: RunConfig) -> None:
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _field_for(q: int, config: RunConfig) -> FieldCtx:
    factors = factorize(q)
    if len(factors) != 1:
        raise PreconditionError(f"q={q} is not a prime power")
    (p, r), = factors.items()
    return FieldCtx(p, r, poly_table=config.poly_table())


def _family_text(family: designs.DifferenceFamily) -> str:
    report = designs.verify(family)
    lines = [report.summary()]
    if family.provenance:
        lines.insert(0, _dump(family.provenance))
    for blk in family.canonical_blocks():
        lines.append(" ".join(",".join(map(str, e)) for e in blk))
    return "\n".join(lines)


def _emit_family(family: designs.DifferenceFamily, config: RunConfig) -> int:
    report = designs.verify(family)
    if not report.ok:
        print(f"verification failed: {report.summary()}", file=sys.stderr)
        return 1
    if config.fmt == "json":
        _emit(_dump(family.to_json()), config)
    else:
        _emit(_family_text(family), config)
    return 0


def _cmd_construct(args: argparse.Namespace, config: RunConfig) -> int:
    kind = args.kind
    if kind in ("szekeres", "prop22", "prop23"):
        if args.q is None:
            raise PreconditionError(f"{kind} needs --q")
        ctx = _field_for(args.q, config)
        if kind == "szekeres":
            family = constructions.szekeres_family(ctx).family
        else:
            e = args.e if args.e is not None else 2
            family = constructions.cyclotomic_family(
                ctx, e, with_zero=(kind == "prop23")
            ).family
    elif kind in ("gr4-ddf", "gr4-union", "prop34"):
        if args.n is None:
            raise PreconditionError(f"{kind} needs --n")
        ring = RingCtx(args.n)
        u = ring.residue.g_pow(args.u) if args.u is not None else None
        if kind == "prop34":
            family = constructions.teichmuller_difference_set(ring, u).family
        else:
            y = None
            if args.y is not None:
                if not 0 <= args.y < len(ring.teichmuller):
                    raise PreconditionError(
                        f"--y {args.y} out of range for the Teichmuller list"
                    )
            if args.y is not None:
                y = ring.add(
                    ring.one, ring.mul(ring.two, ring.teichmuller[args.y])
                )
            family = constructions.galois_ring_ddf(
                ring, u=u, y=y, include_ideal=(kind == "gr4-union")
            ).family
    else:
        raise PreconditionError(f"unknown construction kind {kind!r}")
    return _emit_family(family, config)


def _cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    with open(args.family, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    family = designs.DifferenceFamily.from_json(data)
    report = designs.verify(family)
    print(report.summary())
    return 0 if report.ok else 1


def _cmd_hadamard(args: argparse.Namespace, config: RunConfig) -> int:
    if args.subkind == "sylvester":
        if args.k is None:
            raise PreconditionError("sylvester needs --k")
        matrix = hadamard.sylvester(args.k)
    elif args.subkind == "skew":
        if args.q is None:
            raise PreconditionError("skew needs --q")
        ctx = _field_for(args.q, config)
        family = constructions.szekeres_family(ctx).family
        matrix = hadamard.skew_from_df(family).matrix
    elif args.subkind == "symmetric":
        if args.n is not None:
            ring = RingCtx(args.n)
            u = ring.residue.g_pow(args.u) if args.u is not None else None
            family = constructions.galois_ring_ddf(ring, u=u).family
        elif args.family is not None:
            with open(args.family, "r", encoding="utf-8") as fh:
                family = designs.DifferenceFamily.from_json(json.load(fh))
        else:
            raise PreconditionError("symmetric needs --n or --family")
        matrix = hadamard.symmetric_from_ddf(family).matrix
    else:
        raise PreconditionError(f"unknown hadamard subkind {args.subkind!r}")
    if not hadamard.is_hadamard(matrix):
        print("assembled matrix failed re-verification", file=sys.stderr)
        return 1
    if config.fmt == "json":
        _emit(_dump(matrix.to_json()), config)
    else:
        _emit(matrix.to_text(), config)
    return 0


def _cmd_search(args: argparse.Namespace, config: RunConfig) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = search.SearchSpec.from_json(json.load(fh))
    if args.seed is not None:
        spec.seed = args.seed
    if config.budget is not None:
        spec.budget.max_nodes = config.budget
    certs = search.search_ddf(spec)
    reduced = search.dedupe(certs)
    lines = []
    for cert in certs:
        payload = cert.to_json()
        payload.pop("elapsed", None)  # keep stdout reproducible
        lines.append(_dump(payload))
    lines.append(
        _dump(
            {
                "summary": {
                    "certificates": len(certs),
                    "orbits": len(reduced),
                    "nodes": max((c.nodes for c in certs), default=None),
                    "mode": spec.mode,
                    "seed": spec.seed,
                }
            }
        )
    )
    _emit("\n".join(lines), config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="designforge",
        description=(
            "Construct and verify difference families over finite fields and "
            "GR(4,n), and the Hadamard matrices built from them."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write output to a file instead of stdout")
    common.add_argument(
        "--poly-table",
        help=f"path to a polynomial table (overrides ${POLY_TABLE_ENV})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_con = sub.add_parser("construct", help="build a named family", parents=[common])
    p_con.add_argument(
        "kind",
        choices=("szekeres", "prop22", "prop23", "gr4-ddf", "gr4-union", "prop34"),
    )
    p_con.add_argument("--q", type=int, help="field size (prime power)")
    p_con.add_argument("--e", type=int, help="subgroup index (2, 4 or 8)")
    p_con.add_argument("--n", type=int, help="Galois ring degree")
    p_con.add_argument("--u", type=int, help="exponent of the trace-zero parameter")
    p_con.add_argument("--y", type=int, help="Teichmuller index of the second representative")

    p_ver = sub.add_parser("verify", help="verify a family JSON file", parents=[common])
    p_ver.add_argument("family")

    p_had = sub.add_parser("hadamard", help="build a verified Hadamard matrix", parents=[common])
    p_had.add_argument("subkind", choices=("sylvester", "skew", "symmetric"))
    p_had.add_argument("--k", type=int, help="sylvester: order is 2^k")
    p_had.add_argument("--q", type=int, help="skew: field size")
    p_had.add_argument("--n", type=int, help="symmetric: Galois ring degree")
    p_had.add_argument("--u", type=int, help="symmetric: trace-zero exponent")
    p_had.add_argument("--family", help="symmetric: family JSON file")

    p_sea = sub.add_parser("search", help="search for qualifying families", parents=[common])
    p_sea.add_argument("spec", help="search spec JSON file")
    p_sea.add_argument("--seed", type=int, help="override the spec seed")
    p_sea.add_argument("--budget", type=int, help="node budget override")

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        poly_table_path=args.poly_table,
        fmt=args.format,
        out=args.out,
        budget=getattr(args, "budget", None),
    )
    try:
        if args.command == "construct":
            return _cmd_construct(args, config)
        if args.command == "verify":
            return _cmd_verify(args, config)
        if args.command == "hadamard":
            return _cmd_hadamard(args, config)
        if args.command == "search":
            return _cmd_search(args, config)
        parser.error(f"unknown command {args.command!r}")
    except (PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssemblyError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
