"""Command-line front end: reproducible runs with machine-readable reports.

Every run builds one JSON payload; text output is rendered from it. Identical
invocations produce identical payloads, and the digest is computed with the
wall-time field excluded, so repeated runs can be compared byte for byte.
Exit codes: 0 pass, 1 verification or operation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .backend import active_backend, worker_count
from .coloring import (
    Coloring,
    coloring_from_fn,
    gcolor,
    mod_coloring,
    mono_check,
    ncolor_color,
    truecolor,
    verify_ncolor_property,
    verify_truecolor_invariants,
)
from .core import FiniteSemigroup, LazyFamily, PartialTruncation
from .errors import (
    BadSpec,
    CaseInapplicable,
    HindmanLabError,
    PremiseFailed,
    UnknownLemma,
)
from .families import (
    build_family,
    build_typehd,
    parse_family_spec,
    verify_hd,
    verify_lemma_she,
    verify_s2_finite,
)
from .fileio import read_coloring, write_cayley, write_coloring
from .fpsets import (
    fp,
    fphat,
    refine_fphat,
    search_fp_mod_finite,
    search_mono_subsemigroup,
    whymodfin_fp_audit,
)
from .shevrin import classify_patterns, extract_typehd, verify_thm35_direction3to1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

VERIFY_NAMES = ("ncolor", "she", "hd", "s2", "whymodfin", "truecolor-invariants", "thm35")


@dataclass
class RunConfig:
    """One fully resolved invocation; flags alone determine the outcome."""

    command: str
    flags: dict
    fmt: str = "text"


@dataclass
class Report:
    """Command echo, inputs, result payload, and verdicts with a stable digest."""

    command: str
    inputs: dict
    result: dict
    verdicts: dict | None = None
    wall_time_s: float = 0.0

    def payload(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "inputs_digest": _digest(self.inputs),
            "result": self.result,
            "verdicts": self.verdicts,
        }

    def to_dict(self) -> dict:
        body = self.payload()
        body["digest"] = _digest(body)
        # environment facts sit outside the digested payload, like wall time
        body["backend"] = active_backend()
        body["wall_time_s"] = round(self.wall_time_s, 6)
        return body

    def render_text(self) -> str:
        body = self.to_dict()
        lines = [f"command: {self.command}"]
        for key, value in sorted(self.inputs.items()):
            lines.append(f"  {key}: {value}")
        lines.append("result:")
        lines.extend(_render_value(self.result, indent=2))
        if self.verdicts is not None:
            lines.append("verdicts:")
            for name, ok in sorted(self.verdicts.items()):
                lines.append(f"  {'PASS' if ok else 'FAIL'} {name}")
        lines.append(f"digest: {body['digest']}")
        lines.append(f"wall_time_s: {body['wall_time_s']}")
        return "\n".join(lines)


def _digest(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _render_value(value, indent: int) -> list[str]:
    pad = " " * indent
    lines: list[str] = []
    if isinstance(value, dict):
        for key in value:
            sub = value[key]
            if isinstance(sub, (dict, list)) and sub and not _is_short(sub):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_value(sub, indent + 2))
            else:
                lines.append(f"{pad}{key}: {_compact(sub)}")
    elif isinstance(value, list):
        for item in value:
            lines.append(f"{pad}- {_compact(item)}")
    else:
        lines.append(f"{pad}{_compact(value)}")
    return lines


def _is_short(value) -> bool:
    return len(json.dumps(value)) <= 60


def _compact(value) -> str:
    return json.dumps(value) if isinstance(value, (dict, list)) else str(value)


def _parse_ids(text: str) -> list[int]:
    parts = text.replace(",", " ").split()
    if not parts:
        raise BadSpec("expected a nonempty id list")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise BadSpec(f"ids must be integers, got {text!r}")


def _finite_family(spec_text: str) -> FiniteSemigroup:
    built = build_family(spec_text)
    if isinstance(built, LazyFamily):
        raise BadSpec(
            f"{spec_text!r} is a lazy family; pass a truncating spec such as natmax:20"
        )
    if isinstance(built, PartialTruncation):
        raise BadSpec(f"{spec_text!r} does not close at this size")
    return built


def _outside_s2(s: FiniteSemigroup) -> list[int]:
    rows = s.rows
    s2 = {rows[a][b] for a in range(s.n) for b in range(s.n)}
    return [x for x in range(s.n) if x not in s2]


def resolve_coloring(text: str, s: FiniteSemigroup, family_text: str | None = None) -> Coloring:
    """Build a coloring from `builtin:<name>[:params]` or load a coloring file."""
    if not text.startswith("builtin:"):
        return read_coloring(text)
    parts = text.split(":")
    name = parts[1] if len(parts) > 1 else ""
    params = parts[2:]
    if name == "ncolor":
        try:
            values = [int(lbl) for lbl in s.labels]
        except ValueError:
            raise BadSpec("builtin:ncolor needs numeric element labels")
        return coloring_from_fn(range(s.n), lambda x: ncolor_color(values[x]), 2)
    if name == "mod":
        if params:
            return mod_coloring(s, int(params[0]))
        # bare builtin:mod borrows the modulus from a residue family spec
        if family_text is not None:
            spec = parse_family_spec(family_text)
            if spec.kind == "whymodfin":
                return mod_coloring(s, spec.k)
        raise BadSpec("builtin:mod needs a modulus, e.g. builtin:mod:3")
    if name == "truecolor":
        threshold = int(params[0]) if params else 5
        return truecolor(s, threshold)
    if name == "gcolor":
        return gcolor(s)
    raise BadSpec(f"unknown builtin coloring {name!r}")


def _require_total(c: Coloring, s: FiniteSemigroup) -> None:
    for x in range(s.n):
        if not c.colored(x):
            raise BadSpec(f"coloring misses element {x}; a total coloring is required")


# ---------------------------------------------------------------------------
# command handlers; each returns (exit_code, Report)


def cmd_family(args) -> tuple[int, Report]:
    inputs = {"spec": args.spec, "bound": args.bound}
    built = build_family(args.spec)
    if isinstance(built, LazyFamily):
        if args.export:
            raise BadSpec(
                "cannot export a lazy family; its truncation is not closed. "
                "Use a truncating spec such as natmax:20."
            )
        result = {
            "kind": built.name,
            "lazy": True,
            "first_elements": built.elements(10),
            "note": "lazy family; truncate to inspect a finite table",
        }
        return EXIT_OK, Report("family", inputs, result)
    s = built
    patterns = classify_patterns(s, bound=args.bound)
    result = {
        "n": s.n,
        "labels_preview": list(s.labels[:12]),
        "associative": True,
        "patterns": patterns.as_dict(),
    }
    if args.export:
        write_cayley(s, args.export)
        result["exported"] = args.export
    return EXIT_OK, Report("family", inputs, result)


def cmd_color(args) -> tuple[int, Report]:
    inputs = {"family": args.family, "coloring": args.coloring}
    s = _finite_family(args.family)
    c = resolve_coloring(args.coloring, s, args.family)
    sizes = {str(col): len(members) for col, members in c.classes().items()}
    result = {
        "palette": c.palette_size,
        "domain_size": len(c),
        "total": len(c) == s.n,
        "class_sizes": sizes,
    }
    if args.out:
        write_coloring(c, args.out)
        result["written"] = args.out
    return EXIT_OK, Report("color", inputs, result)


def cmd_fp(args) -> tuple[int, Report]:
    inputs = {
        "family": args.family,
        "seq": args.seq,
        "hat": args.hat,
        "coloring": args.coloring,
    }
    built = build_family(args.family)
    if isinstance(built, PartialTruncation):
        raise BadSpec(f"{args.family!r} does not close at this size")
    seq = _parse_ids(args.seq)
    fam = fphat(built, seq) if args.hat else fp(built, seq)
    words = [{"word": list(w), "value": v} for w, v in fam.products.items()]
    result = {
        "seq": list(fam.seq),
        "hat": fam.hat,
        "word_count": fam.word_count,
        "value_set": sorted(fam.value_set),
        "words": words,
    }
    if args.coloring:
        if not isinstance(built, FiniteSemigroup):
            raise BadSpec("colorings apply to finite families only")
        c = resolve_coloring(args.coloring, built, args.family)
        _require_total(c, built)
        for entry in words:
            entry["color"] = c.color(entry["value"])
        verdict = mono_check(fam.value_set, c)
        result["majority"] = verdict.majority_color
        result["exceptions"] = sorted(verdict.exceptions)
    return EXIT_OK, Report("fp", inputs, result)


def cmd_search(args) -> tuple[int, Report]:
    s = _finite_family(args.family)
    c = resolve_coloring(args.coloring, s, args.family)
    if args.mode == "fp":
        inputs = {
            "mode": "fp",
            "family": args.family,
            "coloring": args.coloring,
            "n": args.n,
            "budget": args.budget,
        }
        hit = search_fp_mod_finite(s, c, args.n, args.budget)
        if hit is None:
            result = {"found": False}
        else:
            result = {
                "found": True,
                "seq": list(hit.seq),
                "majority": hit.majority_color,
                "exceptions": sorted(hit.exceptions),
                "value_set": sorted(hit.value_set),
            }
        return EXIT_OK, Report("search", inputs, result)
    if args.mode == "mono":
        inputs = {
            "mode": "mono",
            "family": args.family,
            "coloring": args.coloring,
            "budget": args.budget,
            "max_gens": args.max_gens,
        }
        found = search_mono_subsemigroup(s, c, args.budget, args.max_gens)
        if found is None:
            result = {"found": False}
        else:
            result = {
                "found": True,
                "generators": list(found.generators),
                "elements": list(found.elements),
                "majority": found.verdict.majority_color,
                "exceptions": sorted(found.verdict.exceptions),
            }
        return EXIT_OK, Report("search", inputs, result)
    # refine
    inputs = {
        "mode": "refine",
        "family": args.family,
        "coloring": args.coloring,
        "seq": args.seq,
        "trap": args.trap,
    }
    seq = _parse_ids(args.seq)
    trap = _parse_ids(args.trap) if args.trap else []
    chosen = refine_fphat(s, c, seq, trap)
    result = {"chosen": list(chosen), "dropped": [x for x in seq if x not in chosen]}
    return EXIT_OK, Report("search", inputs, result)


def cmd_extract(args) -> tuple[int, Report]:
    inputs = {"family": args.family, "seq": args.seq, "target": args.target}
    s = _finite_family(args.family)
    if args.seq == "auto":
        seq = _outside_s2(s)
        if not seq:
            raise BadSpec("no elements outside S*S; pass --seq explicitly")
    else:
        seq = _parse_ids(args.seq)
    cert = extract_typehd(s, seq, args.target)
    verdicts = {
        "hd_relations": cert.relations.all_pass,
        "structure_matches_closure": cert.structure_matches_closure,
        "idempotent_unique": cert.idempotent_unique,
        "equality_audit": cert.equality_audit["biconditional_ab"]
        and cert.equality_audit["biconditional_ba"],
    }
    result = cert.to_dict()
    if args.out:
        Path(args.out).write_text(
            json.dumps(cert.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        result["written"] = args.out
    code = EXIT_OK if cert.all_checks_pass else EXIT_FAIL
    return code, Report("extract", inputs, result, verdicts)


def cmd_classify(args) -> tuple[int, Report]:
    inputs = {"family": args.family, "bound": args.bound}
    s = _finite_family(args.family)
    report = classify_patterns(s, args.bound)
    return EXIT_OK, Report("classify", inputs, {"n": s.n, "patterns": report.as_dict()})


def cmd_verify(args) -> tuple[int, Report]:
    name = args.check
    if name == "ncolor":
        inputs = {"check": name, "N": args.N, "maxn": args.maxn}
        report = verify_ncolor_property(args.N, args.maxn)
        verdicts = {"all_blocks_hit_multiples": report.all_pass}
        result = {
            "N": args.N,
            "maxn": args.maxn,
            "failing": [
                {"n": row.n, "block": list(row.failing_block)}
                for row in report.rows
                if not row.ok
            ],
        }
    elif name == "she":
        inputs = {"check": name, "family": args.family, "gens": args.gens}
        s = _finite_family(args.family)
        if args.gens == "auto":
            gens = _outside_s2(s) or list(range(s.n))
        else:
            gens = _parse_ids(args.gens)
        try:
            report = verify_lemma_she(s, gens)
        except PremiseFailed as exc:
            result = {"premise_witness": repr(exc.witness), "message": str(exc)}
            return EXIT_FAIL, Report("verify", inputs, result, {"premise_a": False})
        verdicts = {
            "premise_a": True,
            "s3_equals_orbit_cubes": report.s3_equals_orbit_cubes.ok,
            "s3_finite": True,
            "unique_idempotent": report.unique_idempotent.ok,
            "right_collapse": report.right_collapse.ok,
        }
        result = report.as_dict()
    elif name in ("hd", "s2"):
        inputs = {"check": name, "family": args.family}
        spec = parse_family_spec(args.family)
        if spec.kind != "typehd":
            raise BadSpec(f"verify {name} needs a typehd family spec")
        model = build_typehd(spec.h, spec.d, spec.m, spec.eqpattern)
        if name == "hd":
            report = verify_hd(model)
            verdicts = report.as_dict()
            result = {"n": model.semigroup.n, "h": model.h, "d": model.d}
        else:
            n, s2_size = verify_s2_finite(model)
            verdicts = {"s2_bounded": True, "gens_outside_s2": True}
            result = {"n": n, "s2_size": s2_size}
    elif name == "whymodfin":
        inputs = {"check": name, "k": args.k, "M": args.M}
        audit = whymodfin_fp_audit(args.k, args.M)
        verdicts = {"all_colors_realized": audit.all_colors_realized}
        result = audit.as_dict()
    elif name == "truecolor-invariants":
        inputs = {"check": name, "family": args.family, "long_orbit": args.long_orbit}
        s = _finite_family(args.family)
        report = verify_truecolor_invariants(s, args.long_orbit)
        verdicts = {
            "pattern_transport": report.pattern_transport.ok,
            "suborbits_two_colored": report.suborbits_two_colored.ok,
            "inverse_pairs_differ": report.inverse_pairs_differ.ok,
        }
        result = report.as_dict()
    elif name == "thm35":
        inputs = {
            "check": name,
            "family": args.family,
            "coloring": args.coloring,
            "case": args.case,
        }
        s = _finite_family(args.family)
        c = resolve_coloring(args.coloring, s, args.family)
        _require_total(c, s)
        report = verify_thm35_direction3to1(s, c, args.case)
        verdicts = {"passed": report.passed}
        result = report.as_dict()
    else:  # pragma: no cover - argparse restricts choices
        raise UnknownLemma(f"unknown verify check {name!r}")
    code = EXIT_OK if all(verdicts.values()) else EXIT_FAIL
    return code, Report("verify", inputs, result, verdicts)


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hindman-lab",
        description="Semigroup coloring laboratory: families, colorings, product sets, extraction.",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    # accepted before or after the subcommand; SUPPRESS keeps the sub parse
    # from clobbering a value given up front
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=argparse.ArgumentParser)

    def add(name: str, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add("family", help="build a family, summarize its patterns, optionally export")
    p.add_argument("spec", help="family spec, e.g. fan:20 or typehd:3,2,5")
    p.add_argument("--export", help="write the table in cayley v1 format")
    p.add_argument("--bound", type=int, default=8, help="pattern search cap")
    p.set_defaults(handler=cmd_family)

    p = add("color", help="materialize a coloring, optionally write it")
    p.add_argument("--family", required=True)
    p.add_argument("--coloring", required=True, help="file path or builtin:<name>[:params]")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_color)

    p = add("fp", help="enumerate FP or FP-hat products of a sequence")
    p.add_argument("--family", required=True)
    p.add_argument("--seq", required=True, help="comma-separated element ids")
    p.add_argument("--hat", action="store_true", help="duplicate-free words instead of increasing")
    p.add_argument("--coloring", help="attach colors and a majority verdict")
    p.set_defaults(handler=cmd_fp)

    p = add("search", help="witness searches over colored families")
    mode = p.add_subparsers(dest="mode", required=True)
    q = mode.add_parser("fp", parents=[common], help="distinct tuple whose FP set is one color up to a budget")
    q.add_argument("--family", required=True)
    q.add_argument("--coloring", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--budget", type=int, required=True)
    q.set_defaults(handler=cmd_search, mode="fp")
    q = mode.add_parser("mono", parents=[common], help="largest almost-monochromatic subsemigroup closure")
    q.add_argument("--family", required=True)
    q.add_argument("--coloring", required=True)
    q.add_argument("--budget", type=int, required=True)
    q.add_argument("--max-gens", dest="max_gens", type=int, default=3)
    q.set_defaults(handler=cmd_search, mode="mono")
    q = mode.add_parser("refine", parents=[common], help="greedy subsequence whose FP-hat set avoids a trap set")
    q.add_argument("--family", required=True)
    q.add_argument("--coloring", required=True)
    q.add_argument("--seq", required=True)
    q.add_argument("--trap", default="", help="comma-separated ids to avoid")
    q.set_defaults(handler=cmd_search, mode="refine")

    p = add("extract", help="pair-color a sequence and extract a certified subsequence")
    p.add_argument("--family", required=True)
    p.add_argument("--seq", default="auto", help="'auto' (elements outside S*S) or ids")
    p.add_argument("--target", type=int, default=6)
    p.add_argument("--out", help="write the certificate JSON here")
    p.set_defaults(handler=cmd_extract)

    p = add("verify", help="run a named verification; exit 1 on any failure")
    check = p.add_subparsers(dest="check", required=True)
    q = check.add_parser("ncolor", parents=[common])
    q.add_argument("--N", type=int, default=10_000)
    q.add_argument("--maxn", type=int, default=50)
    q.set_defaults(handler=cmd_verify, check="ncolor")
    q = check.add_parser("she", parents=[common])
    q.add_argument("--family", required=True)
    q.add_argument("--gens", default="auto")
    q.set_defaults(handler=cmd_verify, check="she")
    q = check.add_parser("hd", parents=[common])
    q.add_argument("--family", required=True)
    q.set_defaults(handler=cmd_verify, check="hd")
    q = check.add_parser("s2", parents=[common])
    q.add_argument("--family", required=True)
    q.set_defaults(handler=cmd_verify, check="s2")
    q = check.add_parser("whymodfin", parents=[common])
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--M", type=int, required=True)
    q.set_defaults(handler=cmd_verify, check="whymodfin")
    q = check.add_parser("truecolor-invariants", parents=[common])
    q.add_argument("--family", required=True)
    q.add_argument("--long-orbit", dest="long_orbit", type=int, default=5)
    q.set_defaults(handler=cmd_verify, check="truecolor-invariants")
    q = check.add_parser("thm35", parents=[common])
    q.add_argument("--family", required=True)
    q.add_argument("--coloring", required=True)
    q.add_argument("--case", choices=("finsync", "z2sum"), required=True)
    q.set_defaults(handler=cmd_verify, check="thm35")

    p = add("classify", help="structural pattern report for a finite family")
    p.add_argument("--family", required=True)
    p.add_argument("--bound", type=int, default=8)
    p.set_defaults(handler=cmd_classify)

    return parser


def run_config(args: argparse.Namespace) -> RunConfig:
    flags = {
        k: v
        for k, v in vars(args).items()
        if k not in ("handler", "command", "format") and v is not None
    }
    return RunConfig(command=args.command, flags=flags, fmt=args.format)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = run_config(args)
    worker_count()  # validate the env var early so bad values fail loudly
    start = time.perf_counter()
    try:
        code, report = args.handler(args)
    except (BadSpec, UnknownLemma) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CaseInapplicable as exc:
        print(f"case inapplicable: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except HindmanLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report.wall_time_s = time.perf_counter() - start
    if config.fmt == "json":
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print(report.render_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
