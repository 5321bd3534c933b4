"""Command-line front end.

Exit status: 0 when everything passes, 1 when a check fails, 2 on bad input.
Tabular output is tab-separated and starts with a ``# format-version`` line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CheckFailure, FcpolyError, UsageError
from .polytope import FORMAT_VERSION, export_complex, f_vector, fc_polytope, perm_word

VERBS = ("normalize", "polytope", "factorize", "crossterms", "check-figures", "s7-report")


@dataclass
class RunReport:
    status: dict = field(default_factory=dict)  # check name -> bool
    artifacts: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    stdout: str = ""
    verbose: bool = False

    @property
    def ok(self):
        return all(self.status.values())

    @property
    def exit_code(self):
        return 0 if self.ok else 1


class _Stage:
    def __init__(self, report, name):
        self.report, self.name = report, name

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timings[self.name] = time.perf_counter() - self.t0


def tsv(rows, header=None):
    buf = io.StringIO()
    buf.write(f"# format-version: {FORMAT_VERSION}\n")
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    if header:
        w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(report, out_dir, name, data):
    path = Path(out_dir) / name
    if isinstance(data, str):
        data = data.encode()
    path.write_bytes(data)
    report.artifacts.append(str(path))
    return path


def _outdir(args):
    if not getattr(args, "out_dir", None):
        return None
    d = Path(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _source(text):
    from .words import parse_bidegree

    try:
        return parse_bidegree(text)
    except FcpolyError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# ---------------------------------------------------------------------------
# verbs


def cmd_normalize(args, report):
    from .words import (
        canonical_word,
        cosimp_normalize,
        delta_oracle,
        format_word,
        parse_word,
        simp_normalize,
    )

    word = parse_word(args.word, args.source)
    if args.form == "fc":
        out = canonical_word(word)
    elif args.form == "simp":
        out = simp_normalize(word)
    else:
        out = cosimp_normalize(word)
    text = format_word(out) + "\n"
    if args.verify:
        same = delta_oracle(word) == delta_oracle(out)
        report.status["oracle"] = same
        text += f"# oracle: {'pass' if same else 'FAIL'}\n"
    return text


def _polytope_tsv(c):
    rows = []
    for cell in c.cells:
        verts = ",".join(sorted(perm_word(v) for v in cell.vertices))
        part = "|".join("".join(map(str, b)) for b in cell.partition)
        rows.append((cell.dim, len(cell.vertices), part, verts))
    return tsv(rows, header=("dim", "vertices", "partition", "classes"))


def cmd_polytope(args, report):
    with _Stage(report, "build"):
        c = fc_polytope(args.N, args.n)
    if args.format == "tsv":
        data = _polytope_tsv(c).encode()
    else:
        data = export_complex(c, args.format)
    d = _outdir(args)
    if d is not None:
        _emit(report, d, f"P{args.N}_{args.n}.{args.format}", data)
        if args.plot:
            from .plotting import plot_f_vector, plot_skeleton

            report.artifacts.append(str(plot_skeleton(c, d / f"P{args.N}_{args.n}_skeleton.png")))
            if c.n:
                report.artifacts.append(str(plot_f_vector(c, d / f"P{args.N}_{args.n}_fvector.png")))
        fv = ",".join(map(str, f_vector(c, include_top=True)))
        return tsv([(args.N, args.n, len(c.classes), fv)], header=("N", "n", "vertices", "f_vector"))
    return data.decode()


def cmd_factorize(args, report):
    from .factorization import TargetMap, label_polytope
    from .words import compact, format_word, parse_word

    psi = TargetMap.from_word(parse_word(args.word, args.source))
    with _Stage(report, "label"):
        lp = label_polytope(psi)
    reps = list(lp.labels)
    idx = {r: i for i, r in enumerate(reps)}
    classes = tsv(
        [(i, len(lp.labels[r]), " = ".join(lp.labels[r].words())) for i, r in enumerate(reps)],
        header=("class", "size", "members"),
    )
    d = _outdir(args)
    if d is None:
        return classes
    _emit(report, d, "classes.tsv", classes)
    _emit(report, d, "edges.tsv", tsv([(idx[a], idx[b]) for a, b in lp.edges()], header=("a", "b")))
    allowed = sorted(lp.allowable, key=lambda m: (m.length, str(m), m.source))
    _emit(
        report, d, "allowable.tsv",
        tsv([(format_word(m.word), m.source.cosimp, m.source.simp, *m.frame) for m in allowed],
            header=("map", "src_cosimp", "src_simp", "n", "m", "k", "l")),
    )
    if psi.n:
        rows = []
        for f in lp.scheme:
            part = "|".join("".join(map(str, b)) for b in f.cell.partition)
            rows.append((part, len(f.cell.vertices), " ; ".join(format_word(r.word) for r in f.scheme)))
        _emit(report, d, "facets.tsv", tsv(rows, header=("partition", "vertices", "scheme")))
    _emit(report, d, "labeled.json", json.dumps(lp.to_json(), indent=1, sort_keys=True) + "\n")
    if args.plot:
        from .plotting import plot_skeleton

        label = lambda r: compact(lp.words[r])  # noqa: E731
        path = plot_skeleton(lp.complex, d / "skeleton.png", label=label, title=f"P({format_word(psi.word)})")
        report.artifacts.append(str(path))
    return tsv([(format_word(psi.word), len(reps), len(lp.edges()), len(lp.allowable))],
               header=("psi", "classes", "edges", "allowable"))


def _override(spec_list, text, kind):
    """Parse ``KEY:DEG=COUNT`` flags into the raw config dict."""
    try:
        key, rest = text.split(":")
        deg, count = rest.split("=")
        int(deg), int(count)
    except ValueError:
        raise UsageError(f"--{kind} expects KEY:DEGREE=COUNT, got {text!r}") from None
    spec_list.setdefault(key.strip(), {})[deg.strip()] = int(count)


def cmd_crossterms(args, report):
    from .cw_basis import cross_term_level, cw_decompose, parse_config

    raw = {"cw": {}, "cross": {}}
    if args.config:
        path = Path(args.config)
        if path.suffix.lower() == ".toml":
            from .cw_basis import tomllib

            raw = tomllib.loads(path.read_text())
        else:
            raw = json.loads(path.read_text())
        raw.setdefault("cw", {})
        raw.setdefault("cross", {})
    for text in args.cw or ():
        _override(raw["cw"], text, "cw")
    for text in args.cross or ():
        _override(raw["cross"], text, "cross")
    try:
        cw, cross = parse_config(raw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = []
    inventory = {}
    for n in range(args.max_level + 1):
        g = cw_decompose(n, cw).truncated(args.below)
        for k, names in sorted(g.names.items()):
            rows.append(("R", n, "", k, len(names), " ".join(names)))
        for r in range(args.max_level + 1):
            e = cross_term_level(n, r, cross).truncated(args.below)
            inventory[(n, r)] = e.counts
            for k, names in sorted(e.names.items()):
                rows.append(("E", n, r, k, len(names), " ".join(names)))
    out = tsv(rows, header=("object", "n", "r", "degree", "count", "generators"))
    d = _outdir(args)
    if d is not None:
        _emit(report, d, "crossterms.tsv", out)
        if args.plot:
            from .plotting import plot_inventory

            report.artifacts.append(str(plot_inventory(inventory, d / "inventory.png")))
    return out


def cmd_check_figures(args, report):
    from .golden import FIGURES, compare, figure_polytope, load_golden, write_golden

    if args.write:
        Path(args.write).mkdir(parents=True, exist_ok=True)
        for name in FIGURES:
            report.artifacts.append(str(write_golden(name, args.write)))
        return "".join(f"wrote {p}\n" for p in report.artifacts)
    lines = []
    for name in FIGURES:
        with _Stage(report, name):
            lp = figure_polytope(name)
        try:
            golden = load_golden(name, args.golden_dir)
            diffs = compare(lp, golden)
        except (OSError, ValueError, KeyError, TypeError, IndexError) as exc:
            diffs = [f"unreadable golden file: {exc}"]
        report.status[name] = not diffs
        sizes = lp.class_sizes()
        lines.append(
            f"{name}\t{'pass' if not diffs else 'FAIL'}\tclasses={len(sizes)}"
            f"\tdoubled={sum(1 for s in sizes if s == 2)}\tmax_class={max(sizes)}\tedges={len(lp.edges())}\n"
        )
        lines.extend(f"{name}\tdiff\t{x}\n" for x in diffs)
    return "# format-version: 1\n" + "".join(lines)


def cmd_s7_report(args, report):
    from .whitehead import s7_example

    with _Stage(report, "report"):
        rep = s7_example(max_level=args.max_level)
    report.status.update(rep.checks)
    out = tsv(rep.rows(), header=("section", "key", "value"))
    d = _outdir(args)
    if d is not None:
        _emit(report, d, "s7_report.tsv", out)
        if args.plot:
            from .plotting import plot_inventory, plot_skeleton
            from .words import compact

            report.artifacts.append(str(plot_inventory(rep.inventory, d / "s7_inventory.png")))
            for i, (text, lp) in enumerate(rep.candidates):
                label = lambda r, lp=lp: compact(lp.words[r])  # noqa: E731
                path = plot_skeleton(lp.complex, d / f"s7_candidate{i}.png", label=label, title=f"P({text})")
                report.artifacts.append(str(path))
    return out


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="fcpoly", description="Face-codegeneracy polyhedra and related bookkeeping.")
    p.add_argument("-v", "--verbose", action="store_true", help="stage timings and artifacts on stderr")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("normalize", help="normal form of an operator word")
    s.add_argument("word", help='letters such as "s^0 d_0 s^1 d_1" (rightmost applied first)')
    s.add_argument("--source", type=_source, required=True, help="source bidegree cosimp,simp")
    s.add_argument("--form", choices=("fc", "simp", "cosimp"), default="fc")
    s.add_argument("--verify", action="store_true", help="compare against the ordinal-map oracle")

    s = sub.add_parser("polytope", help="build P^N_n and export it")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--format", choices=("json", "dot", "off", "tsv"), default="tsv")
    s.add_argument("--out-dir")
    s.add_argument("--plot", action="store_true", help="also render PNG figures (needs --out-dir)")

    s = sub.add_parser("factorize", help="label P^{n+m}_n by the factorizations of a word")
    s.add_argument("word")
    s.add_argument("--source", type=_source, required=True)
    s.add_argument("--out-dir")
    s.add_argument("--plot", action="store_true")

    s = sub.add_parser("crossterms", help="CW and cross-term inventories")
    s.add_argument("--config", help="JSON or TOML file with 'cw' and 'cross' tables")
    s.add_argument("--cw", action="append", metavar="LEVEL:DEG=COUNT")
    s.add_argument("--cross", action="append", metavar="N,R:DEG=COUNT")
    s.add_argument("--max-level", type=int, default=3)
    s.add_argument("--below", type=int, default=10**6, help="drop degrees >= this bound")
    s.add_argument("--out-dir")
    s.add_argument("--plot", action="store_true")

    s = sub.add_parser("check-figures", help="compare the labelled figures against golden files")
    s.add_argument("--golden-dir", help="directory holding fig3.json and fig4.json")
    s.add_argument("--write", metavar="DIR", help="regenerate golden files into DIR instead of checking")

    s = sub.add_parser("s7-report", help="cross-term bookkeeping for the 7-sphere")
    s.add_argument("--max-level", type=int, default=3)
    s.add_argument("--out-dir")
    s.add_argument("--plot", action="store_true")
    return p


COMMANDS = {
    "normalize": cmd_normalize,
    "polytope": cmd_polytope,
    "factorize": cmd_factorize,
    "crossterms": cmd_crossterms,
    "check-figures": cmd_check_figures,
    "s7-report": cmd_s7_report,
}


def run(argv=None):
    """Parse ``argv``, run one verb and return its RunReport.

    Raises SystemExit(2) for argument errors, UsageError for bad input values.
    """
    args = build_parser().parse_args(argv)
    if getattr(args, "plot", False) and not getattr(args, "out_dir", None):
        raise UsageError("--plot needs --out-dir")
    report = RunReport()
    try:
        report.stdout = COMMANDS[args.verb](args, report)
    except (UsageError, CheckFailure):
        raise
    except FcpolyError as exc:
        raise UsageError(f"{type(exc).__name__}: {exc}") from None
    except (OSError, ValueError) as exc:  # unreadable config files and the like
        raise UsageError(str(exc)) from None
    report.verbose = args.verbose
    return report


def main(argv=None):
    try:
        report = run(argv)
    except UsageError as exc:
        print(f"fcpoly: error: {exc}", file=sys.stderr)
        return 2
    except CheckFailure as exc:
        print(f"fcpoly: check failed: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(report.stdout)
    if getattr(report, "verbose", False):
        for k, v in report.timings.items():
            print(f"timing\t{k}\t{v:.3f}s", file=sys.stderr)
        for a in report.artifacts:
            print(f"artifact\t{a}", file=sys.stderr)
    failed = [k for k, v in report.status.items() if not v]
    if failed:
        print("fcpoly: failed checks: " + ", ".join(failed), file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
