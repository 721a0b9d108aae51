"""Command-line entry point: ``qverma {gram,verify,singular,inverse,flip-compare}``.

Every report carries the evaluation point so a failure can be reproduced from the report
alone. Rationals are written as ``"num/den"`` strings in JSON and CSV. The exit status is 0
exactly when every check the command performed passed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import dynamical as dyn
from . import formulas as fm
from . import linalg
from . import suites
from .freealg import contents_up_to, enumerate_pbw
from .qscalars import Params, fixed_profile, format_rational, parse_rational, random_params
from .verma import highest_weight_vector, module, standard_gram

FORMATS = ("json", "csv", "text")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int
    q: Fraction
    z: tuple[Fraction, ...] | None
    seed: int | None
    depth: int
    trials: int
    format: str = "json"
    suite: str | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.z is not None and self.seed is not None:
            raise ConfigError("give either --z or --seed, not both")
        if self.z is not None and len(self.z) != self.n:
            raise ConfigError(f"--z needs {self.n} values, got {len(self.z)}")
        if self.depth < 0:
            raise ConfigError("depth must be >= 0")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")

    def params(self) -> Params:
        """The main evaluation point: explicit ``z``, a seeded generic ``z``, or the fixed profile's ``z``."""
        if self.z is not None:
            return Params(self.n, self.q, self.z)
        if self.seed is not None:
            return self._draw(random.Random(self.seed))
        return Params(self.n, self.q, fixed_profile(self.n).z)

    def trial_params(self) -> list[Params]:
        """``trials`` additional generic specializations, drawn deterministically from the seed."""
        rng = random.Random(0 if self.seed is None else self.seed + 1)
        return [self._draw(rng) for _ in range(self.trials)]

    def _draw(self, rng: random.Random, max_tries: int = 200) -> Params:
        # q stays fixed at --q; only z is random, resampled until every B_l up to depth is nonzero
        for _ in range(max_tries):
            p = Params(self.n, self.q, random_params(self.n, rng).z)
            if fm.genericity_check(p, self.depth):
                return p
        raise ConfigError("no generic z found for this q; try another --seed")


def default_depth(n: int) -> int:
    return 4 if n <= 2 else 3 if n == 3 else 2


def _rationals(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(parse_rational(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="rank of sl(n+1) (default 2)")
    common.add_argument("--q", type=_rational, default=Fraction(2), help="deformation parameter, num/den (default 2)")
    point = common.add_mutually_exclusive_group()
    point.add_argument("--z", type=_rationals, help="comma-separated z_i = q^{lambda_i}")
    point.add_argument("--seed", type=int, help="draw a generic z from this seed (q stays at --q)")
    common.add_argument("--depth", type=int, help="maximal total content (default 4 for n<=2, 3 for n=3)")
    common.add_argument("--trials", type=int, default=3, help="extra random specializations for verify (default 3)")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--suite", help="verify: suite name, comma list or 'all'")

    parser = argparse.ArgumentParser(prog="qverma", description="Exact Shapovalov computations for U_q(sl(n+1)) Verma modules.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gram", parents=[common], help="standard and dynamical Gram matrices per content")
    sub.add_parser("verify", parents=[common], help="run verification suites")
    sing = sub.add_parser("singular", parents=[common], help="test f^_kn^m v for singularity")
    sing.add_argument("--k", type=int, required=True)
    sing.add_argument("--m", type=int, required=True)
    sing.add_argument(
        "--arrange",
        choices=("positive", "negative"),
        help="replace z_k so that q^{lambda_kn - m + 1} is +1 or -1",
    )
    sub.add_parser("inverse", parents=[common], help="dynamical inverse of the Shapovalov form")
    sub.add_parser("flip-compare", parents=[common], help="original and flipped system determinants")
    sub.add_parser("list-suites", help="print the suite names")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        n=args.n,
        q=args.q,
        z=args.z,
        seed=args.seed,
        depth=default_depth(args.n) if args.depth is None else args.depth,
        trials=args.trials,
        format=args.format,
        suite=args.suite,
    )


# -- reports ------------------------------------------------------------------------------


def _fr(x) -> str:
    return format_rational(Fraction(x))


def _mat(M: Sequence[Sequence[Fraction]]) -> list[list[str]]:
    return [[_fr(x) for x in row] for row in M]


def _base(command: str, p: Params, cfg: RunConfig) -> dict:
    return {"command": command, "point": p.describe(), "depth": cfg.depth, "passed": True}


def cmd_gram(cfg: RunConfig) -> dict:
    p = cfg.params()
    report = _base("gram", p, cfg)
    mod = module(p)
    v = highest_weight_vector(p.n)
    entries = []
    for m in contents_up_to(p.n, cfg.depth):
        arrays = enumerate_pbw(p.n, m)
        vecs = [dyn.apply_dynscript(p, dyn.fhat_monomial(l), v) for l in arrays]
        contra = mod.gram_contravariant(m, vecs)
        cyclic = [
            [suites.highest_pairing(p, dyn.echeck_monomial(k) + dyn.fhat_monomial(l), v) for l in arrays] for k in arrays
        ]
        predicted = [fm.B_total(p, l) for l in arrays]
        ok = all(
            contra[a][b] == cyclic[a][b] == (predicted[a] if a == b else 0)
            for a in range(len(arrays))
            for b in range(len(arrays))
        )
        report["passed"] &= ok
        entries.append(
            {
                "content": list(m),
                "basis": [list(l.entries) for l in arrays],
                "standard_gram": _mat(standard_gram(p, m)),
                "dynamical_gram": _mat(contra),
                "cyclic_gram": _mat(cyclic),
                "predicted_diagonal": [_fr(x) for x in predicted],
                "factors": [[[lab, _fr(val)] for lab, val in fm.B_total_factors(p, l)] for l in arrays],
                "diagonal_and_matching": ok,
            }
        )
    report["contents"] = entries
    return report


def _suite_names(selection: str | None) -> list[str]:
    if selection is None or selection == "all":
        return list(suites.SUITES)
    names = [s.strip() for s in selection.split(",") if s.strip()]
    unknown = [s for s in names if s not in suites.SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s) {unknown}; run 'qverma list-suites'")
    return names


def cmd_verify(cfg: RunConfig) -> dict:
    names = _suite_names(cfg.suite)
    p = cfg.params()
    report = _base("verify", p, cfg)
    points = [p] + cfg.trial_params()
    report["points"] = [x.describe() for x in points]
    results = []
    for name in names:
        for idx, x in enumerate(points):
            res = suites.run_suite(name, x, cfg.depth)
            report["passed"] &= res.passed
            results.append({"point_index": idx, **res.as_dict()})
    report["suites"] = results
    return report


def cmd_singular(cfg: RunConfig, k: int, mpow: int, arrange: str | None = None) -> dict:
    p = cfg.params()
    if not 1 <= k <= p.n:
        raise ConfigError(f"--k must lie in 1..{p.n}")
    if mpow < 1:
        raise ConfigError("--m must be >= 1")
    if arrange is not None:
        p = suites.arranged_params(p, k, mpow, 1 if arrange == "positive" else -1)
    report = _base("singular", p, cfg)
    mod = module(p)
    criterion = fm.singular_criterion(p, k, mpow)
    top = dyn.apply_dynscript(p, (dyn.fhat(k, p.n),) * mpow, highest_weight_vector(p.n))
    images = {i: mod.act_e(i, top) for i in range(1, p.n + 1)}
    annihilated = all(w.is_zero() for w in images.values())
    nonzero = not top.is_zero()
    report.update(
        {
            "k": k,
            "m": mpow,
            "criterion": criterion,
            "coefficient": _fr(fm.singular_lowering_coefficient(p, k, mpow)),
            "vector": [_fr(x) for x in top.data],
            "vector_nonzero": nonzero,
            "e_images_zero": {str(i): w.is_zero() for i, w in images.items()},
            "singular": annihilated and nonzero,
            "agrees": criterion == (annihilated and nonzero),
        }
    )
    report["passed"] = report["agrees"]
    return report


def cmd_inverse(cfg: RunConfig) -> dict:
    p = cfg.params()
    report = _base("inverse", p, cfg)
    witnesses = fm.genericity_witnesses(p, cfg.depth)
    if witnesses:
        report["passed"] = False
        report["error"] = "DegenerateWeight"
        report["witness"] = list(witnesses[0].entries)
        return report
    entries = []
    for m in contents_up_to(p.n, cfg.depth):
        H, G = suites.dual_basis_matrices(p, m)
        left = linalg.is_identity(linalg.matmul(H, G))
        right = linalg.is_identity(linalg.matmul(G, H))
        report["passed"] &= left and right
        entries.append({"content": list(m), "inverse": _mat(H), "left_identity": left, "right_identity": right})
    report["contents"] = entries
    return report


def cmd_flip(cfg: RunConfig) -> dict:
    """Determinants of the original and flipped systems and of the standard Gram matrix.

    A check fails when every ``B`` of a system is nonzero but its determinant vanishes, or
    when the standard Gram is nondegenerate while both systems are singular.
    """
    p = cfg.params()
    pt = suites.flipped_params(p)
    report = _base("flip-compare", p, cfg)
    entries = []
    for m in contents_up_to(p.n, cfg.depth):
        dets = suites.flip_determinants(p, m)
        vanish = [list(l.entries) for l in enumerate_pbw(p.n, m) if fm.B_total(p, l) == 0]
        vanish_flip = [list(l.entries) for l in enumerate_pbw(p.n, dyn.flip_content(m)) if fm.B_total(pt, l) == 0]
        ok = True
        if not vanish and dets["original"] == 0:
            ok = False
        if not vanish_flip and dets["flipped"] == 0:
            ok = False
        if dets["standard_gram"] != 0 and dets["original"] == 0 and dets["flipped"] == 0:
            ok = False
        report["passed"] &= ok
        entries.append(
            {
                "content": list(m),
                "original_determinant": _fr(dets["original"]),
                "flipped_determinant": _fr(dets["flipped"]),
                "standard_gram_determinant": _fr(dets["standard_gram"]),
                "vanishing_B": vanish,
                "vanishing_B_flipped": vanish_flip,
                "consistent": ok,
            }
        )
    report["contents"] = entries
    return report


# -- rendering ----------------------------------------------------------------------------


def _csv_rows(report: dict) -> list[list]:
    """Flat rows ``content, quantity, row, col, value``; matrices row-major."""
    rows: list[list] = []
    if report["command"] == "verify":
        for s in report["suites"]:
            rows.append([s["point_index"], s["name"], s["passed"], s["skipped"], s["checks"], s["counterexample"] or ""])
        return rows
    if report["command"] == "singular":
        for key in ("k", "m", "criterion", "coefficient", "vector_nonzero", "singular", "agrees"):
            rows.append(["", key, "", "", report[key]])
        for c, x in enumerate(report["vector"]):
            rows.append(["", "vector", "", c, x])
        return rows
    if "contents" not in report:
        return [["", key, "", "", report.get(key, "")] for key in ("error", "witness")]
    for entry in report["contents"]:
        tag = "(" + ",".join(map(str, entry["content"])) + ")"
        for key, val in entry.items():
            if key in ("content", "basis", "factors"):
                continue
            if key.startswith("vanishing"):
                for r, l in enumerate(val):
                    rows.append([tag, key, r, "", "(" + ",".join(map(str, l)) + ")"])
            elif isinstance(val, list) and val and isinstance(val[0], list):
                for r, row in enumerate(val):
                    for c, x in enumerate(row):
                        rows.append([tag, key, r, c, x])
            elif isinstance(val, list):
                for r, x in enumerate(val):
                    rows.append([tag, key, r, "", x])
            else:
                rows.append([tag, key, "", "", val])
    return rows


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        point = report["point"]
        w.writerow(["# n", point["n"], "q", point["q"], "z", " ".join(point["z"])])
        if report["command"] == "verify":
            w.writerow(["point", "suite", "passed", "skipped", "checks", "counterexample"])
        else:
            w.writerow(["content", "quantity", "row", "col", "value"])
        w.writerows(_csv_rows(report))
        return buf.getvalue().rstrip("\n")
    return render_text(report)


def _text_matrix(M: list[list[str]], indent: str = "    ") -> list[str]:
    width = max((len(x) for row in M for x in row), default=1)
    return [indent + "  ".join(x.rjust(width) for x in row) for row in M]


def render_text(report: dict) -> str:
    pt = report["point"]
    lines = [f"{report['command']}: n={pt['n']} q={pt['q']} z=({', '.join(pt['z'])}) depth={report['depth']}"]
    cmd = report["command"]
    if cmd == "verify":
        for s in report["suites"]:
            state = "skip" if s["skipped"] else "PASS" if s["passed"] else "FAIL"
            line = f"  [{state}] {s['name']} @point{s['point_index']} ({s['checks']} checks)"
            if s["counterexample"]:
                line += f": {s['counterexample']}"
            lines.append(line)
    elif cmd == "singular":
        lines.append(f"  f^_{report['k']}{pt['n']}^{report['m']} v: criterion={report['criterion']} singular={report['singular']}")
        lines.append(f"  [m]_q [lambda_kn - m + 1]_q = {report['coefficient']}")
    elif "error" in report:
        lines.append(f"  {report['error']}: B vanishes at l={tuple(report['witness'])}")
    else:
        for entry in report["contents"]:
            lines.append(f"  content {tuple(entry['content'])}")
            for key, val in entry.items():
                if key in ("content", "basis", "factors"):
                    continue
                if key.startswith("vanishing"):
                    lines.append(f"   {key}: {' '.join(str(tuple(l)) for l in val) or 'none'}")
                elif isinstance(val, list) and val and isinstance(val[0], list):
                    lines.append(f"   {key}:")
                    lines += _text_matrix(val)
                elif isinstance(val, list):
                    lines.append(f"   {key}: {', '.join(map(str, val))}")
                else:
                    lines.append(f"   {key}: {val}")
            for l, factors in zip(entry.get("basis", ()), entry.get("factors", ())):
                shown = " ".join(lab for lab, _ in factors) or "1"
                lines.append(f"   B{tuple(l)} = {shown}")
    lines.append("PASS" if report["passed"] else "FAIL")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "list-suites":
        return 0, "\n".join(suites.SUITES)
    try:
        cfg = config_from_args(args)
        if args.command == "gram":
            report = cmd_gram(cfg)
        elif args.command == "verify":
            report = cmd_verify(cfg)
        elif args.command == "singular":
            report = cmd_singular(cfg, args.k, args.m, args.arrange)
        elif args.command == "inverse":
            report = cmd_inverse(cfg)
        else:
            report = cmd_flip(cfg)
    except (ConfigError, ValueError) as exc:
        return 2, f"qverma: error: {exc}"
    return (0 if report["passed"] else 1), render(report, cfg.format)


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run(argv)
    stream = sys.stderr if code == 2 else sys.stdout
    print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
