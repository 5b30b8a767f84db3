"""Command-line entry point.

Every command prints one report, either as JSON ``{config, cases, summary}``
or as a plain table. Exit status: 0 pass, 1 verification failure, 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .bundles_compact import (
    HOPF,
    PicardChar,
    SurfaceSpec,
    cohomology_dims,
    make_char,
    sections,
    surface_invariants,
)
from .bundles_open import (
    BundleLabel,
    basis_of,
    canonical_index,
    hom_bundle,
    normalize,
    oracle_product,
    section_extends,
    yoneda_product,
)
from .fukaya_model import (
    PerturbationData,
    admissible_alphas,
    intersections,
    mirror_lagrangian,
    partially_wrapped,
)
from .mirror_verify import (
    SIGN_CONVENTION,
    VerificationReport,
    associativity_suite,
    compact_perturbation,
    compact_suite,
    diagram_suite,
    floer_product,
    open_suite,
    perturbation_suite,
    run_suite,
    to_jsonable,
    verify_open_products,
)
from .numerics import ModularParam, qpow


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SessionConfig:
    tau: complex = 1j
    eps: float = 1e-12
    window: int = 8
    seed: int = 0
    output: str = "json"

    def __post_init__(self) -> None:
        if not self.tau.imag > 0:
            raise UsageError("tau must have positive imaginary part")
        if self.window < 1:
            raise UsageError("window must be at least 1")
        if not self.eps > 0:
            raise UsageError("eps must be positive")

    @property
    def mp(self) -> ModularParam:
        return ModularParam(self.tau)

    def as_json(self) -> dict[str, Any]:
        return {
            "tau": [self.tau.real, self.tau.imag],
            "eps": self.eps,
            "window": self.window,
            "seed": self.seed,
            "sign_conventions": SIGN_CONVENTION,
        }


def parse_tau(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    if t in ("j", "+j"):
        return 1j
    try:
        return complex(t)
    except ValueError as exc:
        raise UsageError(f"cannot parse tau {text!r}") from exc


def _ints(text: str, n: int, what: str) -> list[int]:
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"{what} needs {n} comma-separated integers")
    try:
        return [int(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from exc


def parse_surface(text: str) -> SurfaceSpec:
    return SurfaceSpec(*_ints(text, 4, "--A"))


def parse_label(text: str) -> BundleLabel:
    parts = text.split(",")
    if not 3 <= len(parts) <= 5:
        raise UsageError("labels are m,k,d[,eta[,nu]]")
    try:
        m, k, d = (int(p) for p in parts[:3])
        rest = [Fraction(p) for p in parts[3:]]
    except ValueError as exc:
        raise UsageError(f"bad label {text!r}") from exc
    return normalize(m, k, d, *rest)


def parse_char(text: str) -> PicardChar:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("characters are f,g,lam,theta")
    try:
        return make_char(*(Fraction(p) for p in parts))
    except ValueError as exc:
        raise UsageError(f"bad character {text!r}") from exc


def parse_index(text: str) -> tuple[int, int]:
    j, a = _ints(text, 2, "index")
    return j, a


def _case(case_id: str, passed: bool = True, **data: Any) -> dict[str, Any]:
    return {"case_id": case_id, "passed": passed, **data}


def _summary(cases: list[Any]) -> dict[str, Any]:
    def passed(c: Any) -> bool:
        return c.passed if isinstance(c, VerificationReport) else c["passed"]

    diffs = [c.max_abs_diff for c in cases if isinstance(c, VerificationReport)]
    return {
        "pass": sum(passed(c) for c in cases),
        "fail": sum(not passed(c) for c in cases),
        "max_abs_diff": max(diffs, default=0.0),
    }


def cmd_surface(cfg: SessionConfig, args: argparse.Namespace) -> list[Any]:
    A = parse_surface(args.A)
    inv = surface_invariants(A)
    return [_case(
        str(A), n=inv.n,
        pi1={"free_rank": inv.pi1_free_rank, "torsion": inv.pi1_torsion},
        algebraic=inv.algebraic,
    )]


def cmd_homs(cfg: SessionConfig, args: argparse.Namespace) -> list[Any]:
    if args.kind == "compact":
        A = parse_surface(args.A)
        g = parse_char(args.char)
        dims = cohomology_dims(g, A)
        L = mirror_lagrangian(g, A)
        L0 = mirror_lagrangian(PicardChar(), A)
        gens = intersections(L0, L, compact_perturbation(A), cfg.window)
        return [_case(
            f"compact {A} {g}",
            cohomology=list(dims.as_tuple()),
            sections=[[s.n1, s.n2] for s in sections(g, A)],
            floer_degrees=[sum(x.degree == d for x in gens) for d in range(3)],
        )]
    L0, L1 = parse_label(args.L0), parse_label(args.L1)
    H = hom_bundle(L0, L1)
    if args.side == "B":
        basis = basis_of(H, cfg.window)
        if args.flavor:
            fl = tuple(_ints(args.flavor, 2, "--flavor"))
            basis = [i for i in basis if section_extends(H, i, fl)]
        return [_case(f"B {L0} -> {L1}", hom=H, basis=basis, count=len(basis))]
    A0, A1 = mirror_lagrangian(L0), mirror_lagrangian(L1)
    if args.flavor:
        A0 = partially_wrapped(A0, tuple(_ints(args.flavor, 2, "--flavor")))
    pert = PerturbationData(admissible_alphas([A0, A1]))
    gens = intersections(A0, A1, pert, cfg.window)
    return [_case(
        f"A {L0} -> {L1}", hom=H, alpha=list(pert.alpha),
        generators=[{"index": x.index, "degree": x.degree, "point": x.point} for x in gens],
        count=len(gens),
    )]


def cmd_product(cfg: SessionConfig, args: argparse.Namespace) -> list[Any]:
    L0, L1, L2 = (parse_label(t) for t in (args.L0, args.L1, args.L2))
    i0 = canonical_index(hom_bundle(L0, L1), *parse_index(args.idx0))
    i1 = canonical_index(hom_bundle(L1, L2), *parse_index(args.idx1))
    if args.side == "all":
        return [verify_open_products(L0, L1, L2, i0, i1, cfg.window, mp=cfg.mp, eps=cfg.eps,
                                     case_id="product")]
    if args.side == "B":
        sc = yoneda_product(L0, L1, L2, i0, i1, cfg.window, cfg.mp, cfg.eps)
    elif args.side == "A":
        sc = floer_product(L0, L1, L2, i0, i1, cfg.window, cfg.mp, cfg.eps)
    else:
        sc = oracle_product(L0, L1, L2, i0, i1, cfg.window, cfg.eps, cfg.mp)
    return [_case(f"product {args.side}", coefficients=sc.entries, truncated=sc.truncated)]


def cmd_verify(cfg: SessionConfig, args: argparse.Namespace) -> list[Any]:
    A = parse_surface(args.A) if getattr(args, "A", None) else None
    suite = args.suite
    if suite == "open":
        return open_suite(args.trials, cfg.seed, mp=cfg.mp)
    if suite == "compact":
        return compact_suite(args.trials, cfg.seed, A)
    if suite == "diagram":
        return diagram_suite(args.trials, cfg.seed, A)
    if suite == "perturbation":
        return perturbation_suite(args.trials, cfg.seed, mp=cfg.mp)
    return associativity_suite(args.trials, cfg.seed, "B", mp=cfg.mp) + associativity_suite(
        args.trials, cfg.seed, "A", mp=cfg.mp
    )


def worked_theta_product(cfg: SessionConfig, span: int = 6) -> VerificationReport:
    """The worked product of two theta sections, checked on all three computations."""
    L0, L1, L2 = normalize(1, 0, -1), normalize(1, 0, 0), normalize(1, -1, 1)
    i0 = canonical_index(hom_bundle(L0, L1), 0, 0)
    i1 = canonical_index(hom_bundle(L1, L2), 0, 0)
    rep = verify_open_products(L0, L1, L2, i0, i1, 2 * span, mp=cfg.mp, eps=cfg.eps,
                               case_id="example-8")
    H02 = hom_bundle(L0, L2)
    expected = {canonical_index(H02, n, n): qpow(cfg.mp, Fraction(n * n, 4)) for n in range(-span, span + 1)}
    worst = max(
        abs(rep.side_b.get(k, 0j) - v) / abs(v) for k, v in expected.items()
    )
    worst = max(worst, max(abs(rep.side_a.get(k, 0j) - v) / abs(v) for k, v in expected.items()))
    rep.extra["expected"] = expected
    rep.extra["max_rel_error_vs_expected"] = worst
    rep.passed = rep.passed and worst <= 1e-9
    return rep


def hopf_cohomology(cfg: SessionConfig, top: int = 5) -> list[dict[str, Any]]:
    rows = []
    cases = [(f"xi=q^{k}", make_char(0, 0, k, 0), (k + 1, k + 1, 0)) for k in range(top + 1)]
    cases.append(("xi=q^-3", make_char(0, 0, -3, 0), (0, 2, 2)))
    cases.append(("xi generic", make_char(0, 0, Fraction(1, 2), Fraction(1, 3)), (0, 0, 0)))
    L0 = mirror_lagrangian(PicardChar(), HOPF)
    for name, g, want in cases:
        dims = cohomology_dims(g, HOPF).as_tuple()
        gens = intersections(L0, mirror_lagrangian(g, HOPF), compact_perturbation(HOPF), 0)
        deg0 = sum(x.degree == 0 for x in gens)
        ok = dims == want and deg0 == dims[0]
        rows.append(_case(name, ok, cohomology=list(dims), expected=list(want), floer_degree0=deg0))
    return rows


def cmd_repro(cfg: SessionConfig, args: argparse.Namespace) -> list[Any]:
    if args.example == "example-8":
        return [worked_theta_product(cfg)]
    return hopf_cohomology(cfg)


def _table(cases: list[Any]) -> str:
    lines = []
    for c in cases:
        d = to_jsonable(c)
        status = "PASS" if d.get("passed") else "FAIL"
        rest = {k: v for k, v in d.items() if k not in ("case_id", "passed", "sign_convention_used")}
        lines.append(f"{status}  {d['case_id']}")
        for k, v in rest.items():
            if isinstance(v, dict) and len(v) > 6:
                lines.append(f"    {k}:")
                lines.extend(f"      {kk}: {vv}" for kk, vv in v.items())
            else:
                lines.append(f"    {k}: {v}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tau", default=None, help="modular parameter, e.g. 0.3+0.8i (env HMS_TAU)")
    common.add_argument("--eps", type=float, default=1e-12)
    common.add_argument("--window", type=int, default=8)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", choices=["table", "json"], default="json")

    p = argparse.ArgumentParser(prog="hopfmirror", description="Mirror symmetry checks for elliptic Hopf surfaces")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("surface", parents=[common], help="invariants of a Hopf surface")
    s.add_argument("--A", required=True, help="m0,k0,minf,kinf")
    s.set_defaults(func=cmd_surface)

    h = sub.add_parser("homs", parents=[common], help="basis of a Hom space")
    h.add_argument("kind", choices=["open", "compact"])
    h.add_argument("--side", choices=["A", "B"], default="B")
    h.add_argument("--L0", default="1,0,0")
    h.add_argument("--L1", default="1,0,0")
    h.add_argument("--flavor", default=None, help="m,k: keep only the partially wrapped part")
    h.add_argument("--A", default="1,0,1,1")
    h.add_argument("--char", default="0,0,0,0", help="f,g,lam,theta")
    h.set_defaults(func=cmd_homs)

    pr = sub.add_parser("product", parents=[common], help="one product of basis morphisms")
    pr.add_argument("--side", choices=["A", "B", "oracle", "all"], default="all")
    for name in ("L0", "L1", "L2"):
        pr.add_argument(f"--{name}", required=True)
    pr.add_argument("--idx0", default="0,0")
    pr.add_argument("--idx1", default="0,0")
    pr.set_defaults(func=cmd_product)

    v = sub.add_parser("verify", parents=[common], help="seeded verification suites")
    v.add_argument("suite", choices=["open", "compact", "diagram", "perturbation", "associativity"])
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--A", default=None)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("repro", parents=[common], help="reproduce the worked examples")
    r.add_argument("example", choices=["example-8", "hopf-cohomology"])
    r.set_defaults(func=cmd_repro)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tau_text = args.tau or os.environ.get("HMS_TAU") or "i"
        cfg = SessionConfig(parse_tau(tau_text), args.eps, args.window, args.seed, args.output)
        cases = args.func(cfg, args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    summary = _summary(cases)
    if cfg.output == "json":
        doc = {"config": cfg.as_json(), "cases": cases, "summary": summary}
        print(json.dumps(to_jsonable(doc), indent=2, ensure_ascii=False))
    else:
        print(_table(cases))
        print(f"pass {summary['pass']}  fail {summary['fail']}  max_abs_diff {summary['max_abs_diff']:.3e}")
    return 0 if summary["fail"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
