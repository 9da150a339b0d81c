"""``cayley-ci``: one subcommand per computational claim, each printing a JSON report.

Exit status is 0 when every claim passes, 1 when some claim fails, 2 when a
search ran out of budget and 64 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import ci, matgroup, schur
from .digraph import DEFAULT_BUDGET, BudgetExceeded, cayley, orbital_coloring, two_closure, verify_phi_t
from .perm import is_normal

EXIT_OK, EXIT_CLAIM, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 64
DEFAULT_SWEEP = (3, 5, 7, 11)
SLOW_SWEEP = (13,)


@dataclass
class Claim:
    name: str
    expected: object
    actual: object

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class Report:
    command: str
    parameters: dict
    claims: list[Claim] = field(default_factory=list)
    runtime_ms: int = 0
    artifact_paths: list[str] = field(default_factory=list)
    budget_exhausted: bool = False

    def claim(self, name: str, expected, actual) -> None:
        self.claims.append(Claim(name, expected, actual))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    @property
    def exit_code(self) -> int:
        if self.budget_exhausted:
            return EXIT_BUDGET
        return EXIT_OK if self.passed else EXIT_CLAIM

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "claims": [{"name": c.name, "expected": c.expected, "actual": c.actual, "pass": c.passed}
                       for c in self.claims],
            "runtime_ms": self.runtime_ms,
            "artifact_paths": self.artifact_paths,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


class _Artifacts:
    def __init__(self, out: str | None, report: Report):
        self.root = Path(out) if out else None
        self.report = report

    def write(self, name: str, text: str) -> None:
        if self.root is None:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / name
        path.write_text(text)
        self.report.artifact_paths.append(str(path))


# -- subcommands --------------------------------------------------------------

def cmd_orders(q: int, **_) -> Report:
    r = Report("orders", {"q": q})
    cr = matgroup.coset_representation(q)
    r.claim("|G| = 4q^3", 4 * q**3, cr.G.order)
    r.claim("|D| = 2q", 2 * q, cr.D.order)
    r.claim("|H| = 2q^2", 2 * q * q, cr.H.order)
    r.claim("|K| = 2q^2", 2 * q * q, cr.K.order)
    r.claim("H, K normal in G", [True, True], [is_normal(cr.G, cr.H), is_normal(cr.G, cr.K)])
    return r


def cmd_orbits(q: int, out: str | None = None, **_) -> Report:
    r = Report("orbits", {"q": q})
    fams = matgroup.orbit_families(q)
    kinds = [f.kind for f in fams]
    r.claim("singleton orbits", q, kinds.count("S"))
    r.claim("coset orbits", (q - 1) // 2, kinds.count("C"))
    r.claim("parabolic orbits", q, kinds.count("P"))
    r.claim("total orbit mass = 2q^2", 2 * q * q, sum(len(f) for f in fams))
    r.claim("sizes (singleton, coset, parabolic)", [1, 2 * q, q],
            [len(next(f for f in fams if f.kind == k)) for k in "SCP"])
    brute = sorted(sorted(o) for o in matgroup.coset_representation(q).D.orbits())
    r.claim("closed forms equal the computed orbits", True, brute == sorted(sorted(f.members) for f in fams))
    r.claim("self-paired singletons", ["S_0"],
            [f.label for f in fams if f.kind == "S" and matgroup.is_self_paired(f)])
    r.claim("non-singleton orbits self-paired", True,
            all(matgroup.is_self_paired(f) for f in fams if f.kind != "S"))
    lines = [f"{f.label} {' '.join(map(str, sorted(f.members)))}" for f in fams]
    _Artifacts(out, r).write(f"orbits_q{q}.txt", "\n".join(lines) + "\n")
    return r


def cmd_separate(q: int, **_) -> Report:
    r = Report("separate", {"q": q})
    S = {0} | matgroup.parabolic(q, 0).members
    actual = ci.separation_check(q, S)
    # the statement covers q >= 5 only; smaller q is reported without an expectation
    r.claim("{e} u P_0 separates G-orbitals", True if q >= 5 else actual, actual)
    return r


def cmd_two_closed(q: int, budget: int = DEFAULT_BUDGET, out: str | None = None, **_) -> Report:
    r = Report("two-closed", {"q": q})
    cr = matgroup.coset_representation(q)
    res = two_closure(cr.G.gens, cr.degree, budget)
    r.claim("|G^(2)| = |G| = 4q^3", 4 * q**3, res.order)
    _Artifacts(out, r).write(f"orbitals_q{q}.txt", orbital_coloring(cr.G.gens, cr.degree).to_text())
    return r


def cmd_schur_gen(q: int, x: int | None = None, out: str | None = None, **_) -> Report:
    r = Report("schur-gen", {"q": q, "x": x})
    H = matgroup.h_group(q)
    T = matgroup.build_T(q, x)
    generated = schur.generated_sring(H, T)
    module = schur.transitivity_module(H, matgroup.coset_representation(q).D)
    r.claim("class count", len(module), len(generated))
    r.claim("<<T>> = V(H, G_e) class by class", True, generated == module)
    r.claim("<<T>> is a Schur ring", True, schur.is_sring(generated))
    table = schur.verify_table1(q)
    r.claim("multiplication table entries verified", table.checks, table.checks - len(table.mismatches))
    arts = _Artifacts(out, r)
    arts.write(f"generated_q{q}.txt", generated.to_text())
    arts.write(f"transitivity_module_q{q}.txt", module.to_text())
    arts.write(f"cay_H_T_q{q}.txt", cayley(H, T).to_text())
    return r


def cmd_non_ci(q: int, budget: int = DEFAULT_BUDGET, out: str | None = None, **_) -> Report:
    r = Report("non-ci", {"q": q})
    cert = ci.non_ci_certificate(q, budget)
    for name, ok in cert.checks.items():
        if name != "H/K conjugacy as recorded":
            r.claim(name, True, ok)
    H = matgroup.h_group(q)
    if q >= 7:
        r.claim("T inverse-closed", True, H.is_inverse_closed(matgroup.build_T(q)))
    elif q == 5:
        r.claim("|Aut(Cay(H, P_0 u S_1 u S_-1))| = 4|G|", 4 * 4 * q**3, cert.payload["aut_order"])
        r.claim("H and K not conjugate in Aut", True, cert.payload["H_to_K_conjugator"] is None)
    else:
        r.claim("T not inverse-closed (digraph case)", False, H.is_inverse_closed(cert.payload["S"]))
        r.claim("H and K not conjugate in Aut", True, cert.payload["H_to_K_conjugator"] is None)
    _Artifacts(out, r).write(f"non_ci_q{q}.json", cert.to_json() + "\n")
    return r


def cmd_z27(budget: int = DEFAULT_BUDGET, out: str | None = None, **_) -> Report:
    r = Report("z27", {})
    cert = ci.bci_check_z27(budget)
    p = cert.payload
    r.claim("|Aut(Gamma)|", 46656, p["aut_order"])
    for name, ok in cert.checks.items():
        if name != "|Aut| = 46656":
            r.claim(name, True, ok)
    r.claim("regular-subgroup search completed", True, p["search_complete"])
    r.parameters["classes_found"] = p["classes_found"]
    if not p["search_complete"] and p["classes_found"] < 2:
        r.budget_exhausted = True
    arts = _Artifacts(out, r)
    arts.write("z27_certificate.json", cert.to_json() + "\n")
    arts.write("z27_gamma.txt", matgroup.special_case_z27().gamma.to_text())
    return r


def cmd_alpha(q: int, **_) -> Report:
    r = Report("alpha", {"q": q})
    for name, ok in matgroup.alpha_lemma_checks(q).items():
        r.claim(name, True, ok)
    G = matgroup.coset_representation(q).G
    a = matgroup.alpha_hat_perm(q)
    r.claim("alpha_hat normalizes G", True, all(G.contains(a.inverse() * g * a) for g in G.gens))
    return r


def cmd_phi(q: int, **_) -> Report:
    r = Report("phi", {"q": q})
    ts = list(range(1, q))
    r.claim("Phi_t isomorphic to Cay(F_q, {t, -t})", [True] * len(ts), [verify_phi_t(q, t) for t in ts])
    return r


def cmd_oracle(budget: int = DEFAULT_BUDGET, **_) -> Report:
    r = Report("oracle", {"seed": ci.ORACLE_SEED, "samples_per_order_8_group": ci.ORACLE_SAMPLES})
    cases = ci.oracle_cases()
    res = ci.oracle_agreement(cases, budget)
    r.claim("cases compared", len(cases), res.cases)
    r.claim("disagreements", [], res.disagreements)
    return r


Q_COMMANDS = {
    "orders": cmd_orders, "orbits": cmd_orbits, "separate": cmd_separate,
    "two-closed": cmd_two_closed, "schur-gen": cmd_schur_gen, "non-ci": cmd_non_ci,
    "alpha": cmd_alpha, "phi": cmd_phi,
}
PLAIN_COMMANDS = {"z27": cmd_z27, "oracle": cmd_oracle}
# commands that stay within the runtime budget at q = 11 and beyond
_LARGE_Q = ("orders", "orbits", "separate", "schur-gen", "non-ci", "phi")


def run(command: str, q: int | None = None, x: int | None = None, out: str | None = None,
        budget: int = DEFAULT_BUDGET, timing: bool = True) -> Report:
    start = time.perf_counter()
    if command in Q_COMMANDS:
        kwargs = {"q": q, "out": out, "budget": budget}
        if command == "schur-gen":
            kwargs["x"] = x
        try:
            report = Q_COMMANDS[command](**kwargs)
        except BudgetExceeded:
            report = Report(command, {"q": q}, budget_exhausted=True)
    else:
        try:
            report = PLAIN_COMMANDS[command](out=out, budget=budget)
        except BudgetExceeded:
            report = Report(command, {}, budget_exhausted=True)
    report.parameters.setdefault("budget", budget)
    if timing:
        report.runtime_ms = int(round((time.perf_counter() - start) * 1000))
    return report


def _job(args: tuple) -> dict:
    command, q, out, budget, timing = args
    rep = run(command, q=q, out=out, budget=budget, timing=timing)
    return {"report": rep.to_dict(), "exit": rep.exit_code}


def _sweep_jobs(qs, out, budget, timing) -> list[tuple]:
    jobs = []
    for q in qs:
        for name in Q_COMMANDS:
            if q <= 7 or name in _LARGE_Q:
                jobs.append((name, q, out, budget, timing))
    jobs += [("z27", None, out, budget, timing), ("oracle", None, out, budget, timing)]
    return jobs


def run_all(slow: bool = False, jobs: int = 1, out: str | None = None,
            budget: int = DEFAULT_BUDGET, timing: bool = True) -> tuple[Report, int]:
    start = time.perf_counter()
    qs = DEFAULT_SWEEP + (SLOW_SWEEP if slow else ())
    work = _sweep_jobs(qs, out, budget, timing)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_job, work))
    else:
        results = [_job(w) for w in work]
    report = Report("all", {"q": list(qs), "slow": slow, "budget": budget})
    for res in results:
        sub = res["report"]
        tag = sub["command"] + (f" q={sub['parameters']['q']}" if "q" in sub["parameters"] else "")
        for c in sub["claims"]:
            report.claim(f"{tag}: {c['name']}", c["expected"], c["actual"])
        report.artifact_paths += sub["artifact_paths"]
        if res["exit"] == EXIT_BUDGET:
            report.budget_exhausted = True
    if timing:
        report.runtime_ms = int(round((time.perf_counter() - start) * 1000))
    return report, report.exit_code


# -- argument parsing ---------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _prime_q(text: str) -> int:
    try:
        return matgroup.check_q(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cayley-ci", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted([*Q_COMMANDS, *PLAIN_COMMANDS, "all"]))
    p.add_argument("--q", type=_prime_q, help="odd prime modulus (required for q-dependent commands)")
    p.add_argument("--x", type=int, help="parameter x in the connection set T (q > 7)")
    p.add_argument("--out", help="directory for artifact files")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")
    p.add_argument("--slow", action="store_true", help="include q = 13 in the 'all' sweep")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for 'all'")
    p.add_argument("--no-timing", action="store_true", help="report runtime_ms as 0 for reproducible output")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    timing = not args.no_timing
    if args.command == "all":
        report, code = run_all(args.slow, max(1, args.jobs), args.out, args.budget, timing)
    else:
        if args.command in Q_COMMANDS and args.q is None:
            parser.error(f"{args.command} needs --q")
        if args.x is not None and args.command == "schur-gen" and args.q > 7 \
                and not matgroup.valid_x(args.q, args.x):
            parser.error(f"x = {args.x} is not admissible for q = {args.q}")
        report = run(args.command, args.q, args.x, args.out, args.budget, timing)
        code = report.exit_code
    print(report.to_json())
    return code


if __name__ == "__main__":
    sys.exit(main())
