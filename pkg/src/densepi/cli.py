"""Command line entry point: ``densepi <subcommand> ...``.

Exit status: 0 all checks pass, 1 counterexample found, 2 usage or
configuration error, 3 enclosure refinement budget exhausted.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
from fractions import Fraction

from . import __version__
from .density import discontinuity_witness, graph_cloud, grid_from_range, write_csv
from .exact_numbers import (
    DEFAULT_CONFIG,
    AtomRegistry,
    HamelNumber,
    RefinementBudgetError,
    format_rat,
    rat,
)
from .extremality import finite_uniqueness_certificate, verify_proof_cases
from .group_functions import Additive, DensePi, Gmi, GroupFunction, Sum, fn_sum, restrict_to_grid
from .minimality import (
    CheckReport,
    HamelSampler,
    check_minimal,
    check_nonnegativity,
    sub_seed,
    verify_minimal_finite,
)
from .model import (
    Solution,
    affine_hull_residual,
    check_validity,
    equivalence_check,
    halfspace_value,
    nonneg_form_demo,
    random_solution,
)

log = logging.getLogger("densepi")

REGISTRY_ENV = "DENSEPI_REGISTRY"
SCHEMA = 1
EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

ASSUMPTIONS = [
    "atoms are assumed linearly independent over Q together with 1; this is not verified",
    "all statements are checked on the finitely generated Q-subspace spanned by b = 1/2 "
    "and the registry atoms, not on all of R",
    "additive perturbations are sampled from finitely many atoms only",
]


class ConfigError(Exception):
    pass


def load_registry(path: str | None) -> AtomRegistry:
    path = path or os.environ.get(REGISTRY_ENV)
    if not path:
        return AtomRegistry.from_config(DEFAULT_CONFIG)
    try:
        return AtomRegistry.load(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"cannot load registry {path!r}: {exc}") from exc


def load_theta(path: str) -> Additive:
    try:
        return Additive.load(path)
    except (OSError, ValueError, TypeError) as exc:
        raise ConfigError(f"cannot load theta file {path!r}: {exc}") from exc


def parse_function(spec: str) -> GroupFunction:
    """``pi``, ``gmi``, ``pi+theta:<file>`` or ``gmi+theta:<file>``."""
    base, _, rest = spec.partition("+")
    bases = {"pi": DensePi(), "gmi": Gmi()}
    if base not in bases:
        raise ConfigError(f"unknown function {spec!r}")
    if not rest:
        return bases[base]
    if not rest.startswith("theta:"):
        raise ConfigError(f"unknown function {spec!r}")
    return fn_sum([bases[base], load_theta(rest[len("theta:"):])])


def _check_atoms(registry: AtomRegistry, ids) -> None:
    missing = [a for a in ids if a not in registry]
    if missing:
        raise ConfigError(f"atoms {missing} are not in the registry")


def header(args, registry: AtomRegistry) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("handler", "out", "verbose")}
    return {
        "schema": SCHEMA,
        "tool": "densepi",
        "version": __version__,
        "config": config,
        "registry": {"sha256": registry.digest(), "atoms": registry.config},
        "assumptions": ASSUMPTIONS,
    }


def emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sampler(args, registry, label):
    return HamelSampler(sub_seed(args.seed, label), registry, P=args.P, Q=args.Q)


# ---------------------------------------------------------------------------
# subcommands


def cmd_check_minimal(args, registry) -> int:
    f = parse_function(args.fn)
    if isinstance(f, Sum):
        for t in f.terms:
            if isinstance(t, Additive):
                _check_atoms(registry, t.c)
    sampler = _sampler(args, registry, "check-minimal")
    reports = check_minimal(f, sampler, args.samples, range(-args.zmax, args.zmax + 1))
    nonneg = check_nonnegativity(f, sampler.spawn("nonnegativity"), args.samples)
    doc = header(args, registry)
    doc["function"] = str(f)
    doc["reports"] = [r.to_json() for r in reports]
    doc["nonnegativity"] = nonneg.to_json()
    doc["verdict"] = "pass" if all(r.passed for r in reports) else "fail"
    emit(doc, args.out)
    for r in reports + [nonneg]:
        log.info("%s", r)
    return EXIT_OK if doc["verdict"] == "pass" else EXIT_COUNTEREXAMPLE


def cmd_check_extreme_finite(args, registry) -> int:
    if args.n <= 0 or args.n % 2:
        raise ConfigError("--n must be a positive even integer")
    f = parse_function(args.fn)
    try:
        F = restrict_to_grid(f, args.n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    minimal = verify_minimal_finite(F)
    doc = header(args, registry)
    doc["function"] = str(f)
    doc["minimal_finite"] = minimal.to_json()
    if not minimal.passed:
        doc["verdict"] = "fail"
        emit(doc, args.out)
        return EXIT_COUNTEREXAMPLE
    cert = finite_uniqueness_certificate(F)
    doc["certificate"] = cert.to_json()
    doc["certificate"]["self_check"] = cert.self_check()
    doc["verdict"] = "pass" if cert.self_check() else "fail"
    emit(doc, args.out)
    log.info("n=%d certificate %s", args.n, cert.verdict)
    return EXIT_OK if doc["verdict"] == "pass" else EXIT_COUNTEREXAMPLE


def cmd_verify_proof_cases(args, registry) -> int:
    if args.qmax < 1:
        raise ConfigError("--qmax must be at least 1")
    rep = verify_proof_cases(args.qmax)
    doc = header(args, registry)
    doc["report"] = rep.to_json()
    doc["verdict"] = rep.verdict
    emit(doc, args.out)
    log.info("%s", rep)
    return EXIT_OK if rep.passed else EXIT_COUNTEREXAMPLE


def _solutions(args, registry, label):
    sampler = _sampler(args, registry, label)
    for i in range(args.samples):
        if i % 10 == 0:
            q = 1 + (i // 10) % 20
            yield Solution.of((HamelNumber(Fraction(1, q)), q))  # tight family {(b/q, q)}
        else:
            yield random_solution(sampler)


def cmd_validity_demo(args, registry) -> int:
    f = parse_function(args.fn)
    rep = CheckReport("validity", 0, args.seed)
    for y in _solutions(args, registry, "validity-demo"):
        rep.samples += 1
        value = halfspace_value(f, y)
        if not check_validity(f, y):
            rep.add_counterexample(solution=y.to_json(), value=value)
        elif value == 1:
            rep.add_tight(y.to_json())
    doc = header(args, registry)
    doc["function"] = str(f)
    doc["report"] = rep.to_json()
    doc["tight_fraction"] = format_rat(Fraction(rep.n_tight, max(rep.samples, 1)))
    doc["verdict"] = rep.verdict
    emit(doc, args.out)
    return EXIT_OK if rep.passed else EXIT_COUNTEREXAMPLE


def cmd_perturb_demo(args, registry) -> int:
    theta = load_theta(args.theta)
    if theta.c_b != 0:
        raise ConfigError("theta must vanish on Q (c_b = 0)")
    _check_atoms(registry, theta.c)
    f = parse_function(args.fn)
    residuals = CheckReport("affine_hull_residual", 0, args.seed)
    equiv = CheckReport("equivalence", 0, args.seed)
    for y in _solutions(args, registry, "perturb-demo"):
        residuals.samples += 1
        equiv.samples += 1
        r = affine_hull_residual(theta, y)
        if r != 0:
            residuals.add_counterexample(solution=y.to_json(), residual=r)
        if not equivalence_check(f, theta, y):
            equiv.add_counterexample(solution=y.to_json())
    doc = header(args, registry)
    doc["function"] = str(f)
    doc["theta"] = theta.to_json()
    doc["reports"] = [residuals.to_json(), equiv.to_json()]
    ok = residuals.passed and equiv.passed
    doc["verdict"] = "pass" if ok else "fail"
    emit(doc, args.out)
    return EXIT_OK if ok else EXIT_COUNTEREXAMPLE


def cmd_nonneg_demo(args, registry) -> int:
    theta = load_theta(args.theta)
    if theta.c_b != 0 or not theta.c:
        raise ConfigError("theta must vanish on Q (c_b = 0) and be nonzero")
    _check_atoms(registry, theta.c)
    sampler = _sampler(args, registry, "nonneg-demo")
    points = [sampler.point() for _ in range(args.samples)]
    demo = nonneg_form_demo(fn_sum([Gmi(), theta]), registry, args.max_k, points)
    doc = header(args, registry)
    doc["theta"] = theta.to_json()
    doc["witness"] = demo.witness.to_json()
    doc["witness_value"] = demo.witness_value.to_json()
    doc["corrected"] = str(demo.corrected)
    doc["corrected_value_at_witness"] = demo.corrected_value.to_json()
    doc["corrected_equals_gmi_at_samples"] = len(points)
    doc["verdict"] = "pass"
    emit(doc, args.out)
    return EXIT_OK


def cmd_density_sample(args, registry) -> int:
    if args.atom not in registry:
        raise ConfigError(f"atom {args.atom!r} not in registry")
    try:
        xs, ys = grid_from_range(args.xgrid), grid_from_range(args.ygrid)
        eps = rat(args.eps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if eps <= 0 or any(not 0 <= y <= 1 for y in ys):
        raise ConfigError("eps must be positive and y values must lie in [0, 1]")
    hits = graph_cloud(xs, ys, eps, args.atom, registry)
    bad = [h for h in hits if not h.check()]
    buf = io.StringIO()
    meta = header(args, registry)
    meta["n_hits"] = len(hits)
    meta["verdict"] = "pass" if not bad else "fail"
    for line in json.dumps(meta, sort_keys=False).splitlines():
        buf.write(f"# {line}\n")
    write_csv(hits, buf)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if args.witnesses:
        gaps = [discontinuity_witness(h.target[0], args.witness_bits, args.atom, registry)[1]
                for h in hits[: args.witnesses]]
        log.info("discontinuity gaps >= %s at %d points", min(gaps), len(gaps))
    return EXIT_OK if not bad else EXIT_COUNTEREXAMPLE


# ---------------------------------------------------------------------------


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="densepi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--registry", help=f"atom registry JSON (default: ${REGISTRY_ENV} or sqrt2/3/5)")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(handler=handler)
        return p

    def sampling(p):
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--P", type=int, default=40, help="numerator bound for sampled rationals")
        p.add_argument("--Q", type=int, default=20, help="denominator bound for sampled rationals")

    p = add("check-minimal", cmd_check_minimal, "sampled minimality conditions")
    p.add_argument("--fn", required=True)
    p.add_argument("--zmax", type=int, default=5)
    sampling(p)

    p = add("check-extreme-finite", cmd_check_extreme_finite, "finite uniqueness certificate")
    p.add_argument("--fn", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("verify-proof-cases", cmd_verify_proof_cases, "identities of the extremality cases")
    p.add_argument("--qmax", type=int, default=50)

    p = add("validity-demo", cmd_validity_demo, "validity on random solutions")
    p.add_argument("--fn", default="pi")
    sampling(p)

    p = add("perturb-demo", cmd_perturb_demo, "affine hull residuals and equivalence")
    p.add_argument("--theta", required=True)
    p.add_argument("--fn", default="pi")
    sampling(p)

    p = add("nonneg-demo", cmd_nonneg_demo, "negativity witness for GMI + theta and its correction")
    p.add_argument("--theta", required=True)
    p.add_argument("--max-k", type=int, default=1000)
    sampling(p)

    p = add("density-sample", cmd_density_sample, "graph points near a target grid (CSV)")
    p.add_argument("--xgrid", required=True, help="a:b:step")
    p.add_argument("--ygrid", required=True, help="a:b:step inside [0, 1]")
    p.add_argument("--eps", default="1/10000")
    p.add_argument("--atom", default="a1")
    p.add_argument("--witnesses", type=int, default=0,
                   help="also build discontinuity witnesses at this many x targets")
    p.add_argument("--witness-bits", type=int, default=20)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        registry = load_registry(args.registry)
        return args.handler(args, registry)
    except ConfigError as exc:
        print(f"densepi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RefinementBudgetError as exc:
        print(f"densepi: refinement budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
