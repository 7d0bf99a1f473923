"""Command-line front end for the bound evaluators and verifiers.

Exit codes: 0 when the command ran and every checked property held, 2 when a
verification ran to completion but a property was violated, 1 for usage
errors (bad flags, invalid parameter ranges, unreadable files). All reports
go to stdout as deterministic JSON unless --out is given.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .circuits import circuit_covering_log_bound
from .grassmann import (
    Projector,
    kato_unitary,
    product_covering_check,
    projector_covering_bounds,
    projector_distance,
    projector_from_subspace,
    quotient_covering_check,
    random_subspace,
)
from .linalg import (
    check_exp_lipschitz,
    matrix_exp,
    operator_norm,
    random_skew_in_ball,
)
from .metric import (
    FiniteMetricSpace,
    brute_force_covering_number,
    brute_force_packing_number,
    greedy_maximal_packing,
)
from .reports import crossover_analysis, emit_report
from .trotter import (
    CertificateViolation,
    certify_trotter,
    evolution_covering_log_bound,
    hamiltonian_from_json,
)
from .unitary_nets import build_unitary_net, empirical_covering_check

EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2

_KATO_LIMIT = 1.0 / math.sqrt(2.0)
_LEMMA_EPSILONS = (0.6, 1.0, 1.5, 2.0)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(payload, out=None, format: str = "json") -> None:
    text = emit_report(payload, format=format)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_bounds_circuit(args) -> int:
    bound = circuit_covering_log_bound(args.d, args.k, args.L, args.ng,
                                       args.eps)
    _emit(bound.as_dict())
    return EXIT_PASS


def _cmd_bounds_tevol(args) -> int:
    bound = evolution_covering_log_bound(args.L, args.d, args.k, args.K,
                                         args.z, args.h, args.T, args.eps)
    _emit(bound.as_dict())
    return EXIT_PASS


def _cmd_bounds_grassmann(args) -> int:
    bounds = projector_covering_bounds(args.n, args.m, args.eps)
    _emit(bounds.as_dict())
    return EXIT_PASS


def _cmd_crossover(args) -> int:
    report = crossover_analysis(args.d, args.k, args.eps,
                                range(args.lmin, args.lmax + 1),
                                args.resource)
    _emit(report, out=args.out, format=args.format)
    return EXIT_PASS


def _cmd_verify_trotter(args) -> int:
    with open(args.hamiltonian, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    h = hamiltonian_from_json(data)
    try:
        cert = certify_trotter(h, args.T, args.nt)
    except CertificateViolation as exc:
        _emit({
            "passed": False,
            "T": args.T,
            "N_t": args.nt,
            "measured": exc.measured,
            "bound": exc.bound,
        })
        return EXIT_VIOLATION
    payload = cert.as_dict()
    payload["passed"] = True
    _emit(payload)
    return EXIT_PASS


def _cmd_verify_lipschitz(args) -> int:
    if args.trials < 1:
        raise ValueError("trials must be positive")
    seeds = np.random.SeedSequence(args.seed).generate_state(2 * args.trials,
                                                             dtype=np.uint64)
    violations = 0
    worst = None
    worst_slack = math.inf
    for i in range(args.trials):
        x = random_skew_in_ball(args.n, args.radius, int(seeds[2 * i]))
        y = random_skew_in_ball(args.n, args.radius, int(seeds[2 * i + 1]))
        lower, mid, upper = check_exp_lipschitz(x, y)
        slack = min(mid - lower, upper - mid)
        if slack < worst_slack:
            worst_slack = slack
            worst = (lower, mid, upper)
        if lower > mid + 1e-10 or mid > upper + 1e-10:
            violations += 1
    passed = violations == 0
    _emit({
        "n": args.n,
        "radius": args.radius,
        "trials": args.trials,
        "seed": args.seed,
        "violations": violations,
        "worst_triple": {
            "lower": worst[0],
            "mid": worst[1],
            "upper": worst[2],
            "slack": worst_slack,
        },
        "passed": passed,
    })
    return EXIT_PASS if passed else EXIT_VIOLATION


def _random_projector_pair(n: int, m: int, seed_a: int, seed_b: int,
                           theta: float):
    """A rank-n projector and a rotated copy within the Kato distance limit."""
    p = projector_from_subspace(random_subspace(n, m, seed_a))
    while True:
        rot = matrix_exp(random_skew_in_ball(m, theta, seed_b).array)
        q_mat = rot @ p.matrix @ rot.conj().T
        q = Projector(0.5 * (q_mat + q_mat.conj().T))
        if projector_distance(p, q) <= _KATO_LIMIT:
            return p, q
        # too far apart: shrink the rotation until inside the limit
        theta *= 0.5


def _cmd_verify_kato(args) -> int:
    if args.trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(args.seed)
    seeds = np.random.SeedSequence(args.seed).generate_state(2 * args.trials,
                                                             dtype=np.uint64)
    failures = 0
    worst_ratio = 0.0
    worst_conj = 0.0
    for i in range(args.trials):
        theta = float(rng.uniform(0.05, 1.2))
        p, q = _random_projector_pair(args.n, args.m, int(seeds[2 * i]),
                                      int(seeds[2 * i + 1]), theta)
        dist = projector_distance(p, q)
        v = kato_unitary(p, q)
        conj = operator_norm(v.array @ p.matrix @ v.array.conj().T - q.matrix)
        dev = operator_norm(np.eye(args.m) - v.array)
        ratio = dev / dist if dist > 1e-14 else 0.0
        worst_ratio = max(worst_ratio, ratio)
        worst_conj = max(worst_conj, conj)
        if conj > 1e-8 or dev > 5.0 / math.sqrt(2.0) * dist + 1e-9:
            failures += 1
    passed = failures == 0
    _emit({
        "n": args.n,
        "m": args.m,
        "trials": args.trials,
        "seed": args.seed,
        "failures": failures,
        "worst_deviation_ratio": worst_ratio,
        "ratio_limit": 5.0 / math.sqrt(2.0),
        "worst_conjugation_defect": worst_conj,
        "passed": passed,
    })
    return EXIT_PASS if passed else EXIT_VIOLATION


def _cmd_verify_nets(args) -> int:
    net = build_unitary_net(args.n, args.eps)
    max_gap, covered = empirical_covering_check(net, args.samples, args.seed)
    _emit({
        "n": args.n,
        "epsilon": args.eps,
        "elements": len(net),
        "samples": args.samples,
        "seed": args.seed,
        "max_gap": max_gap,
        "passed": covered,
    })
    return EXIT_PASS if covered else EXIT_VIOLATION


def _lemma_product_cases() -> list[dict]:
    pairs = ((6, 5), (4, 7), (8, 3))
    cases = []
    for n1, n2 in pairs:
        s1 = FiniteMetricSpace.cycle(n1)
        s2 = FiniteMetricSpace.cycle(n2)
        for eps in _LEMMA_EPSILONS:
            report = product_covering_check(s1, s2, eps)
            cases.append(report.as_dict())
    return cases


def _lemma_quotient_cases() -> list[dict]:
    triples = ((8, 2), (12, 3), (12, 4))
    cases = []
    for order, sub in triples:
        for eps in _LEMMA_EPSILONS:
            report = quotient_covering_check(order, sub, eps)
            cases.append(report.as_dict())
    return cases


def _lemma_sandwich_cases() -> list[dict]:
    rng = np.random.default_rng(20240801)
    cases = []
    for i in range(12):
        size = int(rng.integers(4, 11))
        coords = rng.normal(size=(size, 3))
        space = FiniteMetricSpace.from_coords(coords)
        scale = float(np.median(space.matrix[space.matrix > 0]))
        for frac in (0.25, 0.5, 1.0):
            eps = scale * frac
            cover = brute_force_covering_number(space, eps)
            pack_2eps = brute_force_packing_number(space, 2.0 * eps)
            pack_eps = brute_force_packing_number(space, eps)
            greedy = greedy_maximal_packing(space, eps, seed=i)
            cases.append({
                "space": i,
                "points": size,
                "epsilon": eps,
                "pack_2eps": pack_2eps,
                "cover_eps": cover,
                "pack_eps": pack_eps,
                "greedy_certified": greedy.is_covering and greedy.is_packing,
                "passed": (pack_2eps <= cover <= pack_eps
                           and greedy.is_covering and greedy.is_packing),
            })
    return cases


def _cmd_verify_lemmas(args) -> int:
    runners = {
        "product": _lemma_product_cases,
        "quotient": _lemma_quotient_cases,
        "sandwich": _lemma_sandwich_cases,
    }
    cases = runners[args.which]()
    passed = all(case["passed"] for case in cases)
    _emit({"which": args.which, "cases": cases, "passed": passed})
    return EXIT_PASS if passed else EXIT_VIOLATION


def _int_flag(parser, name: str) -> None:
    parser.add_argument(name, type=int, required=True)


def _float_flag(parser, name: str) -> None:
    parser.add_argument(name, type=float, required=True)


def build_parser() -> _Parser:
    parser = _Parser(prog="dynnets", allow_abbrev=False,
                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    bounds = sub.add_parser("bounds", help="log-domain covering bounds")
    bsub = bounds.add_subparsers(dest="target", required=True)

    bc = bsub.add_parser("circuit", help="circuit covering upper bound")
    for flag in ("--d", "--k", "--L", "--ng"):
        _int_flag(bc, flag)
    _float_flag(bc, "--eps")
    bc.set_defaults(handler=_cmd_bounds_circuit)

    bt = bsub.add_parser("tevol", help="time-evolution covering upper bound")
    for flag in ("--d", "--k", "--L", "--K", "--z"):
        _int_flag(bt, flag)
    for flag in ("--h", "--T", "--eps"):
        _float_flag(bt, flag)
    bt.set_defaults(handler=_cmd_bounds_tevol)

    bg = bsub.add_parser("grassmann", help="projector covering bounds")
    for flag in ("--n", "--m"):
        _int_flag(bg, flag)
    _float_flag(bg, "--eps")
    bg.set_defaults(handler=_cmd_bounds_grassmann)

    cx = sub.add_parser("crossover", help="minimal resource vs system size")
    for flag in ("--d", "--k", "--lmin", "--lmax"):
        _int_flag(cx, flag)
    _float_flag(cx, "--eps")
    cx.add_argument("--resource", choices=("circuit", "time"), required=True)
    cx.add_argument("--out", default=None)
    cx.add_argument("--format", choices=("json", "csv"), default="json")
    cx.set_defaults(handler=_cmd_crossover)

    verify = sub.add_parser("verify", help="property verifications")
    vsub = verify.add_subparsers(dest="check", required=True)

    vt = vsub.add_parser("trotter", help="certify a Trotter run")
    vt.add_argument("--hamiltonian", required=True)
    _float_flag(vt, "--T")
    _int_flag(vt, "--nt")
    vt.add_argument("--seed", type=int, default=None,
                    help="accepted for interface stability; the check is "
                         "deterministic")
    vt.set_defaults(handler=_cmd_verify_trotter)

    vl = vsub.add_parser("lipschitz", help="exp-map distortion bounds")
    for flag in ("--n", "--trials", "--seed"):
        _int_flag(vl, flag)
    _float_flag(vl, "--radius")
    vl.set_defaults(handler=_cmd_verify_lipschitz)

    vk = vsub.add_parser("kato", help="projector-pair conjugating unitary")
    for flag in ("--n", "--m", "--trials", "--seed"):
        _int_flag(vk, flag)
    vk.set_defaults(handler=_cmd_verify_kato)

    vn = vsub.add_parser("nets", help="unitary net covering check")
    for flag in ("--n", "--samples", "--seed"):
        _int_flag(vn, flag)
    _float_flag(vn, "--eps")
    vn.set_defaults(handler=_cmd_verify_nets)

    vlem = vsub.add_parser("lemmas", help="exact small-instance lemma checks")
    vlem.add_argument("--which", choices=("product", "quotient", "sandwich"),
                      required=True)
    vlem.set_defaults(handler=_cmd_verify_lemmas)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"dynnets: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
