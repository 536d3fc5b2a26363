"""Command-line front end: one subcommand per experiment, TSV or JSON-lines output.

Exit codes: 0 ok, 2 invalid input, 3 factorization budget exhausted,
4 rank-deficient eta.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .fmt import trunc_decimals, trunc_sci
from .errors import BudgetExceeded, FrobordError, RankDeficient
from .forbidden import admissible_divisors, candidate_set, forbidden_divisors, impossible_divisors
from .intarith import is_prime
from .numfield import AlgebraicNumber, FieldSpec, house, resolve_spec
from .order import lower_bound_order, order_mod_frakp, order_mod_p, residual_factor_bound, verify_forbidden
from .primes import iter_primes
from .scan import density, exceptional, quadratic
from .scan.records import ScanRecord

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_RANK = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


# -- argument parsing ------------------------------------------------------------


def parse_eta(text: str, spec: FieldSpec) -> AlgebraicNumber:
    """Constant-first coefficients, e.g. "5,8" for 8x + 5, "1,1/2" for (1 + x)/2."""
    body, _, den = text.partition("/")
    try:
        coeffs = [int(c) for c in body.split(",") if c.strip() != ""]
        nu = int(den) if den else 1
    except ValueError as exc:
        raise ConfigError(f"bad eta {text!r}: {exc}") from exc
    if not coeffs or len(coeffs) > spec.degree:
        raise ConfigError(f"eta needs 1..{spec.degree} coefficients, got {len(coeffs)}")
    if nu <= 0:
        raise ConfigError("denominator must be positive")
    return AlgebraicNumber(spec, tuple(coeffs), nu)


def parse_family(text: str, spec: FieldSpec) -> list:
    """Constant-first items, each an integer or an inclusive range a:b, e.g. "-10:10,-10:10,1"."""
    axes = []
    for item in text.split(","):
        item = item.strip()
        try:
            if ":" in item[1:]:
                cut = item.index(":", 1)
                a, b = int(item[:cut]), int(item[cut + 1 :])
                if a > b:
                    raise ConfigError(f"empty range {item!r}")
                axes.append(range(a, b + 1))
            else:
                axes.append(int(item))
        except ValueError as exc:
            raise ConfigError(f"bad family item {item!r}") from exc
    if len(axes) != spec.degree:
        raise ConfigError(f"family needs {spec.degree} items, got {len(axes)}")
    return exceptional.eta_family(spec, axes)


def parse_filter(text: str, spec: FieldSpec):
    if text == "inert":
        return exceptional.inert_filter(spec)
    if text == "sqrt17":
        return exceptional.sqrt17_filter
    if text.startswith("np:"):
        try:
            return exceptional.residue_degree_filter(int(text[3:]))
        except ValueError as exc:
            raise ConfigError(f"bad filter {text!r}") from exc
    raise ConfigError(f"unknown filter {text!r} (use inert, np:K or sqrt17)")


def _positive(text: str) -> int:
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _int(text: str) -> int:
    try:
        return int(float(text)) if "e" in text.lower() else int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from exc


def _prime_list(text: str) -> list[int]:
    try:
        out = [_int(t) for t in text.split(",")]
    except argparse.ArgumentTypeError:
        raise
    for p in out:
        if not is_prime(p):
            raise argparse.ArgumentTypeError(f"{p} is not prime")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=_positive, default=1, help="worker processes (output does not depend on it)")
    common.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    common.add_argument("--seed", type=_int, default=0, help="seed for rho factorization")

    ap = argparse.ArgumentParser(prog="frobord", description="Orders of algebraic numbers modulo primes and forbidden divisors.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forbidden", parents=[common], help="forbidden divisors of p^h - 1")
    p.add_argument("--h", type=_positive, required=True)
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--show", choices=("divisors", "values", "candidates"), default="divisors",
                   help="every divisor with its status, the D_{h,delta}(p) values, or the candidate set below p")

    p = sub.add_parser("order", parents=[common], help="order of eta modulo p with gcd profile")
    p.add_argument("--spec", required=True)
    p.add_argument("--eta", required=True)
    p.add_argument("--p", type=_prime_list, required=True, help="prime or comma-separated primes")

    p = sub.add_parser("frakp-order", parents=[common], help="orders modulo each prime above p")
    p.add_argument("--spec", required=True)
    p.add_argument("--eta", required=True)
    p.add_argument("--p", type=_prime_list, required=True)

    p = sub.add_parser("bound", parents=[common], help="Archimedean lower bound for orders")
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--nu", type=_positive)
    p.add_argument("--c0", type=float)
    p.add_argument("--spec")
    p.add_argument("--eta")
    p.add_argument("--delta", type=_positive, help="bound the residual factor r | Phi_delta(p) instead")
    p.add_argument("--generator", type=int, help="index of the conjugation map used as s")

    p = sub.add_parser("verify", parents=[common], help="check orders avoid every forbidden divisor")
    p.add_argument("--spec", required=True)
    p.add_argument("--eta", required=True)
    p.add_argument("--lo", type=_int, default=2)
    p.add_argument("--bound", type=_int, required=True)
    p.add_argument("--allow", default="", help="comma-separated primes expected to violate")

    scan = sub.add_parser("scan", help="batch experiments")
    ss = scan.add_subparsers(dest="scan", required=True)

    p = ss.add_parser("exceptional", parents=[common], help="primes with o_p(eta) <= p")
    p.add_argument("--spec", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--eta")
    g.add_argument("--family")
    p.add_argument("--lo", type=_int, default=2)
    p.add_argument("--bound", type=_int, required=True)
    p.add_argument("--filter", default="inert")
    p.add_argument("--raw", action="store_true", help="also list every multiple d <= p of the order with d | p^n_p - 1")
    p.add_argument("--paper-dedup", action="store_true", help="one eta per (p, order), drop multiples of kept orders")
    p.add_argument("--allow-degenerate", action="store_true")

    p = ss.add_parser("density", parents=[common], help="least C(p) over a prime range")
    p.add_argument("--np", dest="n_p", type=_positive, required=True)
    p.add_argument("--gp", dest="g_p", type=_positive, default=1)
    p.add_argument("--lo", type=_int, required=True)
    p.add_argument("--hi", type=_int, required=True)
    p.add_argument("--kappa", type=Fraction, default=Fraction(1))
    p.add_argument("--weight", choices=("power", "phi"), default="power")
    p.add_argument("--forbidden", choices=("theorem", "program"), default="theorem")
    p.add_argument("--stream", action="store_true", help="one row per prime")

    p = ss.add_parser("quadstat", parents=[common], help="Density, Delta and C for given primes")
    p.add_argument("--p", type=_prime_list, required=True)

    for name, text in (("audit", "primes with 3*phi_sum < p - 1"), ("equality", "primes with 3*phi_sum = p - 1")):
        p = ss.add_parser(name, parents=[common], help=text)
        p.add_argument("--lo", type=_int, default=2)
        p.add_argument("--hi", type=_int, required=True)

    p = ss.add_parser("friable", parents=[common], help="p = 2^a 3^b + 1 with (p+1)/2 prime and equality")
    p.add_argument("--bound", type=_int, required=True, help="largest T = p - 1")

    p = ss.add_parser("cmax", parents=[common], help="successive maxima of C = Density * p / log p")
    p.add_argument("--lo", type=_int, default=3)
    p.add_argument("--bound", type=_int, required=True)
    return ap


# -- commands -------------------------------------------------------------------


def _cmd_forbidden(a):
    if a.h > 64:
        raise ConfigError("h > 64 is beyond desk scale")
    params = {"h": a.h, "p": a.p}
    if a.show == "values":
        recs = [ScanRecord("forbidden", a.p, ("value", e.delta, e.value, str(e.polynomial)), params)
                for e in forbidden_divisors(a.h, a.p).entries]
        return ("delta", "value", "polynomial"), recs
    if a.show == "candidates":
        cs = candidate_set(a.h, a.p, budget=None, seed=a.seed)
        return ("divisor",), [ScanRecord("forbidden", a.p, ("candidate", d), params) for d in cs.divisors]
    possible, _ = admissible_divisors(a.h, a.p, seed=a.seed)
    bad = impossible_divisors(a.h, a.p, seed=a.seed)
    rows = sorted([(d, "impossible") for d in bad] + [(d, "possible") for d in possible])
    return ("divisor", "status"), [ScanRecord("forbidden", a.p, (status, d), params) for d, status in rows]


def _cmd_order(a):
    spec = resolve_spec(a.spec)
    eta = parse_eta(a.eta, spec)
    recs = []
    for p in a.p:
        r = order_mod_p(eta, p, seed=a.seed)
        recs.append(ScanRecord("order", p, (r.order, r.gcd_profile, r.forbidden_hit), {"spec": spec.name, "eta": str(eta)}))
    deltas = sorted({d for rec in recs for d, _ in rec.payload[1]})
    for rec in recs:
        rec.parameters["deltas"] = deltas
    return ("p", "order", *(f"gcd_{d}" for d in deltas)), recs


def _cmd_frakp(a):
    spec = resolve_spec(a.spec)
    eta = parse_eta(a.eta, spec)
    recs = []
    for p in a.p:
        for deg, o in order_mod_frakp(spec.polynomial, eta, p, seed=a.seed):
            recs.append(ScanRecord("frakp", p, (deg, o), {"spec": spec.name, "eta": str(eta)}))
    return ("p", "degree", "order"), recs


def _cmd_bound(a):
    if a.spec and a.eta:
        spec = resolve_spec(a.spec)
        eta = parse_eta(a.eta, spec)
        if a.delta is not None:
            b = residual_factor_bound(spec, eta, a.p, a.delta, generator=a.generator)
            return ("p", "delta", "bound"), [ScanRecord("bound", a.p, ("residual", a.delta, b), {})]
        nu, c0 = eta.denominator, house(eta)
    elif a.nu is not None and a.c0 is not None:
        nu, c0 = a.nu, a.c0
    else:
        raise ConfigError("give --spec and --eta, or --nu and --c0")
    return ("p", "nu", "c0", "bound"), [ScanRecord("bound", a.p, ("order", nu, c0, lower_bound_order(a.p, nu, c0)), {})]


def _cmd_verify(a):
    spec = resolve_spec(a.spec)
    eta = parse_eta(a.eta, spec)
    allow = [int(x) for x in a.allow.split(",") if x.strip()]
    rep = verify_forbidden(eta, iter_primes(a.lo, a.bound), allow, seed=a.seed)
    params = {"spec": spec.name, "eta": str(eta), "checked": rep.checked}
    recs = [ScanRecord("audit", p, (o, d, "allowed" if p in rep.allowed else "unexpected"), params) for p, o, d in rep.violations]
    return ("p", "order", "delta", "status"), recs


def _cmd_exceptional(a):
    spec = resolve_spec(a.spec)
    keep = parse_filter(a.filter, spec)
    family = [parse_eta(a.eta, spec)] if a.eta else parse_family(a.family, spec)
    recs = exceptional.exceptional_scan(spec, family, a.bound, keep, lo=a.lo, allow_degenerate=a.allow_degenerate,
                                        workers=a.workers, seed=a.seed)
    if a.paper_dedup:
        recs = exceptional.dedup_paper(recs, spec)
    if a.raw:
        recs = exceptional.expand_multiples(recs, spec, seed=a.seed)
    return ("eta", "p", "order"), recs


def _cmd_density(a):
    if a.lo > a.hi:
        raise ConfigError("empty range")
    res = density.density_scan(a.n_p, a.g_p, a.lo, a.hi, kappa=a.kappa, weight=a.weight, stream=a.stream,
                               workers=a.workers, seed=a.seed, forbidden=a.forbidden)
    params = {"n_p": a.n_p, "g_p": a.g_p, "lo": a.lo, "hi": a.hi, "kappa": str(a.kappa), "weight": a.weight}
    if a.stream:
        return ("p", "S", "C"), [ScanRecord("density", r.p, (r.s, r.c), params) for r in res.rows]
    return ("p", "C_min"), [ScanRecord("density", res.argmin or 0, (None, res.c_min), params)]


def _cmd_quadstat(a):
    return ("p", "density", "delta", "C"), quadratic.quadstat_records(a.p, seed=a.seed)


def _cmd_audit(a):
    ps = quadratic.third_bound_audit(a.lo, a.hi, workers=a.workers, seed=a.seed)
    return ("p",), [ScanRecord("audit", p, (), {"lo": a.lo, "hi": a.hi}) for p in ps]


def _cmd_equality(a):
    ps = quadratic.equality_scan(a.lo, a.hi, workers=a.workers, seed=a.seed)
    return ("p",), [ScanRecord("equality", p, (), {"lo": a.lo, "hi": a.hi}) for p in ps]


def _cmd_friable(a):
    rows = quadratic.friable_search(a.bound, seed=a.seed)
    return ("p_minus_1", "p_plus_1", "p"), [
        ScanRecord("friable", f.p, (f.p_minus_one.pari(), f.p_plus_one.pari()), {"bound": a.bound}) for f in rows]


def _cmd_cmax(a):
    rows = quadratic.cmax_scan(a.bound, lo=a.lo, workers=a.workers, seed=a.seed)
    return ("p", "C", "C_over_log_p"), [ScanRecord("cmax", p, (c, r), {"bound": a.bound}) for p, c, r in rows]


# -- output ------------------------------------------------------------------------


def _tsv_row(rec: ScanRecord) -> list[str]:
    k, p, pl = rec.kind, rec.p, rec.payload
    if k == "forbidden":
        return [str(x) for x in pl[1:]] if pl[0] == "value" else [str(pl[1])] + ([pl[0]] if pl[0] != "candidate" else [])
    if k == "order":
        prof = dict(pl[1])
        return [str(p), str(pl[0])] + [str(prof.get(d, "NA")) for d in rec.parameters.get("deltas", sorted(prof))]
    if k == "frakp":
        return [str(p), str(pl[0]), str(pl[1])]
    if k == "bound":
        if pl[0] == "residual":
            return [str(p), str(pl[1]), f"{pl[2]:.6f}"]
        return [str(p), str(pl[1]), f"{pl[2]:.10g}", f"{pl[3]:.6f}"]
    if k == "audit":
        return [str(p)] + [str(x) for x in pl]
    if k == "exceptional":
        return [",".join(str(c) for c in pl[0]), str(p), str(pl[1])]
    if k == "density":
        if pl[0] is None:
            return [str(p), trunc_decimals(pl[1], 10)]
        return [str(p), str(pl[0]), "NA" if pl[1] is None else trunc_decimals(pl[1], 10)]
    if k == "quadstat":
        return [str(p), trunc_sci(pl[0], 3), trunc_decimals(pl[1], 4), trunc_decimals(pl[2], 4)]
    if k == "equality":
        return [str(p)]
    if k == "friable":
        return [pl[0], pl[1], str(p)]
    if k == "cmax":
        return [str(p), trunc_decimals(pl[0], 10), trunc_decimals(pl[1], 10)]
    raise ValueError(k)


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def emit(header, records, fmt: str, out=sys.stdout):
    if fmt == "jsonl":
        for r in records:
            out.write(json.dumps({"kind": r.kind, "p": r.p, "payload": _jsonable(r.payload), "parameters": r.parameters},
                                 sort_keys=True) + "\n")
        return
    out.write("\t".join(header) + "\n")
    for r in records:
        out.write("\t".join(_tsv_row(r)) + "\n")


def _tupled(x):
    if isinstance(x, list):
        return tuple(_tupled(v) for v in x)
    return x


def parse_jsonl(text: str) -> list[ScanRecord]:
    """Inverse of the json-lines output."""
    out = []
    for line in text.splitlines():
        if line.strip():
            d = json.loads(line)
            out.append(ScanRecord(d["kind"], d["p"], _tupled(d["payload"]), d["parameters"]))
    return out


COMMANDS = {
    "forbidden": _cmd_forbidden,
    "order": _cmd_order,
    "frakp-order": _cmd_frakp,
    "bound": _cmd_bound,
    "verify": _cmd_verify,
    ("scan", "exceptional"): _cmd_exceptional,
    ("scan", "density"): _cmd_density,
    ("scan", "quadstat"): _cmd_quadstat,
    ("scan", "audit"): _cmd_audit,
    ("scan", "equality"): _cmd_equality,
    ("scan", "friable"): _cmd_friable,
    ("scan", "cmax"): _cmd_cmax,
}


_VALUE_OPTIONS = ("--eta", "--family")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--family -10:10,...`` into ``--family=-10:10,...`` so argparse does not read a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1][:1] == "-" and argv[i + 1][1:2].isdigit():
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    key = ("scan", a.scan) if a.command == "scan" else a.command
    try:
        header, records = COMMANDS[key](a)
    except BudgetExceeded as exc:
        err.write(f"frobord: budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except RankDeficient as exc:
        err.write(f"frobord: rank deficient: {exc}\n")
        return EXIT_RANK
    except (FrobordError, ConfigError, ValueError, OSError) as exc:
        err.write(f"frobord: {type(exc).__name__}: {exc}\n")
        return EXIT_CONFIG
    emit(header, records, a.format, out)
    out.flush()
    return EXIT_OK


def main(argv=None):
    try:
        sys.exit(run(argv))
    except KeyboardInterrupt:
        sys.exit(130)


if __name__ == "__main__":
    main()
