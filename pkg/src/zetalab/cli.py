"""Command-line front end: ``zetalab <group> <command> [flags]``.

Exit status 0 on success, 2 on invalid input, 3 on numeric failure. Errors
print one line ``zetalab-error kind=<kind> type=<Exception> message=<text>``
on stderr.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import emit
from .errors import DomainError
from .specfun import PrecisionBudget

OUTPUT_DIR_ENV = "ZETALAB_OUTPUT_DIR"
EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3
GLOBAL_KEYS = ("output", "seed", "config", "workers", "abs_tol", "rel_tol", "max_terms")


class UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


@dataclasses.dataclass
class RunConfig:
    subcommand: str
    parameters: dict
    output_path: str | None
    seed: int
    budget: PrecisionBudget | None
    workers: int = 1


# ---------------------------------------------------------------- helpers

def _zero_table(p, T):
    from .zeros import load_zero_table, scan_zeros

    if p.get("zeros"):
        table = load_zero_table(p["zeros"])
        if table.t_max < T:
            raise DomainError(f"zero table covers up to {table.t_max}, need {T}")
        return table
    kw = {"budget": p["_budget"]} if p["_budget"] else {}
    return scan_zeros(max(T, 14.5), workers=p["_workers"], **kw)


def _budget_kw(p):
    return {"budget": p["_budget"]} if p["_budget"] else {}


def _csv(header, rows):
    return ("csv", header, rows)


def _json(payload, text=None):
    return ("json", payload, text)


# ---------------------------------------------------------------- zeta

def cmd_zeta_eval(p):
    from .zeta import zeta

    r = zeta(complex(p["sigma"], p["t"]), **_budget_kw(p))
    return _json(r, f"{r.value.real!r} {r.value.imag!r}")


def cmd_zeta_z(p):
    from .zeta import hardy_z_values

    if not (0 < p["t_lo"] < p["t_hi"] and p["step"] > 0):
        raise DomainError("need 0 < t_lo < t_hi and step > 0")
    n = int(math.floor((p["t_hi"] - p["t_lo"]) / p["step"] + 1e-9)) + 1
    t = p["t_lo"] + p["step"] * np.arange(n)
    z = hardy_z_values(t, **_budget_kw(p))
    return _csv(("t", "Z"), list(zip(t.tolist(), z.tolist())))


def cmd_zeta_funceq(p):
    from .rmt import SplitMix64
    from .zeta import functional_equation_defect

    if p["points"] < 1:
        raise DomainError("points must be >= 1")
    u = SplitMix64(p["_seed"], 0).uniform(2 * p["points"]).reshape(-1, 2)
    sig = -0.5 + 2.0 * u[:, 0]
    t = 1.0 + 99.0 * u[:, 1]
    rows = [(float(a), float(b), functional_equation_defect(complex(a, b)))
            for a, b in zip(sig, t)]
    worst = max(r[2] for r in rows)
    return ("csv", ("sigma", "t", "defect"), rows, f"max_defect={worst!r}")


# ---------------------------------------------------------------- zeros

def cmd_zeros_scan(p):
    from .zeros import scan_zeros

    if not p["t_max"] > 14:
        raise DomainError(f"t_max must exceed 14, got {p['t_max']}")
    table = scan_zeros(p["t_max"], p["grid_step"], workers=p["_workers"], **_budget_kw(p))
    return ("zeros", table)


def cmd_zeros_report(p):
    from .zeros import zero_counts_report

    table = _zero_table(p, p["T"])
    r = zero_counts_report(table, p["T"])
    return _json(r, f"count={r.count} main_term={r.main_term!r} defect={r.defect!r}")


def cmd_zeros_littlewood(p):
    from .zeros import littlewood_balance

    table = _zero_table(p, p["T"])
    r = littlewood_balance(p["sigma0"], p["sigma1"], p["T"], table)
    return _json(r, f"residual={r.residual!r}")


def cmd_zeros_io(p):
    from .zeros import load_zero_table

    table = load_zero_table(p["input"])
    return ("zeros", table)


# ---------------------------------------------------------------- primes

def _tables(limit):
    from .primes import build_tables

    return build_tables(limit)


def cmd_primes_tables(p):
    t = _tables(p["limit"])
    rows = [(n, float(t.mangoldt[n]), int(t.moebius[n])) for n in range(1, t.limit + 1)]
    return _csv(("n", "mangoldt", "moebius"), rows)


def cmd_primes_psi(p):
    from .primes import summatory

    r = summatory(_tables(max(2, int(p["x"]))), p["x"])
    return _json(r, f"psi={r.psi!r} pi={r.pi}")


def cmd_primes_explicit(p):
    from .primes import explicit_formula_psi

    table = _zero_table(p, p["T"])
    r = explicit_formula_psi(p["x"], p["T"], table, _tables(max(10, int(p["x"]) + 1)))
    return _json(r, f"residual={r.residual!r}")


def cmd_primes_gaps(p):
    from .primes import prime_gap_scan

    r = prime_gap_scan(_tables(int(p["X"])), int(p["X"]))
    return _json(r, f"max_gap={r.max_gap} at_prime={r.at_prime}")


# ---------------------------------------------------------------- moments

def _quad_budget(p):
    from .moments import QUAD_BUDGET

    return p["_budget"] or QUAD_BUDGET


def cmd_moments_integral(p):
    from .moments import MOMENT_CSV_HEADER, moment_rows

    Ts = _floats(p["T"])
    zeros = _zero_table(p, max(Ts)) if p["sigma"] == 0.5 and max(Ts) > 14 else None
    rows = moment_rows([p["k"]], p["sigma"], Ts, _quad_budget(p), zeros=zeros)
    return _csv(MOMENT_CSV_HEADER, rows)


def cmd_moments_dirichlet(p):
    from .moments import DirichletPolynomial, dirichlet_poly_mean

    poly = DirichletPolynomial(_floats(p["coefficients"]))
    r = dirichlet_poly_mean(poly, p["sigma"], p["T"], _quad_budget(p))
    return _json(r, f"quadrature={r.quadrature!r} diagonal={r.diagonal!r}")


def cmd_moments_ak(p):
    from .moments import arithmetic_factor_ak

    r = arithmetic_factor_ak(p["k"], p["prime_cutoff"])
    return _json(r, f"{r.value!r}")


def cmd_moments_gk(p):
    from .moments import gk_exact

    g = gk_exact(p["k"])
    text = str(g.numerator) if g.denominator == 1 else str(g)
    return _json({"k": p["k"], "g_k": text}, text)


def cmd_moments_conjectured(p):
    from .moments import conjectured_moment

    v = conjectured_moment(p["k"], p["T"], p["prime_cutoff"])
    return _json({"k": p["k"], "T": p["T"], "value": v}, f"{v!r}")


def cmd_moments_mollified(p):
    from .moments import MollifierSpec, mollified_moment

    spec = MollifierSpec(N=p["N"], theta=p["theta"], shift_a=p["shift_a"])
    zeros = _zero_table(p, p["T"]) if p["sigma"] == 0.5 and p["T"] > 14 else None
    r = mollified_moment(spec, p["sigma"], p["T"], _quad_budget(p), zeros=zeros)
    return _json(r, f"{r.value!r}")


# ---------------------------------------------------------------- paircorr

def cmd_paircorr_F(p):
    from .paircorr import form_factor_rows

    table = _zero_table(p, p["T"])
    rows = form_factor_rows(_floats(p["alphas"]), table, p["T"], p["cutoff"])
    return _csv(("alpha", "F_empirical", "F_theoretical"), rows)


def cmd_paircorr_kernel(p):
    from .paircorr import KernelSpec, kernel_pair_sum

    table = _zero_table(p, p["T"])
    r = kernel_pair_sum(KernelSpec("fejer", p["beta"]), table, p["T"])
    return _json(r, f"ratio={r.empirical / r.predicted!r}")


def cmd_paircorr_bound(p):
    from fractions import Fraction

    from .paircorr import fejer_simple_zero_bound

    beta = Fraction(p["beta"]).limit_denominator(10**6) if p["exact"] else float(p["beta"])
    r = fejer_simple_zero_bound(beta)
    return _json({"beta": str(beta), "pair_bound_coeff": str(r.pair_bound_coeff),
                  "simple_fraction": str(r.simple_fraction)},
                 f"{r.pair_bound_coeff} {r.simple_fraction}")


def cmd_paircorr_histogram(p):
    from .paircorr import histogram_rows, pair_histogram

    table = _zero_table(p, p["T"])
    h = pair_histogram(table, p["T"], p["x_max"], p["bins"], unfold=p["unfold"],
                       weighted=p["weighted"])
    return ("csv", ("bin_left", "bin_right", "count", "reference"), histogram_rows(h),
            f"sup_distance={h.sup_distance()!r}")


def cmd_paircorr_nlevel(p):
    from .paircorr import n_level_form_factor

    v = n_level_form_factor(_floats(p["points"]))
    return _json({"points": _floats(p["points"]), "value": v}, f"{v!r}")


def cmd_paircorr_dirichlet_mean(p):
    from .paircorr import montgomery_dirichlet_mean

    cutoff = p["tail_cutoff"] or int(math.ceil(100 * p["x"]))
    r = montgomery_dirichlet_mean(p["x"], p["T"], _tables(cutoff), cutoff, _quad_budget(p))
    return _json(r, f"{r.value!r}")


# ---------------------------------------------------------------- rmt

def cmd_rmt_gue(p):
    from .rmt import eigen_hermitian, sample_gue

    ev = eigen_hermitian(sample_gue(p["N"], p["_seed"])).angles
    return _csv(("index", "eigenvalue"), list(enumerate(ev.tolist())))


def cmd_rmt_cue(p):
    from .rmt import eigenangles_unitary, sample_cue

    a = eigenangles_unitary(sample_cue(p["N"], p["_seed"]), p["_seed"]).angles
    return _csv(("index", "angle"), list(enumerate(a.tolist())))


def cmd_rmt_moments(p):
    from .rmt import MOMENT_CSV_HEADER, cue_moment_mc

    rows = []
    for N in _floats(p["N"]):
        r = cue_moment_mc(int(N), p["k"], p["samples"], p["_seed"])
        rows.append((int(N), p["k"], p["samples"], r.value, r.est_error))
    return _csv(MOMENT_CSV_HEADER, rows)


def cmd_rmt_paircorr(p):
    from .paircorr import histogram_rows
    from .rmt import eigen_pair_correlation

    h = eigen_pair_correlation(p["ensemble"], p["N"], p["samples"], p["x_max"], p["bins"],
                               p["_seed"])
    return ("csv", ("bin_left", "bin_right", "count", "reference"), histogram_rows(h),
            f"sup_distance={h.sup_distance()!r}")


# ---------------------------------------------------------------- hybrid

def _hybrid_config(p):
    from .hybrid import HybridConfig

    return HybridConfig(p["x"], p["sign"], p["argument"], p["window"])


def cmd_hybrid_compare(p):
    from .hybrid import COMPARE_CSV_HEADER, hybrid_compare

    cfg = _hybrid_config(p)
    table = _zero_table(p, p["t_hi"] + cfg.zero_window + 1.0)
    r = hybrid_compare(p["t_lo"], p["t_hi"], p["step"], cfg, table,
                       _tables(max(2, int(p["x"]))))
    return ("csv", COMPARE_CSV_HEADER, r.rows(),
            f"correlation={r.correlation_of_moduli!r} "
            f"max_log_ratio={r.max_log_ratio_away_from_zeros!r}")


def cmd_hybrid_approx(p):
    from .hybrid import approx_form

    v = approx_form(p["t"], _hybrid_config(p), _tables(max(2, int(p["x"]))))
    return _json({"t": p["t"], "value": v}, f"{v.real!r} {v.imag!r}")


def cmd_hybrid_splitting(p):
    from .hybrid import splitting_experiment

    zeros = _zero_table(p, p["T"]) if p["k"] > 0 else None
    r = splitting_experiment(p["k"], p["T"], p["x"], p["N"], p["samples"], p["_seed"],
                             budget=_quad_budget(p), zeros=zeros)
    return _json(r, f"ratio={r.ratio!r}")


# ---------------------------------------------------------------- command table

F = float
I = int
COMMANDS = {
    "zeta": {
        "eval": (cmd_zeta_eval, "zeta(s) by Euler-Maclaurin: sum_{n<N} n^{-s} + N^{1-s}/(s-1) "
                 "+ N^{-s}/2 + sum_j B_2j/(2j)! (s)_{2j-1} N^{-s-2j+1}",
                 [("--sigma", F, 0.5), ("--t", F, 14.134725)]),
        "z": (cmd_zeta_z, "Hardy Z(t) = exp(i theta(t)) zeta(1/2 + it), "
              "theta(t) = arg Gamma(1/4 + it/2) - (t/2) log pi",
              [("--t-lo", F, 10.0), ("--t-hi", F, 50.0), ("--step", F, 0.1)]),
        "funceq": (cmd_zeta_funceq, "defect |xi(s) - xi(1-s)|/max, "
                   "xi(s) = pi^{-s/2} Gamma(s/2) zeta(s), random s in -0.5<sigma<1.5, 1<t<100",
                   [("--points", I, 200)]),
    },
    "zeros": {
        "scan": (cmd_zeros_scan, "zeros of Z(t) on (0, t_max] by sign changes and bisection; "
                 "count checked against (T/2pi) log(T/2pi) - T/2pi",
                 [("--t-max", F, 100.0), ("--grid-step", F, 0.05)]),
        "report": (cmd_zeros_report, "N(T) versus (T/2pi) log(T/2pi) - T/2pi",
                   [("--T", F, 100.0), ("--zeros", str, None)]),
        "littlewood": (cmd_zeros_littlewood,
                       "2 pi sum_{beta > sigma0} (beta - sigma0) = int_0^T log|zeta(sigma0+it)| dt "
                       "- int log|zeta(sigma1+it)| dt + int_{sigma0}^{sigma1} "
                       "(arg zeta(sigma+iT) - arg zeta(sigma)) d sigma",
                       [("--sigma0", F, 0.25), ("--sigma1", F, 2.0), ("--T", F, 50.0),
                        ("--zeros", str, None)]),
        "io": (cmd_zeros_io, "validate and rewrite a zero table (one ordinate per line)",
               [("--input", str, None)]),
    },
    "primes": {
        "tables": (cmd_primes_tables, "sieved Lambda(n) and mu(n) for n <= limit",
                   [("--limit", I, 100)]),
        "psi": (cmd_primes_psi, "psi(x) = sum_{n <= x} Lambda(n) and pi(x)",
                [("--x", F, 100.0)]),
        "explicit": (cmd_primes_explicit,
                     "psi(x) = x - sum_{|gamma| <= T} x^rho/rho - log 2 pi "
                     "- (1/2) log(1 - x^{-2})",
                     [("--x", F, 100.5), ("--T", F, 100.0), ("--zeros", str, None)]),
        "gaps": (cmd_primes_gaps, "max gap p_{n+1} - p_n below X and gap/log^2 p",
                 [("--X", I, 10**6)]),
    },
    "moments": {
        "integral": (cmd_moments_integral, "I_k(sigma, T) = int_0^T |zeta(sigma+it)|^{2k} dt",
                     [("--k", F, 1.0), ("--sigma", F, 0.5), ("--T", str, "100"),
                      ("--zeros", str, None)]),
        "dirichlet": (cmd_moments_dirichlet,
                      "int_0^T |sum a_n n^{-sigma-it}|^2 dt = T sum |a_n|^2 n^{-2 sigma} "
                      "+ off-diagonal",
                      [("--coefficients", str, "1,1"), ("--sigma", F, 0.5), ("--T", F, 100.0)]),
        "ak": (cmd_moments_ak, "a_k = prod_p (1-1/p)^{(k-1)^2} sum_r C(k-1,r)^2 p^{-r}",
               [("--k", I, 2), ("--prime-cutoff", I, 10**6)]),
        "gk": (cmd_moments_gk, "g_k = (k^2)! prod_{j=0}^{k-1} j!/(j+k)!", [("--k", I, 3)]),
        "conjectured": (cmd_moments_conjectured,
                        "I_k(1/2,T) ~ (a_k g_k / Gamma(k^2+1)) T log^{k^2} T",
                        [("--k", I, 2), ("--T", F, 10**4), ("--prime-cutoff", I, 10**6)]),
        "mollified": (cmd_moments_mollified,
                      "int_0^T |zeta M|^2 dt, M(s) = sum_{n<=N} mu(n) n^{a-1/2} "
                      "(1 - log n/log N) n^{-s}",
                      [("--N", I, 20), ("--theta", F, 0.5), ("--shift-a", F, 0.5),
                       ("--sigma", F, 0.5), ("--T", F, 200.0), ("--zeros", str, None)]),
    },
    "paircorr": {
        "F": (cmd_paircorr_F, "F(alpha) = (T log T/2pi)^{-1} sum_{gamma,gamma'} "
              "T^{i alpha(gamma-gamma')} w(gamma-gamma'), w(u) = 4/(4+u^2)",
              [("--T", F, 1000.0), ("--alphas", str, "0.3,0.5,0.7"), ("--cutoff", F, None),
               ("--zeros", str, None)]),
        "kernel": (cmd_paircorr_kernel,
                   "sum r((gamma-gamma') log T/2pi) w(gamma-gamma') vs "
                   "(1/beta + beta/3)(T/2pi) log T, r(u) = (sin pi beta u/pi beta u)^2",
                   [("--beta", F, 1.0), ("--T", F, 1000.0), ("--zeros", str, None)]),
        "bound": (cmd_paircorr_bound, "coefficient 1/beta + beta/3, simple fraction 2 - coeff",
                  [("--beta", F, 1.0), ("--exact", bool, True)]),
        "histogram": (cmd_paircorr_histogram, "pair gaps against 1 - (sin pi x/pi x)^2",
                      [("--T", F, 1000.0), ("--x-max", F, 3.0), ("--bins", I, 30),
                       ("--unfold", str, "local"), ("--weighted", bool, False),
                       ("--zeros", str, None)]),
        "nlevel": (cmd_paircorr_nlevel,
                   "det[sin pi(x_i-x_j)/pi(x_i-x_j)], diagonal entries 1",
                   [("--points", str, "0,0.7")]),
        "dirichlet-mean": (cmd_paircorr_dirichlet_mean,
                           "(1/x) int_0^T |sum_{n<=x} Lambda(n)(x/n)^{-1/2+it} "
                           "+ sum_{n>x} Lambda(n)(x/n)^{3/2+it}|^2 dt",
                           [("--x", F, 44.7), ("--T", F, 2000.0), ("--tail-cutoff", I, None)]),
    },
    "rmt": {
        "gue": (cmd_rmt_gue, "GUE density prod (1/sqrt pi) e^{-H_jj^2} "
                "prod (2/pi) e^{-2|H_jk|^2}; eigenvalues by cyclic Jacobi",
                [("--N", I, 10)]),
        "cue": (cmd_rmt_cue, "Haar unitary (QR of complex Ginibre, phases fixed); "
                "eigenangles via H = i(I-U)(I+U)^{-1}", [("--N", I, 10)]),
        "moments": (cmd_rmt_moments, "E |Z_N(U,0)|^{2k}, Z_N(U,theta) = prod (1 - e^{i(theta_n - theta)})",
                    [("--N", str, "10"), ("--k", I, 1), ("--samples", I, 10**4)]),
        "paircorr": (cmd_rmt_paircorr, "unfolded eigenvalue gaps against 1 - (sin pi x/pi x)^2",
                     [("--ensemble", str, "cue"), ("--N", I, 100), ("--samples", I, 200),
                      ("--x-max", F, 3.0), ("--bins", I, 30)]),
    },
    "hybrid": {
        "compare": (cmd_hybrid_compare,
                    "exp(sum_{n<=x} Lambda(n)/(n^{1/2+it} log n)) prod_n exp(-E1(i(t-gamma_n) log x)) "
                    "against zeta(1/2+it)",
                    [("--t-lo", F, 50.0), ("--t-hi", F, 60.0), ("--step", F, 0.05),
                     ("--x", F, 1000.0), ("--sign", str, "minus_E1"),
                     ("--argument", str, "imaginary_arg"), ("--window", F, None),
                     ("--zeros", str, None)]),
        "approx": (cmd_hybrid_approx, "prod_{p<=x} (1 - p^{-1/2-it})^{-1}",
                   [("--t", F, 0.0), ("--x", F, 2.0), ("--sign", str, "minus_E1"),
                    ("--argument", str, "imaginary_arg"), ("--window", F, None)]),
        "splitting": (cmd_hybrid_splitting,
                      "(1/T) int |P_x|^{2k} dt * E_CUE prod |exp(-E1(i theta_n log x))|^{2k} "
                      "vs I_k(1/2,T)/T, N = round(log T/2pi)",
                      [("--k", I, 1), ("--T", F, 2000.0), ("--x", F, 50.0), ("--N", I, None),
                       ("--samples", I, 2000), ("--zeros", str, None)]),
    },
}


def _bool(text):
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zetalab", description="Numerical laboratory for zeta, its zeros, "
                     "primes, moments, pair correlation and random matrices.")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    for gname, cmds in COMMANDS.items():
        g = groups.add_parser(gname, help=f"{gname} commands")
        sub = g.add_subparsers(dest="command", required=True, parser_class=_Parser)
        for cname, (_, formula, flags) in cmds.items():
            c = sub.add_parser(cname, help=formula, description=formula)
            for flag, typ, default in flags:
                conv = _bool if typ is bool else typ
                c.add_argument(flag, type=conv, default=default)
            c.add_argument("--output", "-o", default=None,
                           help=f"output file (default: ${OUTPUT_DIR_ENV}/<group>_<command>.*, "
                                f"else stdout)")
            c.add_argument("--seed", type=int, default=1)
            c.add_argument("--config", default=None, help="key=value file overriding flags")
            c.add_argument("--workers", type=int, default=1, help="worker pool size")
            c.add_argument("--abs-tol", type=float, default=None)
            c.add_argument("--rel-tol", type=float, default=None)
            c.add_argument("--max-terms", type=int, default=None)
    return parser


def read_config_file(path) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(args, parser_types):
    if not args.config:
        return
    for key, value in read_config_file(args.config).items():
        if key == "config" or key not in parser_types:
            raise UsageError(f"unknown config key {key!r}")
        conv = parser_types[key]
        try:
            setattr(args, key, conv(value) if conv else value)
        except (TypeError, ValueError):
            raise UsageError(f"bad value for {key}: {value!r}") from None


def make_run_config(argv) -> tuple[RunConfig, callable]:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler, _, flags = COMMANDS[args.group][args.command]
    types = {flag.lstrip("-").replace("-", "_"): (_bool if t is bool else t)
             for flag, t, _ in flags}
    types.update({"output": str, "seed": int, "workers": int, "abs_tol": float,
                  "rel_tol": float, "max_terms": int})
    _apply_config(args, types)
    params = {k: v for k, v in vars(args).items() if k not in GLOBAL_KEYS + ("group", "command")}
    budget = None
    if any(v is not None for v in (args.abs_tol, args.rel_tol, args.max_terms)):
        base = PrecisionBudget()
        budget = PrecisionBudget(args.abs_tol or base.abs_tol, args.rel_tol or base.rel_tol,
                                 args.max_terms or base.max_terms)
    if args.workers < 1:
        raise UsageError("workers must be >= 1")
    cfg = RunConfig(subcommand=f"{args.group} {args.command}", parameters=params,
                    output_path=args.output, seed=args.seed, budget=budget,
                    workers=args.workers)
    return cfg, handler


def _default_output(cfg: RunConfig, ext):
    base = os.environ.get(OUTPUT_DIR_ENV)
    if cfg.output_path:
        return Path(cfg.output_path)
    if base:
        return Path(base) / (cfg.subcommand.replace(" ", "_").replace("-", "_") + ext)
    return None


def _write(cfg: RunConfig, result, stdout):
    kind = result[0]
    meta_config = {"subcommand": cfg.subcommand, **cfg.parameters}
    if kind == "zeros":
        from .zeros import save_zero_table

        table = result[1]
        path = _default_output(cfg, ".txt")
        if path is None:
            stdout.write("".join(f"{g:.12f}\n" for g in table.gammas))
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            save_zero_table(table, path)
            stdout.write(f"{len(table)} ordinates -> {path}\n")
        return
    if kind == "csv":
        header, rows = result[1], result[2]
        summary = result[3] if len(result) > 3 else None
        path = _default_output(cfg, ".csv")
        if path is None:
            stdout.write(emit.format_csv(header, rows, cfg.seed, meta_config))
        else:
            emit.write_csv(path, header, rows, cfg.seed, meta_config)
            stdout.write(f"{len(rows)} rows -> {path}\n")
        if summary:
            stdout.write(summary + "\n")
        return
    payload, text = result[1], result[2]
    path = _default_output(cfg, ".json")
    if path is not None:
        emit.write_json(path, payload, cfg.seed, meta_config)
    if text is not None:
        stdout.write(text + "\n")
    elif path is None:
        stdout.write(emit.format_json(payload, cfg.seed, meta_config))


def run(cfg: RunConfig, handler, stdout=None) -> int:
    stdout = stdout or sys.stdout
    params = dict(cfg.parameters, _seed=cfg.seed, _budget=cfg.budget, _workers=cfg.workers)
    _write(cfg, handler(params), stdout)
    return EXIT_OK


def _fail(kind, exc, stderr):
    msg = " ".join(str(exc).split()) or type(exc).__name__
    stderr.write(f"zetalab-error kind={kind} type={type(exc).__name__} message={msg}\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        cfg, handler = make_run_config(sys.argv[1:] if argv is None else argv)
        return run(cfg, handler, stdout)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        _fail("invalid", exc, stderr)
        return EXIT_INVALID
    except ArithmeticError as exc:
        _fail("numeric", exc, stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
