"""Batch front-end: subcommands eis, cg, lp, lvalue, regulator, interpolate, selftest.

Every report is JSON with top-level keys config, results, warnings, timings.
Configuration comes from defaults, then a flat key=value file, then flags.
"""

import argparse
import json
import sys
import time
import warnings
from fractions import Fraction

from . import __version__

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_VERIFICATION = 4
EXIT_INPUT = 5

DEFAULTS = {
    "p": 11,
    "prec_p": 8,
    "prec_q": 150,
    "sturm_margin": 10,
    "tol": 1e-3,
    "fixture_dir": None,
    "out": None,
    "timings": False,
    # eis
    "t": 2, "s": 1, "b": 1, "N": 1, "depleted": False,
    # cg and regulator
    "k": 2, "kprime": 2, "j": 1,
    # lp, lvalue, interpolate
    "f": "delta_e10", "g": "delta", "g2": "delta_e4", "calibrate_with": None,
    "point": None, "n_max": 400, "method": "afe",
    # regulator
    "fixture_f": "14k8", "fixture_g": "14a", "mode": "constants", "lp": "1",
}

INT_KEYS = {"p", "prec_p", "prec_q", "sturm_margin", "t", "s", "b", "N", "k", "kprime", "j",
            "n_max"}
FLOAT_KEYS = {"tol", "point"}
BOOL_KEYS = {"depleted", "timings"}


class PreconditionFailure(Exception):
    pass


class VerificationFailure(Exception):
    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


def design_constants():
    from .modspace import RANK_PRIME, STURM_MARGIN
    from .regulator import CUP_SIGN
    return {"rank_prime": RANK_PRIME, "default_sturm_margin": STURM_MARGIN,
            "cup_sign": CUP_SIGN, "version": __version__}


# ---------------------------------------------------------------- config

def read_config_file(path):
    """Flat key = value lines; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError("%s:%d: expected key = value" % (path, n))
            key, val = (x.strip() for x in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise ValueError("%s:%d: unknown key %r" % (path, n, key))
            out[key] = val
    return out


def _convert(key, val):
    if val is None:
        return None
    if key in INT_KEYS:
        return int(val)
    if key in FLOAT_KEYS:
        return float(val)
    if key in BOOL_KEYS:
        if isinstance(val, bool):
            return val
        return str(val).lower() in ("1", "true", "yes", "on")
    return val


def resolve_config(command, args):
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config_file(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    cfg = {k: _convert(k, v) for k, v in cfg.items()}
    cfg["command"] = command
    return cfg


# -------------------------------------------------------------- fixtures

def load(ref, cfg, n_primes=200):
    from .modspace import FIXTURE_META, load_newform
    import os
    if ref not in FIXTURE_META and cfg.get("fixture_dir") and not os.path.exists(ref):
        cand = os.path.join(cfg["fixture_dir"], ref)
        ref = cand if os.path.exists(cand) else cand + ".json"
    return load_newform(ref, n_primes)


def _padic(x):
    return x.to_dict() if x is not None else None


def _str(x):
    return str(x)


# ------------------------------------------------------------- commands

def cmd_eis(cfg, report):
    from .eisenstein import eis_depleted, eis_padic
    args = (cfg["t"], cfg["s"], cfg["b"], cfg["N"], cfg["p"], cfg["prec_q"], cfg["prec_p"])
    F = eis_depleted(*args) if cfg["depleted"] else eis_padic(*args)
    report["results"] = {"series": "F^[p]" if cfg["depleted"] else "F^(p)",
                         "expansion": F.to_dict()}


def cmd_cg(cfg, report):
    from .tsym import cg_map, cg_oracle, cg_trilinear, trilinear_value, SymVector, TSymVector
    k, kp, j = cfg["k"], cfg["kprime"], cfg["j"]
    K = k + kp - 2 * j
    rows = []
    for r in range(K + 1):
        t = TSymVector.basis(r, K - r)
        img = cg_map(k, kp, j, t)
        ok = img == cg_oracle(k, kp, j, t)
        rows.append({"input": [r, K - r], "oracle_agrees": ok,
                     "table": [[a, c, _str(v)] for a, c, v in img.table()]})
    tri = cg_trilinear(k, kp, j, SymVector.basis(0, k), SymVector.basis(kp, 0),
                       TSymVector.basis(kp - j, k - j)).pair_det(j).scalar()
    report["results"] = {"k": k, "kprime": kp, "j": j, "images": rows,
                         "trilinear": _str(tri), "trilinear_closed_form": trilinear_value(k, kp, j)}
    if not all(r["oracle_agrees"] for r in rows) or tri != trilinear_value(k, kp, j):
        raise VerificationFailure("CG map disagrees with the tensor oracle", report)


def _algebraic(f, g, cfg, s=None):
    from .lcomplex import LSeriesSpec, algebraic_part
    spec = LSeriesSpec(f, g, cfg["n_max"])
    s = s if s is not None else g.weight
    return algebraic_part(spec, s, cfg["method"]), spec


def cmd_lp(cfg, report):
    from .hida import PadicRankin, calibrate
    f = load(cfg["f"], cfg, max(200, cfg["n_max"]))
    g = load(cfg["g"], cfg, max(200, cfg["n_max"]))
    rk = PadicRankin(f, cfg["p"], cfg["prec_p"])
    val = rk.value(g)
    E, Estar, Efg = val.euler
    res = {"f": f.source, "g": g.source, "p": cfg["p"], "s": val.s,
           "raw": _padic(val.raw), "alpha": _padic(val.alpha), "u_f": None,
           "normalized": _padic(val.value),
           "euler": {"E(f)": _padic(E), "E*(f)": _padic(Estar), "E(f,g,s)": _padic(Efg)},
           "probe": rk.iso.probe, "ordinary_rank": rk.proj.rank}
    if cfg["calibrate_with"]:
        g1 = load(cfg["calibrate_with"], cfg, max(200, cfg["n_max"]))
        A1, _ = _algebraic(f, g1, cfg)
        A, _ = _algebraic(f, g, cfg)
        cal = calibrate(rk, [(g1, float(A1.real), float(A1.radius)),
                             (g, float(A.real), float(A.radius))], cfg["tol"])
        res["calibration"] = cal.to_dict()
        res["u_f"] = _padic(cal.unit)
        report["results"] = res
        if not cal.ok:
            raise VerificationFailure("calibration check failed", report)
    report["results"] = res


def cmd_lvalue(cfg, report):
    from .lcomplex import LSeriesSpec, afe_value, rankin_series
    f = load(cfg["f"], cfg, max(200, cfg["n_max"]))
    g = load(cfg["g"], cfg, max(200, cfg["n_max"]))
    spec = LSeriesSpec(f, g, cfg["n_max"])
    s = cfg["point"] if cfg["point"] is not None else spec.k + 1
    res = {"spec": spec.to_dict(), "s": s, "method": cfg["method"]}
    if cfg["method"] in ("afe", "both"):
        L = afe_value(spec, s)
        res["value"] = L.to_dict()
        res["epsilon_solved"] = spec.to_dict()["epsilon"]
        res["error_kind"] = "heuristic"
    if cfg["method"] in ("series", "both"):
        D = rankin_series(spec.f, spec.g, s, spec.n_max, spec)
        res["series"] = D.to_dict()
        if cfg["method"] == "series":
            res["value"] = D.to_dict()
            res["error_kind"] = "rigorous tail bound"
        else:
            res["agree"] = bool(L.overlaps(D))
    report["results"] = res
    if cfg["method"] == "both" and not res["agree"]:
        raise VerificationFailure("AFE and series values do not overlap", report)


def cmd_regulator(cfg, report):
    from . import regulator as R
    k, kp, j, p = cfg["k"], cfg["kprime"], cfg["j"], cfg["p"]
    mode = cfg["mode"]
    if mode == "constants":
        pre, items = R.splur_prefactor(k, kp, j)
        report["results"] = {
            "beilinson_constant": _str(R.beilinson_constant(k, kp, j)),
            "perrin_riou_factor": _str(R.perrin_riou_factor(kp, j)),
            "splur_prefactor": _str(pre),
            "splur_closed_form": _str(R.splur_closed_form(k, kp, j)),
            "splur_items": {a: (_str(b) if isinstance(b, Fraction) else b)
                            for a, b in items.items()},
            "euler_factor_identity": R.euler_factor_identity(j)}
        return
    f = load(cfg["fixture_f"], cfg)
    g = load(cfg["fixture_g"], cfg)
    if mode == "value":
        from .exactnum import PadicNum
        lp = PadicNum.from_rational(Fraction(cfg["lp"]), p, cfg["prec_p"])
        val = R.regulator_value(f, g, j, p, lp, cfg["prec_p"])
        report["results"] = val.to_dict()
        return
    if mode == "two-route":
        rep = R.regulator_two_route_check(f, g, j, p)
        report["results"] = rep.to_dict()
        if not rep.agree:
            raise VerificationFailure("the two routes disagree modulo p", report)
        return
    raise PreconditionFailure("unknown regulator mode %r" % mode)


def cmd_interpolate(cfg, report):
    from .exactnum import rational_reconstruct
    from .hida import PadicRankin, calibrate
    n = max(200, cfg["n_max"])
    f, g1, g2 = load(cfg["f"], cfg, n), load(cfg["g"], cfg, n), load(cfg["g2"], cfg, n)
    if f.k < 6:
        raise PreconditionFailure("f must have weight at least 8")
    for g in (g1, g2):
        if f.k < g.k + 2:
            raise PreconditionFailure("need k >= k' + 2 for every g")
    rk = PadicRankin(f, cfg["p"], cfg["prec_p"])
    A1, spec1 = _algebraic(f, g1, cfg)
    A2, spec2 = _algebraic(f, g2, cfg)
    cal = calibrate(rk, [(g1, float(A1.real), float(A1.radius)),
                         (g2, float(A2.real), float(A2.radius))], cfg["tol"])
    # the AFE is cross-checked against the Dirichlet series at s = k + 1
    from .lcomplex import afe_value, rankin_series
    cross = []
    for spec in (spec1, spec2):
        a = afe_value(spec, spec.k + 1)
        d = rankin_series(spec.f, spec.g, spec.k + 1, spec.n_max, spec)
        rel = float(abs(a.center - d.center) / abs(d.center))
        cross.append({"afe": a.to_dict(), "series": d.to_dict(), "relative": rel,
                      "ok": rel <= cfg["tol"]})
    report["results"] = {"f": f.source, "g1": g1.source, "g2": g2.source, "p": cfg["p"],
                         "ordinary": True, "probe": rk.iso.probe,
                         "complex": [A1.to_dict(), A2.to_dict()],
                         "calibration": cal.to_dict(), "cross_check": cross}
    if not cal.ok or not all(c["ok"] for c in cross):
        raise VerificationFailure("interpolation check failed", report)


def selftest_checks():
    """Fast invariant checks: (name, callable returning bool)."""
    from . import regulator as R
    from .eisenstein import eis_depleted, eis_padic, nabla, syntomic_alpha_rig
    from .exactnum import DirichletCharacter, all_characters, gauss_sum
    from .qseries import deplete, u_op, theta
    from .tsym import cg_map, cg_oracle, TSymVector

    def cg():
        return all(cg_map(k, kp, j, TSymVector.basis(r, k + kp - 2 * j - r))
                   == cg_oracle(k, kp, j, TSymVector.basis(r, k + kp - 2 * j - r))
                   for k in range(4) for kp in range(4) for j in range(min(k, kp) + 1)
                   for r in range(k + kp - 2 * j + 1))

    def eis():
        p, Q = 5, 60
        F = eis_padic(2, 1, 1, 1, p, Q, 6)
        return (u_op(F, p) == F.scale(p ** 2).truncate(Q // p)
                and deplete(F, p) == eis_depleted(2, 1, 1, 1, p, Q, 6)
                and theta(eis_padic(1, 2, 1, 3, p, Q, 6)) == eis_padic(3, 1, 1, 3, p, Q, 6))

    def telescoping():
        k, N, p, Q = 2, 5, 7, 40
        sec = nabla(syntomic_alpha_rig(k, 1, N, p, Q, 6))
        top = eis_padic(k + 2, 0, 1, N, p, Q, 6).scale(-N ** k)
        return all(sec[i].is_zero() for i in range(k)) and sec[k] == top

    def star():
        P = R.FpPolynomial.from_roots([2, 3])
        Qp = R.FpPolynomial.from_roots([5])
        return R.fp_star(P, Qp) == R.FpPolynomial.from_roots([10, 15])

    def cpoly():
        return R.c_polynomial(1, 7, 0, 7).equal

    def constants():
        return (R.beilinson_constant(0, 0, 0) == -4 and R.beilinson_constant(2, 2, 1) == 1
                and R.perrin_riou_factor(1, 0) == Fraction(-1, 4))

    def gauss():
        for n in range(1, 13):
            for eps in all_characters(n):
                e = eps.primitive()
                G = gauss_sum(e) * gauss_sum(~e)
                if G != e.parity * e.modulus:
                    return False
        return True

    return [("cg_oracle", cg), ("eisenstein_operators", eis), ("telescoping", telescoping),
            ("fp_star", star), ("c_polynomial", cpoly), ("constants", constants),
            ("gauss_sums", gauss)]


def cmd_selftest(cfg, report):
    rows = []
    for name, fn in selftest_checks():
        try:
            ok = bool(fn())
            err = None
        except Exception as e:  # reported, not raised
            ok, err = False, "%s: %s" % (type(e).__name__, e)
        rows.append({"check": name, "ok": ok, "error": err})
    passed = sum(r["ok"] for r in rows)
    report["results"] = {"passed": passed, "total": len(rows), "checks": rows,
                         "defaults": {k: v for k, v in sorted(DEFAULTS.items())},
                         "design_constants": design_constants()}
    if passed != len(rows):
        raise VerificationFailure("%d of %d self-checks failed" % (len(rows) - passed, len(rows)),
                                  report)


COMMANDS = {"eis": cmd_eis, "cg": cmd_cg, "lp": cmd_lp, "lvalue": cmd_lvalue,
            "regulator": cmd_regulator, "interpolate": cmd_interpolate,
            "selftest": cmd_selftest}


# ---------------------------------------------------------------- driver

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file")
    common.add_argument("--p", type=int)
    common.add_argument("--prec-p", dest="prec_p", type=int)
    common.add_argument("--prec-q", dest="prec_q", type=int)
    common.add_argument("--sturm-margin", dest="sturm_margin", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--fixture-dir", dest="fixture_dir")
    common.add_argument("--out")
    common.add_argument("--timings", action="store_const", const=True,
                        help="record wall-clock timings (makes reports non-reproducible)")
    ap = argparse.ArgumentParser(prog="rankineis")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eis", parents=[common])
    for key in ("t", "s", "b", "N"):
        s.add_argument("--" + key, type=int)
    s.add_argument("--depleted", action="store_const", const=True)

    s = sub.add_parser("cg", parents=[common])
    s.add_argument("--k", type=int)
    s.add_argument("--kprime", type=int)
    s.add_argument("--j", type=int)

    for name in ("lp", "lvalue"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--f")
        s.add_argument("--g")
        s.add_argument("--n-max", "--nmax", dest="n_max", type=int)
        methods = ("afe", "series", "both") if name == "lvalue" else ("afe", "series")
        s.add_argument("--method", choices=methods)
        if name == "lp":
            s.add_argument("--calibrate-with", dest="calibrate_with")
        else:
            s.add_argument("--s", dest="point", type=float)

    s = sub.add_parser("regulator", parents=[common])
    s.add_argument("--k", type=int)
    s.add_argument("--kprime", type=int)
    s.add_argument("--j", type=int)
    s.add_argument("--fixture-f", dest="fixture_f")
    s.add_argument("--fixture-g", dest="fixture_g")
    s.add_argument("--mode", choices=("value", "two-route", "constants"))
    s.add_argument("--lp", help="L_p value as a rational (value mode)")

    s = sub.add_parser("interpolate", parents=[common])
    s.add_argument("--f")
    s.add_argument("--g1", dest="g")
    s.add_argument("--g2", dest="g2")
    s.add_argument("--n-max", dest="n_max", type=int)

    sub.add_parser("selftest", parents=[common])
    return ap


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if hasattr(x, "to_dict"):
        return _jsonable(x.to_dict())
    return str(x)


def dumps(report):
    return json.dumps(_jsonable(report), sort_keys=True, indent=1) + "\n"


def run(cfg):
    """Run one configured command; returns (exit code, report)."""
    from .exactnum import NonOrdinaryError, PrecisionError
    from .modspace import SeparationError
    from .regulator import HypothesisError, UntestableConfiguration
    from . import modspace
    report = {"config": {"settings": dict(sorted(cfg.items())),
                         "design_constants": design_constants()},
              "results": None, "warnings": [], "timings": {}}
    modspace.STURM_MARGIN = cfg["sturm_margin"]
    start = time.perf_counter()
    code = EXIT_OK
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            COMMANDS[cfg["command"]](cfg, report)
        except VerificationFailure as e:
            report["error"] = {"kind": "verification", "message": str(e)}
            code = EXIT_VERIFICATION
        except (KeyError, FileNotFoundError, json.JSONDecodeError) as e:
            report["error"] = {"kind": "input", "message": str(e)}
            code = EXIT_INPUT
        except (PreconditionFailure, UntestableConfiguration, NonOrdinaryError,
                SeparationError, HypothesisError, PrecisionError, NotImplementedError,
                ZeroDivisionError, ValueError) as e:
            report["error"] = {"kind": "precondition", "type": type(e).__name__,
                               "message": str(e)}
            code = EXIT_PRECONDITION
    report["warnings"] = sorted({str(w.message) for w in caught})
    if cfg.get("timings"):
        report["timings"] = {cfg["command"]: round(time.perf_counter() - start, 3)}
    return code, report


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = resolve_config(args.command, args)
    except (ValueError, OSError) as e:
        print("config error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    code, report = run(cfg)
    text = dumps(report)
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
