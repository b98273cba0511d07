"""Command-line front end.

Exit codes: 0 definitive success (including a NotHomogeneous certificate),
1 definitive negative (axiom failure, Outside, not transportable),
2 inconclusive (ambiguous rank, inconsistent sampling), 64 usage or input
errors.  A report is written in every case.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import lyaprank as _lyap
from . import pcone as _pcone
from .algebra import check_axioms
from .builtins import build_builtin
from .cone import certifies_not_strictly_convex, factorize, principal_face, transport
from .descriptor import parse_descriptor, parse_element
from .errors import (
    AmbiguousRankError,
    DescriptorParseError,
    NotTransportableError,
    OutOfScopeError,
    UnderdeterminedError,
)
from .rank2 import classify
from .status import Status

EXIT_OK, EXIT_NEGATIVE, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64
SEED_ENV = "HOMCONE_SEED"
COMMANDS = (
    "check-axioms", "membership", "factor", "transport", "face",
    "classify", "pcone-check", "lyaprank", "certify",
)


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, _lyap.DEFAULT_SEED))


@dataclass
class RunConfig:
    command: str
    source: str | None = None
    element: str | None = None
    target: str | None = None
    m: int = 1
    r: int = 2
    cone: str = "pcone"
    p: str | None = None
    n: int | None = None
    samples: int | None = None
    pairs: int | None = None
    seed: int = field(default_factory=default_seed)
    tol: float | None = None
    point: str | None = None
    output: str | None = None
    format: str = "text"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("--tol must be positive")


@dataclass
class Report:
    command: str
    config: dict
    result: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    exit_code: int = EXIT_OK
    duration: float = 0.0


class UsageError(Exception):
    pass


# -- serialization ------------------------------------------------------------------


def _plain(obj):
    """Convert numpy values and non-finite floats into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def render_structured(report: Report) -> str:
    # float repr is the shortest string that parses back to the same double
    return json.dumps(_plain(asdict(report)), sort_keys=True, indent=2) + "\n"


def render_text(report: Report) -> str:
    lines = [f"command: {report.command}"]

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}{k}.", v)
        else:
            lines.append(f"  {prefix[:-1]}: {value}")

    walk("", _plain(report.result))
    for w in report.warnings:
        lines.append(f"warning: {w}")
    lines.append(f"exit: {report.exit_code}  ({report.duration:.3f} s)")
    return "\n".join(lines) + "\n"


def write_report(report: Report, config: RunConfig | None):
    fmt = config.format if config else "text"
    text = render_structured(report) if fmt == "structured" else render_text(report)
    if config and config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)


# -- command implementations ----------------------------------------------------------


def load_algebra(config: RunConfig):
    src = config.source
    if not src:
        raise UsageError(f"{config.command} needs an algebra source (builtin:<kind> or a path)")
    if src.startswith("builtin:"):
        kind = src.split(":", 1)[1]
        try:
            return build_builtin(kind, m=config.m, r=config.r)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not Path(src).exists():
        raise UsageError(f"descriptor file {src!r} not found")
    return parse_descriptor(src)


def _load_element(path, alg, flag):
    if not path:
        raise UsageError(f"missing {flag}")
    if not Path(path).exists():
        raise UsageError(f"element file {path!r} not found")
    return parse_element(path, alg)


def _blocks_payload(el):
    return {f"{i},{j}": v for (i, j), v in el.blocks.items()}


def _cmd_check_axioms(cfg):
    alg = load_algebra(cfg)
    rep = check_axioms(alg, cfg.tol or 1e-9)
    axioms = {
        name: {"passed": r.passed, "violation": r.violation, "witness": r.witness}
        for name, r in rep.results.items()
    }
    result = {"algebra": alg.name, "passed": rep.passed, "failed": rep.failed(), "axioms": axioms}
    return result, EXIT_OK if rep.passed else EXIT_NEGATIVE


def _membership_payload(verdict):
    out = {"status": verdict.status, "residual": verdict.residual, "reason": verdict.reason}
    if verdict.factor is not None:
        out["gammas"] = verdict.factor.gammas
    return out


def _cmd_membership(cfg, with_factor=False):
    alg = load_algebra(cfg)
    a = _load_element(cfg.element, alg, "--element")
    verdict = factorize(a, cfg.tol or 1e-9)
    result = {"algebra": alg.name, **_membership_payload(verdict)}
    if with_factor and verdict.factor is not None:
        result["factor"] = _blocks_payload(verdict.factor.element)
    return result, EXIT_NEGATIVE if verdict.status is Status.OUTSIDE else EXIT_OK


def _cmd_transport(cfg):
    alg = load_algebra(cfg)
    x = _load_element(cfg.element, alg, "--element")
    y = _load_element(cfg.target, alg, "--target")
    bound = cfg.tol or 1e-8
    try:
        w, residual = transport(x, y)
    except NotTransportableError as exc:
        return {"algebra": alg.name, "transportable": False, "reason": str(exc)}, EXIT_NEGATIVE
    ok = residual <= bound
    result = {
        "algebra": alg.name, "transportable": True, "residual": residual,
        "within_tolerance": ok, "gammas": w.gammas, "w": _blocks_payload(w.element),
    }
    return result, EXIT_OK if ok else EXIT_NEGATIVE


def _cmd_face(cfg):
    alg = load_algebra(cfg)
    face = principal_face(alg)
    result = {
        "algebra": alg.name,
        "rank": alg.rank,
        "generators": [f"e_{i}" for i in range(2, alg.rank + 1)],
        "dim_lower_bound": face.dim_lower_bound,
        "inner_violation": face.inner_violation,
        "generators_in_closure": face.generators_in_closure,
        "certifies_not_strictly_convex": certifies_not_strictly_convex(alg),
    }
    return result, EXIT_OK


def _cmd_classify(cfg):
    alg = load_algebra(cfg)
    try:
        c = classify(alg)
    except OutOfScopeError as exc:
        return {"algebra": alg.name, "rank": alg.rank, "error": str(exc)}, EXIT_NEGATIVE
    result = {"algebra": alg.name, "rank": alg.rank, "kind": str(c), "m": c.m}
    if c.Q is not None:
        S = c.matrix
        result["Q"] = c.Q.reshape(-1)
        result["S_shape"] = list(S.shape)
        result["S_row_major"] = S.reshape(-1)
        result["S_coordinates"] = "(alpha, beta, a_12) -> R^(m+2)"
    return result, EXIT_OK


def _require_pn(cfg):
    if cfg.p is None or cfg.n is None:
        raise UsageError(f"{cfg.command} needs --p and --n")
    try:
        return _pcone.PConeSpec(int(cfg.n), _pcone.parse_p(cfg.p))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cmd_pcone_check(cfg):
    spec = _require_pn(cfg)
    samples = cfg.samples or 100_000
    sc = _pcone.strict_convexity(spec, samples=samples, seed=cfg.seed)
    result = {
        "cone": str(spec),
        "dual": str(_pcone.dual_spec(spec)),
        "strictly_convex": sc.verdict,
        "witness": None if sc.witness is None else {"x": sc.witness[0], "y": sc.witness[1]},
        "sampling": {"trials": sc.trials, "flat_pairs": sc.sampled_hits, "consistent": sc.consistent},
    }
    if 1 < spec.p < math.inf:
        fc = _pcone.face_cone_bijection_check(spec, seed=cfg.seed)
        result["extreme_ray_check"] = {"pairs": fc.checked, "violations": fc.violations}
    code = EXIT_OK if sc.consistent else EXIT_INCONCLUSIVE
    if cfg.point:
        try:
            pt = [float(v) for v in cfg.point.split(",")]
            status = _pcone.membership(pt, spec, cfg.tol or 1e-9)
        except ValueError as exc:
            raise UsageError(f"--point: {exc}") from None
        result["point"] = {"coords": pt, "status": status}
        if status is Status.OUTSIDE and code == EXIT_OK:
            code = EXIT_NEGATIVE
    return result, code


def _cmd_lyaprank(cfg):
    if cfg.n is None:
        raise UsageError("lyaprank needs --n")
    if cfg.cone == "pcone":
        if cfg.p is None:
            raise UsageError("lyaprank --cone pcone needs --p")
        spec = _lyap.ConeSpec.pcone(cfg.p, cfg.n)
    elif cfg.cone == "lorentz":
        spec = _lyap.ConeSpec.lorentz(cfg.n)
    elif cfg.cone == "orthant":
        spec = _lyap.ConeSpec.orthant(cfg.n)
    else:
        raise UsageError(f"unknown cone {cfg.cone!r}")
    try:
        rank, system = _lyap.lyapunov_rank(spec, cfg.pairs, cfg.seed)
    except UnderdeterminedError as exc:
        raise UsageError(str(exc)) from None
    except AmbiguousRankError as exc:
        sys_ = exc.system
        return {
            "cone": str(spec), "rank": None, "error": str(exc),
            "gap_ratio": sys_.gap_ratio if sys_ else None,
            "singular_value_tail": sys_.tail() if sys_ else None,
        }, EXIT_INCONCLUSIVE
    result = {
        "cone": str(spec),
        "rank": rank,
        "pairs": system.constraints.shape[0],
        "gap_ratio": system.gap_ratio,
        "coverage": system.coverage,
        "singular_value_tail": system.tail(rank + 4),
    }
    if spec.kind == "lorentz":
        result["expected"] = _lyap.lorentz_rank_formula(spec.n)
    return result, EXIT_OK


def _cmd_certify(cfg):
    if cfg.p is None or cfg.n is None:
        raise UsageError("certify needs --p and --n")
    try:
        rep = _lyap.nonhomogeneity_report(
            cfg.p, int(cfg.n), seed=cfg.seed, pairs=cfg.pairs, samples=cfg.samples or 20_000
        )
    except UnderdeterminedError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = {
        "p": _pcone.format_p(rep.p),
        "n": rep.n,
        "strictly_convex": rep.strictly_convex,
        "lyap_rank_pcone": rep.lyap_rank_pcone,
        "lyap_rank_lorentz": rep.lyap_rank_lorentz,
        "gap_ratios": rep.gap_ratios,
        "verdict": rep.verdict,
        "reasoning": rep.reasoning,
    }
    code = EXIT_INCONCLUSIVE if rep.verdict is _lyap.Verdict.INCONCLUSIVE else EXIT_OK
    return result, code


HANDLERS = {
    "check-axioms": _cmd_check_axioms,
    "membership": _cmd_membership,
    "factor": lambda cfg: _cmd_membership(cfg, with_factor=True),
    "transport": _cmd_transport,
    "face": _cmd_face,
    "classify": _cmd_classify,
    "pcone-check": _cmd_pcone_check,
    "lyaprank": _cmd_lyaprank,
    "certify": _cmd_certify,
}


def run(config: RunConfig) -> tuple[int, Report]:
    """Execute one command; never raises for input problems."""
    cfg_echo = {k: v for k, v in asdict(config).items() if k not in ("output",)}
    report = Report(command=config.command, config=cfg_echo)
    start = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            result, code = HANDLERS[config.command](config)
        except (UsageError, DescriptorParseError) as exc:
            result, code = {"error": str(exc)}, EXIT_USAGE
    report.result = result
    report.warnings = sorted({str(w.message) for w in caught})
    report.exit_code = code
    report.duration = time.perf_counter() - start
    return code, report


# -- argument parsing -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="homcone", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--output", "-o", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--seed", type=int, default=None,
                       help=f"random seed (default {_lyap.DEFAULT_SEED}, or ${SEED_ENV})")
        p.add_argument("--tol", type=float, default=None)

    def algebra_source(p):
        p.add_argument("source", help="builtin:orthant|builtin:spin|builtin:vinberg or a .talg file")
        p.add_argument("--m", type=int, default=1, help="dim A_12 for builtin:spin")
        p.add_argument("--r", type=int, default=2, help="rank for builtin:orthant")

    p = sub.add_parser("check-axioms", help="verify the T-algebra axioms")
    algebra_source(p)
    common(p)
    for name, helptext in (("membership", "locate an element relative to K(A)"),
                           ("factor", "triangular factorization of an element")):
        p = sub.add_parser(name, help=helptext)
        algebra_source(p)
        p.add_argument("--element", required=True)
        common(p)
    p = sub.add_parser("transport", help="automorphism witness between interior points")
    algebra_source(p)
    p.add_argument("--element", required=True, help="source point")
    p.add_argument("--target", required=True, help="target point")
    common(p)
    for name, helptext in (("face", "face of cl K(A) orthogonal to e_1"),
                           ("classify", "classify a rank <= 2 algebra cone")):
        p = sub.add_parser(name, help=helptext)
        algebra_source(p)
        common(p)
    p = sub.add_parser("pcone-check", help="strict convexity and membership for p-cones")
    p.add_argument("--p", required=True, help="exponent, 'inf' allowed")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--point", help="comma-separated t,x1,...,x_{n-1}")
    common(p)
    p = sub.add_parser("lyaprank", help="numerical Lyapunov rank")
    p.add_argument("--cone", choices=("pcone", "lorentz", "orthant"), default="pcone")
    p.add_argument("--p")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pairs", type=int, default=None)
    common(p)
    p = sub.add_parser("certify", help="homogeneity verdict for SOC_p^n")
    p.add_argument("--p", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pairs", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    common(p)
    return parser


def config_from_args(ns) -> RunConfig:
    values = {k: v for k, v in vars(ns).items() if v is not None}
    return RunConfig(**values)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = config_from_args(build_parser().parse_args(argv))
    except UsageError as exc:
        cmd = argv[0] if argv and argv[0] in COMMANDS else "?"
        report = Report(command=cmd, config={"argv": argv}, result={"error": str(exc)},
                        exit_code=EXIT_USAGE)
        sys.stderr.write(render_text(report))
        return EXIT_USAGE
    code, report = run(config)
    write_report(report, config)
    return code


if __name__ == "__main__":
    sys.exit(main())
