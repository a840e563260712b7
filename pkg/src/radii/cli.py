"""Command line front end: ``radii compute|table|zeros|certify``.

Exit codes: 0 success, 2 invalid parameters, 3 numerical failure,
4 certification failure, 64 usage error, 65 bad configuration file.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .certify import certify
from .errors import CertificationFailure, InvalidSpec, NumericalFailure, RadiiError
from .serialize import CSV_COLUMNS, to_csv, to_json
from .series import DEFAULT_CONFIG, Family, FamilySpec, Normalization, SeriesConfig
from .solver import KindName, RadiusKind, RadiusProblem, RadiusResult, solve_radius
from .zeros import Combo, ZeroTarget, zero_ladder

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_CERT = 0, 2, 3, 4
EXIT_USAGE, EXIT_CONFIG = 64, 65

FAMILY_PARAMS = {
    Family.BESSEL: ("nu",),
    Family.JACKSON: ("nu", "q"),
    Family.HAHN_EXTON: ("nu", "q"),
    Family.LOMMEL: ("mu",),
    Family.LEGENDRE: ("m",),
}


class UsageError(Exception):
    pass


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- problem construction -------------------------------------------------------------

def build_spec(family: str, params: dict) -> FamilySpec:
    try:
        fam = Family(family)
    except ValueError:
        raise UsageError(f"unknown family {family!r}") from None
    names = FAMILY_PARAMS[fam]
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise UsageError(f"family {fam.value} needs {', '.join('--' + n for n in missing)}")
    extra = [n for n, v in params.items() if v is not None and n not in names]
    if extra:
        raise UsageError(f"family {fam.value} takes no {', '.join(extra)}")
    return FamilySpec(fam, **{n: params[n] for n in names})


def build_kind(kind: str, A, B) -> RadiusKind:
    try:
        name = KindName(kind)
    except ValueError:
        raise UsageError(f"unknown kind {kind!r}") from None
    if name in (KindName.JAN_STAR, KindName.JAN_CONVEX):
        if A is None or B is None:
            raise UsageError(f"{name.value} needs --A and --B")
        return RadiusKind(name, float(A), float(B))
    if A is not None or B is not None:
        raise UsageError(f"{name.value} takes no --A/--B")
    return RadiusKind(name)


def build_problem(family, params, norm, kind, A=None, B=None) -> RadiusProblem:
    spec = build_spec(family, params)
    if norm is None:
        norm = "intrinsic" if spec.family is Family.LEGENDRE else None
    if norm is None:
        raise UsageError("--norm is required")
    try:
        norm = Normalization(norm)
    except ValueError:
        raise UsageError(f"unknown normalization {norm!r}") from None
    return RadiusProblem(spec, norm, build_kind(kind, A, B))


def series_config() -> SeriesConfig:
    raw = os.environ.get("RADII_MAX_TERMS")
    if not raw:
        return DEFAULT_CONFIG
    try:
        return replace(DEFAULT_CONFIG, max_terms=int(raw))
    except ValueError as exc:
        raise UsageError(f"RADII_MAX_TERMS: {exc}") from None


# -- records ---------------------------------------------------------------------------

def problem_record(problem: RadiusProblem) -> dict:
    spec, kind = problem.spec, problem.kind
    names = FAMILY_PARAMS[spec.family]
    values = [getattr(spec, n) for n in names] + [None]
    return {
        "family": spec.family.value,
        "params": {n: getattr(spec, n) for n in names},
        "param1": values[0],
        "param2": values[1],
        "norm": problem.norm.value,
        "kind": kind.name.value,
        "A": kind.A,
        "B": kind.B,
    }


def result_record(result: RadiusResult) -> dict:
    rec = problem_record(result.problem)
    rec.update(radius=result.radius, domain_cap=result.domain_cap, target=result.target,
               residual_master=result.residual_master, residual_paper=result.residual_paper,
               paper_scale=result.paper_scale, iterations=result.iterations, status="ok")
    return rec


def error_record(exc: Exception, base: dict | None = None) -> dict:
    rec = dict(base or {})
    rec.update(status=f"error:{type(exc).__name__}", message=str(exc))
    return rec


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, CertificationFailure):
        return EXIT_CERT
    if isinstance(exc, InvalidSpec):
        return EXIT_INVALID
    return EXIT_NUMERIC


@dataclass(frozen=True)
class CertOptions:
    epsilon: float = 1e-3
    n_angles: int = 256
    oracle_step: float = 1e-4


def run_problem(problem: RadiusProblem, tol: float, cert: CertOptions | None,
                cfg: SeriesConfig, radius_override: float | None = None) -> tuple[dict, int]:
    """Solve (and optionally certify) one problem; returns its record and exit code."""
    try:
        result = solve_radius(problem, tol, cfg)
    except RadiiError as exc:
        return error_record(exc, problem_record(problem)), _exit_code(exc)
    rec = result_record(result)
    if cert is None:
        return rec, EXIT_OK
    radius = result.radius if radius_override is None else radius_override
    try:
        c = certify(problem, radius, cert.epsilon, cert.n_angles, cert.oracle_step, cfg)
    except CertificationFailure as exc:
        if exc.certificate is not None:
            rec["certificate"] = exc.certificate.as_dict()
        rec.update(status=f"certification-failed:{exc.face}", message=str(exc))
        return rec, EXIT_CERT
    except RadiiError as exc:
        rec.update(status=f"certification-error:{type(exc).__name__}", message=str(exc))
        return rec, _exit_code(exc)
    rec["certificate"] = c.as_dict()
    return rec, EXIT_OK


def emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def render(records: list[dict], fmt: str, single: bool = False) -> str:
    if fmt == "csv":
        return to_csv(records)
    return to_json(records[0] if single else records) + "\n"


# -- config files -----------------------------------------------------------------------

TOP_KEYS = {"tol", "certify", "epsilon", "n_angles", "oracle_step", "output", "out_path", "workers", "jobs"}
JOB_KEYS = {"family", "params", "norm", "kind", "A", "B"}


@dataclass
class JobConfig:
    jobs: list = field(default_factory=list)
    tol: float = 1e-12
    certify: bool = False
    epsilon: float = 1e-3
    n_angles: int = 256
    oracle_step: float = 1e-4
    output: str = "csv"
    out_path: str | None = None
    workers: int | None = None


def _typed(name, value, types):
    if isinstance(value, bool) and bool not in types:
        raise ConfigError(f"{name}: expected {types[0].__name__}, got bool")
    if not isinstance(value, types):
        raise ConfigError(f"{name}: expected {types[0].__name__}, got {type(value).__name__}")
    return value


def load_config(path: str) -> JobConfig:
    """Parse and structurally validate a TOML job file.

    Raises:
        ConfigError: on syntax errors, unknown keys, wrong types or an empty job list.
    """
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    unknown = set(data) - TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level keys: {', '.join(sorted(unknown))}")
    jobs = data.get("jobs")
    if not isinstance(jobs, list) or not jobs:
        raise ConfigError("config needs a non-empty [[jobs]] list")
    cfg = JobConfig(
        tol=float(_typed("tol", data.get("tol", 1e-12), (float, int))),
        certify=_typed("certify", data.get("certify", False), (bool,)),
        epsilon=float(_typed("epsilon", data.get("epsilon", 1e-3), (float, int))),
        n_angles=_typed("n_angles", data.get("n_angles", 256), (int,)),
        oracle_step=float(_typed("oracle_step", data.get("oracle_step", 1e-4), (float, int))),
        output=_typed("output", data.get("output", "csv"), (str,)),
        out_path=data.get("out_path"),
        workers=data.get("workers"),
    )
    if cfg.tol < 1e-13:
        raise ConfigError("tol must be at least 1e-13")
    if cfg.n_angles < 8:
        raise ConfigError("n_angles must be at least 8")
    if cfg.output not in ("csv", "json"):
        raise ConfigError(f"output must be csv or json, got {cfg.output!r}")
    if cfg.out_path is not None:
        _typed("out_path", cfg.out_path, (str,))
    if cfg.workers is not None and _typed("workers", cfg.workers, (int,)) < 1:
        raise ConfigError("workers must be at least 1")
    for i, job in enumerate(jobs):
        where = f"jobs[{i}]"
        if not isinstance(job, dict):
            raise ConfigError(f"{where}: expected a table")
        unknown = set(job) - JOB_KEYS
        if unknown:
            raise ConfigError(f"{where}: unknown keys: {', '.join(sorted(unknown))}")
        for key in ("family", "kind"):
            if key not in job:
                raise ConfigError(f"{where}: missing {key}")
            _typed(f"{where}.{key}", job[key], (str,))
        if "norm" in job:
            _typed(f"{where}.norm", job["norm"], (str,))
        params = job.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError(f"{where}.params: expected a table")
        for k, v in params.items():
            if k not in ("nu", "mu", "q", "m"):
                raise ConfigError(f"{where}.params: unknown key {k}")
            _typed(f"{where}.params.{k}", v, (int,) if k == "m" else (float, int))
        for key in ("A", "B"):
            if key in job:
                _typed(f"{where}.{key}", job[key], (float, int))
        cfg.jobs.append(job)
    return cfg


def _table_job(args):
    job, tol, cert, cfg = args
    params = dict(job.get("params", {}))
    values = list(params.values()) + [None, None]
    base = {"family": job.get("family"), "params": params, "param1": values[0], "param2": values[1],
            "norm": job.get("norm"), "kind": job.get("kind"), "A": job.get("A"), "B": job.get("B")}
    try:
        problem = build_problem(job["family"], params, job.get("norm"), job["kind"], job.get("A"), job.get("B"))
    except (UsageError, InvalidSpec) as exc:
        exc = exc if isinstance(exc, InvalidSpec) else InvalidSpec(str(exc))
        return error_record(exc, base), EXIT_INVALID
    try:
        return run_problem(problem, tol, cert, cfg)
    except ValueError as exc:
        return error_record(exc, problem_record(problem)), EXIT_INVALID


# -- subcommands ------------------------------------------------------------------------

def _selection(args) -> RadiusProblem:
    params = {"nu": args.nu, "q": args.q, "mu": args.mu, "m": args.m}
    return build_problem(args.family, params, args.norm, args.kind, args.A, args.B)


def _cert_options(args) -> CertOptions:
    return CertOptions(args.epsilon, args.angles, args.oracle_step)


def _report(rec: dict, code: int):
    if code != EXIT_OK and "message" in rec:
        print(f"error: {rec['message']}", file=sys.stderr)


def cmd_compute(args) -> int:
    problem = _selection(args)
    cert = _cert_options(args) if args.certify else None
    rec, code = run_problem(problem, args.tol, cert, series_config())
    if rec["status"] != "ok" and "radius" not in rec:
        _report(rec, code)
        return code
    emit(render([rec], args.format, single=True), args.out)
    _report(rec, code)
    return code


def cmd_certify(args) -> int:
    problem = _selection(args)
    rec, code = run_problem(problem, args.tol, _cert_options(args), series_config(), args.radius_override)
    if "radius" in rec:
        emit(render([rec], "json", single=True), args.out)
    _report(rec, code)
    return code


def cmd_table(args) -> int:
    try:
        conf = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    cfg = series_config()
    cert = CertOptions(conf.epsilon, conf.n_angles, conf.oracle_step) if conf.certify else None
    workers = args.workers or conf.workers or os.cpu_count() or 1
    jobs = [(job, conf.tol, cert, cfg) for job in conf.jobs]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            outcomes = list(pool.map(_table_job, jobs))
    else:
        outcomes = [_table_job(j) for j in jobs]
    records = [rec for rec, _ in outcomes]
    fmt = args.format or conf.output
    emit(render(records, fmt), args.out or conf.out_path)
    codes = [code for _, code in outcomes]
    for rec, code in outcomes:
        _report(rec, code)
    if any(c == EXIT_OK for c in codes):
        return EXIT_OK
    return EXIT_INVALID if EXIT_INVALID in codes else EXIT_NUMERIC


def parse_combo(text: str) -> tuple[Combo, float]:
    if text in ("fn", "dfn"):
        return Combo(text), 0.0
    head, _, tail = text.partition(":")
    if head == "combo" and tail:
        try:
            return Combo.COMBINATION, float(tail)
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(f"expected fn, dfn or combo:<c>, got {text!r}")


def cmd_zeros(args) -> int:
    spec = build_spec(args.family, {"nu": args.nu, "q": args.q, "mu": args.mu, "m": args.m})
    combo, c = args.combo
    target = ZeroTarget(spec, combo, c)
    zs = zero_ladder(target, args.count, args.tol, cfg=series_config())
    rows = [{"index": i + 1, "location": z.location, "residual": z.residual,
             "bracket": [z.bracket.lo, z.bracket.hi], "scan_step": z.scan_step}
            for i, z in enumerate(zs)]
    if args.format == "csv":
        flat = [{**r, "bracket_lo": r["bracket"][0], "bracket_hi": r["bracket"][1]} for r in rows]
        text = to_csv(flat, ("index", "location", "residual", "bracket_lo", "bracket_hi", "scan_step"))
    else:
        text = to_json({"target": str(target), "zeros": rows}) + "\n"
    emit(text, args.out)
    return EXIT_OK


def _add_family(p, with_problem=True):
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    p.add_argument("--nu", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--m", type=int)
    if with_problem:
        p.add_argument("--norm", choices=[n.value for n in Normalization])
        p.add_argument("--kind", required=True, choices=[k.value for k in KindName])
        p.add_argument("--A", type=float)
        p.add_argument("--B", type=float)
        p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--out", help="write output here instead of stdout")


def _add_cert(p):
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--angles", type=int, default=256)
    p.add_argument("--oracle-step", type=float, default=1e-4)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="radii", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="solve one radius problem")
    _add_family(p)
    _add_cert(p)
    p.add_argument("--certify", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("table", help="solve the jobs of a TOML config file")
    p.add_argument("config")
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("zeros", help="list positive zeros")
    _add_family(p, with_problem=False)
    p.add_argument("--combo", type=parse_combo, default=(Combo.FUNCTION, 0.0))
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("certify", help="solve, certify and cross-check one radius")
    _add_family(p)
    _add_cert(p)
    p.add_argument("--radius-override", type=float)
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"radii: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        if isinstance(exc, InvalidSpec):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        print(f"radii: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except RadiiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
