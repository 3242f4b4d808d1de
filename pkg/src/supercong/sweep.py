"""Verification campaigns over prime ranges and parameter grids.

Work is split into (check, prime) units, scheduled over a process pool and
merged back in catalog order, so the record stream does not depend on the
worker count or on completion order.  Timing lives in its own summary field.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path

from sympy import primerange

from . import __version__
from .arith import PadicResidue
from .errors import ConfigError
from .registry import CHECKS, resolve, run_case
from .results import CheckResult, Verdict

JOBS_ENV = "SUPERCONG_JOBS"
FORMATS = ("json", "csv")
VERDICTS = tuple(v.value for v in Verdict)


def parse_rational_list(text, name: str) -> list[Fraction] | None:
    if text is None:
        return None
    items = text.split(",") if isinstance(text, str) else list(text)
    try:
        return [Fraction(str(t).strip()) for t in items if str(t).strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a list of rationals: {text!r} ({exc})", name) from None


def parse_int_list(text, name: str) -> list[int] | None:
    """Accepts 1,2,3 or a range 1..4 (inclusive), or a JSON list."""
    if text is None:
        return None
    try:
        if isinstance(text, str):
            if ".." in text:
                lo, hi = text.split("..")
                return list(range(int(lo), int(hi) + 1))
            return [int(t) for t in text.split(",") if t.strip()]
        return [int(t) for t in text]
    except (TypeError, ValueError):
        raise ConfigError(f"not a list of integers: {text!r}", name) from None


def parse_prime_range(text, name: str = "primes") -> tuple[int, int]:
    try:
        if isinstance(text, str):
            lo, _, hi = text.partition("..")
            return int(lo), int(hi or lo)
        lo, hi = text
        return int(lo), int(hi)
    except (TypeError, ValueError):
        raise ConfigError(f"expected A..B, got {text!r}", name) from None


@dataclass
class SweepConfig:
    checks: list = field(default_factory=lambda: ["theorems"])
    p_min: int = 3
    p_max: int = 50
    precision: dict = field(default_factory=dict)   # check id (or "*") -> exponent
    alpha: list | None = None
    x: list | None = None
    m: list | None = None
    int_m: list | None = None
    n: list | None = None
    l: list | None = None
    eps: list | None = None
    seed: int = 0
    km_cases: int = 50
    jobs: int | None = None
    format: str = "json"
    out: str | None = None
    summary: str | None = None
    plot_dir: str | None = None
    fail_fast: bool = False
    corrupt_rhs: str | None = None                  # test hook: falsify this check's rhs

    def __post_init__(self):
        self.validate()

    @property
    def primes(self) -> list[int]:
        return [p for p in primerange(max(self.p_min, 3), self.p_max + 1)]

    @property
    def check_ids(self) -> list[str]:
        return resolve(self.checks)

    def worker_count(self) -> int:
        if self.jobs is not None:
            return self.jobs
        env = os.environ.get(JOBS_ENV)
        if env:
            try:
                return max(1, int(env))
            except ValueError:
                raise ConfigError(f"{JOBS_ENV}={env!r} is not an integer", JOBS_ENV) from None
        return os.cpu_count() or 1

    def precision_for(self, check: str) -> int | None:
        entry = CHECKS[check]
        if check in self.precision:
            return self.precision[check]
        if "*" in self.precision and entry.adjustable:
            return self.precision["*"]
        return entry.exponent

    def validate(self):
        if isinstance(self.checks, str):
            self.checks = [c for c in self.checks.split(",") if c.strip()]
        if not self.checks:
            raise ConfigError("no checks selected", "checks")
        try:
            ids = resolve(self.checks)
        except KeyError as exc:
            raise ConfigError(f"unknown check id {exc.args[0]!r} (see `supercong list`)", "checks") from None
        if self.p_min > self.p_max:
            raise ConfigError(f"empty prime range {self.p_min}..{self.p_max}", "primes")
        if not self.primes:
            raise ConfigError(f"no odd primes in {self.p_min}..{self.p_max}", "primes")
        for key, k in self.precision.items():
            if not isinstance(k, int) or k < 1:
                raise ConfigError(f"precision must be a positive integer, got {k!r}", f"precision.{key}")
            if key == "*":
                targets = [c for c in ids if CHECKS[c].adjustable]
                if not targets:
                    raise ConfigError("none of the selected checks accepts a precision override", "precision")
            elif key not in CHECKS:
                raise ConfigError(f"unknown check id {key!r}", f"precision.{key}")
            else:
                targets = [key]
            for c in targets:
                entry = CHECKS[c]
                if not entry.adjustable and k != entry.exponent:
                    raise ConfigError(f"{c} is fixed at {entry.modulus_label}", f"precision.{key}")
                if entry.exponent is not None and k < entry.exponent:
                    raise ConfigError(f"{c} needs at least p^{entry.exponent}, got p^{k}", f"precision.{key}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}", "format")
        if self.jobs is not None and (not isinstance(self.jobs, int) or self.jobs < 1):
            raise ConfigError("jobs must be a positive integer", "jobs")
        if self.eps is not None and any(e not in (1, -1) for e in self.eps):
            raise ConfigError("eps values must be +1 or -1", "eps")
        for name in ("m", "int_m", "n", "l"):
            values = getattr(self, name)
            if values is not None and any(v < 1 for v in values):
                raise ConfigError("values must be >= 1", name)
        if self.km_cases < 0:
            raise ConfigError("must be nonnegative", "km_cases")
        if self.corrupt_rhs is not None and self.corrupt_rhs not in CHECKS:
            raise ConfigError(f"unknown check id {self.corrupt_rhs!r}", "corrupt_rhs")

    def echo(self) -> dict:
        """Config as plain JSON values, for the report header; output paths are left out."""
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, list):
                v = [str(t) if isinstance(t, Fraction) else t for t in v]
            out[f.name] = v
        for key in ("jobs", "out", "summary", "plot_dir"):
            out.pop(key)
        return out


_SIMPLE_KEYS = {"seed": int, "km_cases": int, "jobs": int, "format": str, "out": str,
                "summary": str, "plot_dir": str, "fail_fast": bool, "corrupt_rhs": str}


def config_from_mapping(data: dict, source: str = "config") -> SweepConfig:
    """Build a SweepConfig from the JSON shape; ConfigError names the bad field."""
    if not isinstance(data, dict):
        raise ConfigError("top level must be an object", source)
    kwargs = {}
    for key, value in data.items():
        if key == "checks":
            kwargs["checks"] = value.split(",") if isinstance(value, str) else list(value)
        elif key == "primes":
            kwargs["p_min"], kwargs["p_max"] = parse_prime_range(value)
        elif key == "precision":
            if isinstance(value, int):
                value = {"*": value}
            if not isinstance(value, dict):
                raise ConfigError("expected an integer or an object", "precision")
            kwargs["precision"] = dict(value)
        elif key in ("alpha", "x"):
            kwargs[key] = parse_rational_list(value, key)
        elif key in ("m", "int_m", "n", "l", "eps"):
            kwargs[key] = parse_int_list(value, key)
        elif key in _SIMPLE_KEYS:
            if value is not None and not isinstance(value, _SIMPLE_KEYS[key]):
                raise ConfigError(f"expected {_SIMPLE_KEYS[key].__name__}, got {value!r}", key)
            kwargs[key] = value
        else:
            raise ConfigError("unknown field", key)
    return SweepConfig(**kwargs)


def load_config(path: str | Path) -> dict:
    """Read a JSON config file; syntax errors are reported with line and column."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(exc), str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}", str(path)) from None


def _corrupt(result: CheckResult) -> CheckResult:
    rhs = result.rhs
    if result.verdict is Verdict.PRECONDITION_UNMET or rhs is None:
        return result
    rhs = rhs + 1 if isinstance(rhs, (PadicResidue, Fraction, int)) else rhs
    verdict = Verdict.PASS if result.lhs == rhs else Verdict.FAIL
    return replace(result, rhs=rhs, verdict=verdict).with_note("rhs corrupted by test hook")


def run_unit(check: str, p: int | None, cfg: SweepConfig) -> tuple[list[dict], float]:
    """All cases of one check at one prime, in generation order."""
    start = time.perf_counter()
    entry = CHECKS[check]
    k = cfg.precision_for(check)
    records = []
    for params in entry.cases(p, cfg):
        result = run_case(check, p, params, k)
        if cfg.corrupt_rhs == check:
            result = _corrupt(result)
        records.append(result.to_record())
    return records, time.perf_counter() - start


@dataclass
class SweepReport:
    records: list
    counts: dict
    config: dict
    timing: dict
    stopped_early: bool = False
    version: str = __version__
    figures: list = field(default_factory=list)

    @property
    def failures(self) -> list[dict]:
        return [r for r in self.records if r["verdict"] == Verdict.FAIL.value]

    @property
    def totals(self) -> dict:
        out = dict.fromkeys(VERDICTS, 0)
        for c in self.counts.values():
            for v, n in c.items():
                out[v] += n
        return out

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def summary(self, with_timing: bool = True) -> dict:
        out = {
            "version": self.version,
            "config": self.config,
            "counts": self.counts,
            "totals": self.totals,
            "failures": self.failures,
            "stopped_early": self.stopped_early,
            "figures": self.figures,
        }
        if with_timing:
            out["timing"] = self.timing
        return out


def _units(cfg: SweepConfig) -> list[tuple[str, int | None]]:
    units = []
    for check in cfg.check_ids:
        if CHECKS[check].prime_indexed:
            units.extend((check, p) for p in cfg.primes)
        else:
            units.append((check, None))
    return units


def _has_failure(records) -> bool:
    return any(r["verdict"] == Verdict.FAIL.value for r in records)


def run_sweep(cfg: SweepConfig) -> SweepReport:
    start = time.perf_counter()
    units = _units(cfg)
    done: dict[int, tuple[list, float]] = {}
    stopped = False
    jobs = min(cfg.worker_count(), len(units))
    if jobs <= 1:
        for i, (check, p) in enumerate(units):
            done[i] = run_unit(check, p, cfg)
            if cfg.fail_fast and _has_failure(done[i][0]):
                stopped = i + 1 < len(units)
                break
    else:
        # Largest primes first keeps the tail short; merge order is restored below.
        order = sorted(range(len(units)), key=lambda i: -(units[i][1] or 0))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            pending = {pool.submit(run_unit, *units[i], cfg): i for i in order}
            while pending:
                finished, _ = wait(pending, return_when=FIRST_COMPLETED)
                for fut in finished:
                    i = pending.pop(fut)
                    done[i] = fut.result()
                    if cfg.fail_fast and _has_failure(done[i][0]) and pending:
                        stopped = True
                if stopped:
                    for fut in pending:
                        fut.cancel()
                    break

    records, counts, per_prime = [], {}, {}
    for i in sorted(done):
        check, p = units[i]
        recs, elapsed = done[i]
        records.extend(recs)
        tally = counts.setdefault(check, dict.fromkeys(VERDICTS, 0))
        for r in recs:
            tally[r["verdict"]] += 1
        key = "none" if p is None else str(p)
        per_prime[key] = round(per_prime.get(key, 0.0) + elapsed, 6)
    timing = {"wall_seconds": round(time.perf_counter() - start, 6), "per_prime_seconds": per_prime,
              "jobs": jobs}
    return SweepReport(records, counts, cfg.echo(), timing, stopped)


def _flat(record: dict) -> dict:
    row = {k: v for k, v in record.items() if k != "params"}
    for name, value in record["params"].items():
        row[f"param_{name}"] = value
    return row


def render_records(records: list[dict], fmt: str = "json") -> str:
    if fmt == "json":
        return "".join(json.dumps(r) + "\n" for r in records)
    rows = [_flat(r) for r in records]
    base = ["check", "p", "modulus", "lhs", "rhs", "verdict", "case_label", "note"]
    extra = sorted({k for r in rows for k in r} - set(base))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=base + extra, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def write_report(report: SweepReport, cfg: SweepConfig, stream=None):
    """Records go to cfg.out (or ``stream``); the summary JSON to cfg.summary when given."""
    text = render_records(report.records, cfg.format)
    if cfg.out:
        Path(cfg.out).write_text(text)
    elif stream is not None:
        stream.write(text)
    if cfg.summary:
        Path(cfg.summary).write_text(json.dumps(report.summary(), indent=2) + "\n")

