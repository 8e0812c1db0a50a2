"""Exceptional-set censuses: integers locally represented but not represented,
regularity up to a bound, and the cubic-in-(m-2) scaling experiment."""

from __future__ import annotations

import io
import json
import math
import sys
import time
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from multiprocessing import get_context

from .errors import InputError, ResourceError
from .localrep import locally_represents
from .polygonal import MgonalForm, decompose_target, polygonal_number
from .serialize import json_int

#: Hard ceiling on scan bounds; above this the table alone is unreasonable.
MAX_BOUND = 50_000_000


# ---------------------------------------------------------------------------
# Global representability table (exact, bound-complete)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _value_table(m: int, a: int, bound: int):
    """Term values a*P_m(x) <= bound: (distinct sorted values, preference order).

    Preference order (descending value, positive x first) fixes witness
    reconstruction deterministically.
    """
    pairs = [(0, 0)]
    k = 1
    while True:
        hit = False
        for x in (k, -k):
            v = a * polygonal_number(m, x)
            if v <= bound:
                pairs.append((v, x))
                hit = True
        if not hit:
            break
        k += 1
    pairs.sort(key=lambda t: (-t[0], t[1] < 0, abs(t[1])))
    values = sorted({v for v, _ in pairs})
    return values, tuple(pairs)


def _reach_stages(form: MgonalForm, bound: int):
    """Bitsets reach[i] of sums of the first i terms (bit N set = reachable)."""
    mask = (1 << (bound + 1)) - 1
    reach = [1]
    acc = 1
    for a in form.coeffs:
        values, _ = _value_table(form.m, a, bound)
        nxt = 0
        for v in values:
            nxt |= acc << v
        acc = nxt & mask
        reach.append(acc)
    return reach


def _witness_from_stages(form: MgonalForm, stages, N: int) -> tuple[int, ...]:
    out = []
    rem = N
    for i in range(form.rank - 1, -1, -1):
        _, pairs = _value_table(form.m, form.coeffs[i], N)
        for v, x in pairs:
            if v <= rem and (stages[i] >> (rem - v)) & 1:
                out.append(x)
                rem -= v
                break
        else:  # pragma: no cover - stages guarantee a decomposition
            raise ResourceError("witness reconstruction failed")
    return tuple(reversed(out))


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class ExceptionalReport:
    """Census over [0, bound]: the exceptional integers (locally represented
    but not represented), counts, and re-derivable witnesses."""

    form: MgonalForm
    bound: int
    exceptional: tuple[int, ...]
    locally_represented_count: int
    represented_count: int
    max_exceptional: int | None
    timings: dict
    _stages: list | None = None
    _local: list | None = None

    def witness(self, N: int) -> tuple[int, ...] | None:
        """Stored/re-derived witness for a represented N <= bound, else None."""
        if not 0 <= N <= self.bound:
            raise InputError(f"{N} outside the scanned range [0, {self.bound}]")
        stages = self._stages if self._stages is not None else _reach_stages(
            self.form, self.bound
        )
        if not (stages[-1] >> N) & 1:
            return None
        return _witness_from_stages(self.form, stages, N)

    def locally_represented(self, N: int) -> bool:
        if not 0 <= N <= self.bound:
            raise InputError(f"{N} outside the scanned range [0, {self.bound}]")
        if self._local is not None:
            return self._local[N]
        return bool(locally_represents(self.form, N))

    def to_json(self, *, stable: bool = False) -> dict:
        out = {
            "form": {"m": self.form.m, "coeffs": list(self.form.coeffs)},
            "bound": self.bound,
            "exceptional": [json_int(n) for n in self.exceptional],
            "counts": {
                "locally_represented": self.locally_represented_count,
                "represented": self.represented_count,
            },
            "max_exceptional": (
                json_int(self.max_exceptional)
                if self.max_exceptional is not None else None
            ),
        }
        if not stable:
            out["timings"] = self.timings
        return out

    def to_json_bytes(self, *, stable: bool = False) -> bytes:
        return json.dumps(
            self.to_json(stable=stable), sort_keys=True, separators=(",", ":")
        ).encode()

    def to_csv(self) -> str:
        """One row per exceptional N: N, A, B, evidence summary."""
        buf = io.StringIO()
        buf.write("N,A,B,evidence\n")
        for n in self.exceptional:
            dec = decompose_target(self.form.m, n)
            verdicts = locally_represents(self.form, n).verdicts
            rules = ";".join(f"p={v.p}:rule={v.rule}" for v in verdicts)
            buf.write(
                f"{n},{dec.A},{dec.B},"
                f"locally represented ({rules}) but no witness below bound\n"
            )
        return buf.getvalue()


_WORKER_STATE: dict = {}


def _worker_init(m, coeffs):
    _WORKER_STATE["form"] = MgonalForm(m=m, coeffs=coeffs)


def _worker_scan(chunk):
    lo, hi = chunk
    form = _WORKER_STATE["form"]
    return [bool(locally_represents(form, n)) for n in range(lo, hi)]


def _local_flags(form: MgonalForm, bound: int, jobs: int, progress) -> list[bool]:
    if jobs <= 1 or bound < 2048:
        flags = []
        for n in range(bound + 1):
            flags.append(bool(locally_represents(form, n)))
            if progress and n and n % 200_000 == 0:
                print(f"  local scan {n}/{bound}", file=sys.stderr)
        return flags
    chunk = (bound + jobs) // jobs
    chunks = [(lo, min(lo + chunk, bound + 1)) for lo in range(0, bound + 1, chunk)]
    ctx = get_context("fork") if sys.platform != "win32" else get_context("spawn")
    with ctx.Pool(jobs, initializer=_worker_init,
                  initargs=(form.m, form.coeffs)) as pool:
        parts = pool.map(_worker_scan, chunks)
    flags: list[bool] = []
    for part in parts:
        flags.extend(part)
    return flags


def exceptional_set(form: MgonalForm, bound: int, *, jobs: int = 1,
                    progress: bool = False) -> ExceptionalReport:
    """Exact exceptional set on [0, bound]; deterministic for any job count.

    The represented side is a complete subset-sum reachability table over the
    (nonnegative) term values, so every verdict below the bound is exact; the
    local side is chunked across workers and merged in order.
    """
    if bound < 1:
        raise InputError(f"bound must be positive, got {bound}")
    if bound > MAX_BOUND:
        raise ResourceError(f"bound {bound} exceeds the census ceiling {MAX_BOUND}")
    if form.rank < 3:
        raise InputError("census needs rank >= 3 (local side undecidable below)")
    if form.rank < 5:
        warnings.warn(
            "rank below 5: almost-regularity is not guaranteed; "
            "exceptional sets may grow with the bound",
            stacklevel=2,
        )
    t0 = time.perf_counter()
    stages = _reach_stages(form, bound)
    reach = stages[-1]
    t1 = time.perf_counter()
    local = _local_flags(form, bound, jobs, progress)
    t2 = time.perf_counter()
    exceptional = tuple(
        n for n in range(bound + 1) if local[n] and not (reach >> n) & 1
    )
    represented_count = sum(
        1 for n in range(bound + 1) if (reach >> n) & 1
    )
    local_count = sum(local)
    return ExceptionalReport(
        form=form,
        bound=bound,
        exceptional=exceptional,
        locally_represented_count=local_count,
        represented_count=represented_count,
        max_exceptional=exceptional[-1] if exceptional else None,
        timings={
            "reach_seconds": round(t1 - t0, 6),
            "local_seconds": round(t2 - t1, 6),
            "total_seconds": round(time.perf_counter() - t0, 6),
        },
        _stages=stages,
        _local=local,
    )


@dataclass(frozen=True)
class RegularityVerdict:
    regular_up_to_bound: bool
    exceptional: tuple[int, ...]
    bound: int


def regularity_check(form: MgonalForm, bound: int, *, jobs: int = 1) -> RegularityVerdict:
    """Regular-up-to-bound wrapper around the exceptional set."""
    report = exceptional_set(form, bound, jobs=jobs)
    return RegularityVerdict(
        regular_up_to_bound=not report.exceptional,
        exceptional=report.exceptional,
        bound=bound,
    )


@dataclass(frozen=True)
class ScalingRow:
    m: int
    bound: int
    max_exceptional: int | None
    seconds: float


@dataclass(frozen=True)
class ScalingResult:
    rows: tuple[ScalingRow, ...]
    fitted_slope: float | None

    def to_csv(self, *, stable: bool = False) -> str:
        buf = io.StringIO()
        buf.write("m,bound,max_exceptional,seconds\n")
        for row in self.rows:
            mx = row.max_exceptional if row.max_exceptional is not None else 0
            secs = "" if stable else f"{row.seconds:.3f}"
            buf.write(f"{row.m},{row.bound},{mx},{secs}\n")
        return buf.getvalue()

    def to_json(self, *, stable: bool = False) -> dict:
        return {
            "rows": [
                {
                    "m": r.m,
                    "bound": r.bound,
                    "max_exceptional": r.max_exceptional,
                    **({} if stable else {"seconds": r.seconds}),
                }
                for r in self.rows
            ],
            "fitted_slope": self.fitted_slope,
        }


def scaling_experiment(coeffs, m_min: int, m_max: int,
                       multiplier=Fraction(20), *, jobs: int = 1,
                       progress: bool = False) -> ScalingResult:
    """Scan each gonality m in [m_min, m_max] up to multiplier*(m-2)^3 and
    record the largest exceptional integer; fit log(1 + max_exceptional)
    against log(m-2) by least squares over the rows with nonempty exceptional
    sets (at least three such rows are required to report a slope)."""
    if m_min > m_max:
        raise InputError(f"empty gonality range [{m_min}, {m_max}]")
    if m_min < 3:
        raise InputError("gonality must be at least 3")
    multiplier = Fraction(multiplier)
    if multiplier <= 0:
        raise InputError("multiplier must be positive")
    rows = []
    for m in range(m_min, m_max + 1):
        form = MgonalForm(m=m, coeffs=tuple(coeffs))
        bound = int(math.ceil(multiplier * (m - 2) ** 3))
        t0 = time.perf_counter()
        report = exceptional_set(form, bound, jobs=jobs)
        rows.append(
            ScalingRow(
                m=m,
                bound=bound,
                max_exceptional=report.max_exceptional,
                seconds=round(time.perf_counter() - t0, 6),
            )
        )
        if progress:
            print(
                f"  m={m}: bound={bound} max_exceptional={report.max_exceptional}",
                file=sys.stderr,
            )
    points = [
        (math.log(r.m - 2), math.log(1 + r.max_exceptional))
        for r in rows
        if r.max_exceptional is not None and r.max_exceptional >= 1
    ]
    slope = None
    if len(points) >= 3:
        n = len(points)
        sx = sum(x for x, _ in points)
        sy = sum(y for _, y in points)
        sxx = sum(x * x for x, _ in points)
        sxy = sum(x * y for x, y in points)
        denom = n * sxx - sx * sx
        if denom > 0:
            slope = (n * sxy - sx * sy) / denom
    return ScalingResult(rows=tuple(rows), fitted_slope=slope)
