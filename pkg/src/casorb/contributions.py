"""The three spectral contributions and their rigorous truncation bounds.

The cone-point (elliptic) and area (identity) terms are exponentially
convergent double series in Struve kernels; both carry truncation bounds
inherited from the geometric remainder of the 1/(1+x) expansions that
generate them.  The geodesic (hyperbolic) term is a sum over a length
spectrum with a closed-form csch*K_{3/2} majorant controlling the
winding-number tail.  ``casimir_energy`` assembles everything into a
certified lower bound.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from .compensated import NeumaierSum
from .quadrature import QuadResult, elliptic_kernel_integral
from .specfun import csch_k1, csch_k1_array, struve_k, upper_incomplete_gamma_half

__all__ = [
    "OrbifoldSignature",
    "LengthSpectrum",
    "SeriesEvaluation",
    "AssumptionReport",
    "EnergyBreakdown",
    "SpectrumFormatError",
    "REFERENCE_TAIL_237",
    "elliptic_kernel_series",
    "elliptic_kernel_truncation_bound",
    "elliptic_kernel_truncation_bound_log10",
    "elliptic_kernel_series_noise",
    "elliptic_contribution",
    "elliptic_contribution_via_integral",
    "elliptic_small_angle_lower_bound",
    "identity_series",
    "identity_interval",
    "hyperbolic_term",
    "hyperbolic_n_tail_bound",
    "hyperbolic_contribution",
    "geodesic_contribution",
    "assumption_check",
    "tail_direct_sum",
    "tail_far_prefactor",
    "tail_far_integral",
    "tail_far_bound",
    "tail_windings_prefactor",
    "tail_windings_integral",
    "tail_higher_windings_bound",
    "growth_inequality_check",
    "casimir_energy",
    "read_spectrum_file",
    "spectrum_file_lines",
]

FOUR_PI = 4.0 * math.pi

# Reference magnitude for the full geodesic tail of the (2,3,7) run, used
# in reports next to the recomputed bound so the two can be compared.
REFERENCE_TAIL_237 = 0.293867


class SpectrumFormatError(ValueError):
    """Malformed spectrum file."""


# ----------------------------------------------------------------------
# domain types
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class OrbifoldSignature:
    """Cone-point orders and hyperbolic area of a compact quotient."""

    cone_orders: Tuple[int, ...]
    volume: float
    label: str = ""

    def __post_init__(self):
        if any((not isinstance(m, int)) or m < 2 for m in self.cone_orders):
            raise ValueError("cone orders must be integers >= 2")
        if not (self.volume > 0 and math.isfinite(self.volume)):
            raise ValueError("volume must be positive and finite")


@dataclass(frozen=True)
class LengthSpectrum:
    """Sorted primitive geodesic lengths with multiplicities."""

    entries: Tuple[Tuple[float, int], ...]
    provenance: str = "file"

    def __post_init__(self):
        prev = 0.0
        for ell, mult in self.entries:
            if ell <= 0 or not math.isfinite(ell):
                raise ValueError("lengths must be positive and finite")
            if mult < 1 or not isinstance(mult, int):
                raise ValueError("multiplicities must be positive integers")
            if ell < prev:
                raise ValueError("lengths must be non-decreasing")
            prev = ell

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[float, int]],
                   provenance: str = "file") -> "LengthSpectrum":
        return cls(tuple(sorted((float(l), int(m)) for l, m in pairs)),
                   provenance)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.entries)

    def expand(self) -> list[float]:
        """Lengths repeated by multiplicity, ascending."""
        out: list[float] = []
        for ell, mult in self.entries:
            out.extend([ell] * mult)
        return out

    def multiplicity_at(self, length: float, tol: float = 1e-9) -> int:
        return sum(m for ell, m in self.entries if abs(ell - length) <= tol)

    def merged(self, tol: float = 1e-9) -> "LengthSpectrum":
        """Opt-in merge of entries whose lengths agree within tol."""
        out: list[list] = []
        for ell, mult in self.entries:
            if out and ell - out[-1][0] <= tol:
                out[-1][1] += mult
            else:
                out.append([ell, mult])
        return LengthSpectrum(tuple((l, m) for l, m in out), self.provenance)


@dataclass(frozen=True)
class SeriesEvaluation:
    """A value with a rigorous truncation bound and the outer terms used."""

    value: float
    truncation_bound: float
    terms_used: int

    def __post_init__(self):
        if self.truncation_bound < 0:
            raise ValueError("truncation bound must be nonnegative")
        if self.terms_used < 0:
            raise ValueError("terms_used must be nonnegative")


@dataclass(frozen=True)
class AssumptionReport:
    """Result of checking ell_j >= log j + log log j over a spectrum."""

    holds: bool
    first_violation: Optional[int]
    checked_through: int
    skipped_below: int


@dataclass(frozen=True)
class EnergyBreakdown:
    identity: SeriesEvaluation
    identity_interval: Tuple[float, float]
    elliptic: SeriesEvaluation
    hyperbolic_head: float
    hyperbolic_head_bound: float
    hyperbolic_tail_magnitude_bound: float
    tail_components: Optional[Tuple[float, float, float]]
    certified_lower_bound: float
    assumption: AssumptionReport

    @property
    def assumption_verified_through(self) -> int:
        return self.assumption.checked_through


# ----------------------------------------------------------------------
# cone-point (elliptic) term
# ----------------------------------------------------------------------

def _k1_over_arg(x: float) -> float:
    return struve_k(1, x).value / x


def elliptic_kernel_truncation_bound(C: float, N: int) -> float:
    """2^{-N} (pi C K_1(C) + 4) / (2 C^2), the remainder after N outer terms."""
    if C <= 0:
        raise ValueError("C must be positive")
    k1 = struve_k(1, C).value
    return math.ldexp((math.pi * C * k1 + 4.0) / (2.0 * C * C), -N)


def elliptic_kernel_truncation_bound_log10(C: float, N: int) -> float:
    """log10 of the same bound, safe for N far beyond float underflow."""
    if C <= 0:
        raise ValueError("C must be positive")
    k1 = struve_k(1, C).value
    return (-N * math.log10(2.0)
            + math.log10((math.pi * C * k1 + 4.0) / (2.0 * C * C)))


def elliptic_kernel_series(C: float, D: float = 0.0, s: float = -0.5,
                           N: int = 60) -> SeriesEvaluation:
    """pi * sum_{n<N} 2^{-n-2} sum_k (-1)^k C(n,k) K_1(C+Dk)/(C+Dk).

    Only s = -1/2 (Struve order 1) is implemented; the kernel identity
    holds for general s < 1 but nothing downstream needs it.
    """
    if C <= 0:
        raise ValueError("C must be positive")
    if D < 0:
        raise ValueError("D must be nonnegative")
    if s != -0.5:
        raise NotImplementedError("elliptic_kernel_series is specialized to s = -1/2")
    if N < 1:
        raise ValueError("N must be >= 1")

    f = [_k1_over_arg(C + D * k) for k in range(N)]
    outer = NeumaierSum()
    for n in range(N):
        inner = NeumaierSum()
        for k in range(n + 1):
            term = math.comb(n, k) * f[k]
            inner.add(term if k % 2 == 0 else -term)
        outer.add(math.ldexp(inner.total, -(n + 2)))
    return SeriesEvaluation(math.pi * outer.total,
                            elliptic_kernel_truncation_bound(C, N), N)


def elliptic_kernel_series_noise(C: float, D: float = 0.0, N: int = 60) -> float:
    """First-order rounding envelope of the alternating inner sums.

    eps times the 2^{-n-2}-scaled sum of |binomial * kernel| terms; the
    compensated accumulation keeps the realized noise at this level.
    """
    f = [abs(_k1_over_arg(C + D * k)) for k in range(N)]
    acc = 0.0
    for n in range(N):
        abs_inner = math.fsum(math.comb(n, k) * f[k] for k in range(n + 1))
        acc += math.ldexp(abs_inner, -(n + 2))
    return math.pi * acc * math.ulp(1.0)


def _cone_weights(sig: OrbifoldSignature):
    for m in sig.cone_orders:
        for ell in range(1, m):
            yield m, ell, 1.0 / (4.0 * m * math.sin(math.pi * ell / m))


def elliptic_contribution(sig: OrbifoldSignature, N: int = 60) -> SeriesEvaluation:
    """Total cone-point contribution: sum of weighted kernel series.

    Each cyclic subgroup of order m contributes m-1 kernel evaluations at
    C = pi*l/m, D = pi, weighted by 1/(4 m sin(pi l / m)).
    """
    vals, bounds = [], []
    for m, ell, w in _cone_weights(sig):
        ser = elliptic_kernel_series(math.pi * ell / m, math.pi, -0.5, N)
        vals.append(w * ser.value)
        bounds.append(w * ser.truncation_bound)
    return SeriesEvaluation(math.fsum(vals), math.fsum(bounds), N)


def elliptic_contribution_via_integral(sig: OrbifoldSignature,
                                       tol_rel: float = 1e-12) -> QuadResult:
    """Quadrature cross-route for :func:`elliptic_contribution`."""
    vals, errs, evals = [], [], 0
    conv = True
    for m, ell, w in _cone_weights(sig):
        res = elliptic_kernel_integral(math.pi * ell / m, math.pi, -0.5,
                                       tol_rel=tol_rel)
        vals.append(w * res.value)
        errs.append(w * res.est_error)
        evals += res.evaluations
        conv = conv and res.converged
    return QuadResult(math.fsum(vals), math.fsum(errs), max(evals, 1), conv)


def elliptic_small_angle_lower_bound(theta: float) -> float:
    """pi K_1(theta) / (4 theta), a lower bound for the cone kernel integral.

    Grows like 1/theta^2 as the cone angle closes, which is what makes
    sharp cones dominate the energy.
    """
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    return math.pi * struve_k(1, theta).value / (4.0 * theta)


# ----------------------------------------------------------------------
# area (identity) term
# ----------------------------------------------------------------------

def identity_series(volume: float, N: int = 60) -> SeriesEvaluation:
    """-(vol/pi) sum_{n<N} (n+1) 2^{-n-6} sum_k (-1)^k C(n,k) K_2(pi(1+k))/(1+k)^2.

    The truncation bound comes from the remainder of the 1/(1+x)^2
    expansion, sum_{n>=N} (n+1) 2^{-n-2} <= (N+2) 2^{-N-1}, times the
    closed-form value of the undamped integral, 3 K_2(pi) / (2 pi).
    """
    if volume <= 0:
        raise ValueError("volume must be positive")
    if N < 1:
        raise ValueError("N must be >= 1")
    f = [struve_k(2, math.pi * (1 + k)).value / (1 + k) ** 2 for k in range(N)]
    outer = NeumaierSum()
    for n in range(N):
        inner = NeumaierSum()
        for k in range(n + 1):
            term = math.comb(n, k) * f[k]
            inner.add(term if k % 2 == 0 else -term)
        outer.add((n + 1) * math.ldexp(inner.total, -(n + 6)))
    value = -volume / math.pi * outer.total
    bound = (volume * (N + 2) * math.ldexp(1.0, -(N + 1))
             * struve_k(2, math.pi).value / (16.0 * math.pi))
    return SeriesEvaluation(value, bound, N)


def identity_interval(volume: float) -> Tuple[float, float]:
    """Exact bracket (-2 vol / (45 pi), -vol / (36 pi)) for the area term."""
    if volume <= 0:
        raise ValueError("volume must be positive")
    return (-2.0 * volume / (45.0 * math.pi), -volume / (36.0 * math.pi))


# ----------------------------------------------------------------------
# geodesic (hyperbolic) term
# ----------------------------------------------------------------------

def hyperbolic_term(ell: float, n: int) -> float:
    """(1/n) csch(n ell / 2) K_1(n ell / 2); one winding of one geodesic."""
    if ell <= 0:
        raise ValueError("length must be positive")
    if n < 1:
        raise ValueError("winding number must be >= 1")
    return csch_k1(0.5 * n * ell) / n


def _csch_k32(z: float) -> float:
    # csch(z) K_{3/2}(z) = sqrt(2 pi / z) (1+z) e^{-2z} / (z (1 - e^{-2z}))
    return (math.sqrt(2.0 * math.pi / z) * (1.0 + z) * math.exp(-2.0 * z)
            / (z * -math.expm1(-2.0 * z)))


def hyperbolic_n_tail_bound(ell: float, n_done: int) -> float:
    """Bound on sum_{n > n_done} (1/n) csch(n ell/2) K_1(n ell/2).

    K_1 <= K_{3/2} gives a closed-form majorant whose successive terms
    shrink at least by e^{-ell}; the tail is the usual geometric sum.
    """
    n = n_done + 1
    first = _csch_k32(0.5 * n * ell) / n
    return first / -math.expm1(-ell)


def _winding_sum(ell: float, tol: float):
    """sum_n (1/n) csch K_1 truncated once the majorant tail is <= tol."""
    acc = NeumaierSum()
    n = 0
    while True:
        n += 1
        acc.add(hyperbolic_term(ell, n))
        tail = hyperbolic_n_tail_bound(ell, n)
        if tail <= tol:
            return acc.total, tail, n
        if n > 100000:
            raise ArithmeticError("winding sum did not reach tolerance")


def hyperbolic_contribution(spectrum: LengthSpectrum,
                            n_tail_tol: float = 1e-13) -> SeriesEvaluation:
    """-(1/4pi) sum over the spectrum of the winding sums."""
    if len(spectrum) == 0:
        raise ValueError("empty length spectrum")
    vals, bounds = [], []
    max_n = 0
    for ell, mult in spectrum.entries:
        s, tail, n = _winding_sum(ell, n_tail_tol)
        vals.append(mult * s)
        bounds.append(mult * tail)
        max_n = max(max_n, n)
    return SeriesEvaluation(-math.fsum(vals) / FOUR_PI,
                            math.fsum(bounds) / FOUR_PI, max_n)


def geodesic_contribution(ell: float, weight: int = 1,
                          n_tail_tol: float = 1e-14) -> float:
    """Contribution of one geodesic class counted ``weight`` times."""
    s, _, _ = _winding_sum(ell, n_tail_tol)
    return -weight * s / FOUR_PI


# ----------------------------------------------------------------------
# growth assumption and tail bounds
# ----------------------------------------------------------------------

def _growth_threshold(j: int) -> float:
    return math.log(j) + math.log(math.log(j))


def assumption_check(spectrum: LengthSpectrum,
                     start_index: int = 1) -> AssumptionReport:
    """Check ell_j >= log j + log log j for represented indices j.

    Indices below 3 are skipped (and counted): log log j only makes sense
    once log j clears 1.
    """
    lengths = spectrum.expand()
    lo = max(start_index, 3)
    skipped = min(len(lengths), lo - 1)
    first_violation = None
    checked_through = 0
    for j in range(lo, len(lengths) + 1):
        checked_through = j
        if lengths[j - 1] < _growth_threshold(j):
            first_violation = j
            break
    return AssumptionReport(first_violation is None, first_violation,
                            checked_through, skipped)


def _tail_chunks(j_lo: int, j_hi: int, chunk: int):
    start = j_lo
    while start <= j_hi:
        stop = min(start + chunk, j_hi + 1)
        yield start, stop
        start = stop


def _tail_chunk_sum(start: int, stop: int) -> float:
    j = np.arange(start, stop, dtype=np.float64)
    z = 0.5 * (np.log(j) + np.log(np.log(j)))
    return float(csch_k1_array(z).sum())


def tail_direct_sum(j_lo: int = 51, j_hi: int = 10_000_000,
                    chunk: int = 1 << 20, threads: Optional[int] = None) -> float:
    """(1/4pi) sum_{j=j_lo}^{j_hi} csch(z_j) K_1(z_j), z_j from the growth floor.

    A pure positive reduction over index chunks; chunk sums use numpy's
    pairwise summation and are combined in index order with fsum, so the
    result is independent of the thread schedule.
    """
    if not 3 <= j_lo <= j_hi:
        raise ValueError("need 3 <= j_lo <= j_hi")
    ranges = list(_tail_chunks(j_lo, j_hi, chunk))
    if threads is None:
        threads = int(os.environ.get("CASORB_THREADS", "1"))
    if threads > 1 and len(ranges) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda r: _tail_chunk_sum(*r), ranges))
    else:
        parts = [_tail_chunk_sum(*r) for r in ranges]
    return math.fsum(parts) / FOUR_PI


def tail_far_prefactor(j_split: int) -> float:
    """A_{1, j} / (2 sqrt(pi)) with A_{n, j} = 1 + 2/(n (log j + log log j))."""
    return (1.0 + 2.0 / _growth_threshold(j_split)) / (2.0 * math.sqrt(math.pi))


def tail_far_integral(j_split: int) -> float:
    """Integral bound for sum_{j > j_split} 1/(j log^{3/2} j): 2/sqrt(log j_split)."""
    return 2.0 / math.sqrt(math.log(j_split))


def tail_far_bound(j_split: int = 10_000_000) -> float:
    """Bound on the single-winding contribution of indices beyond j_split."""
    if j_split < 16:
        raise ValueError("the majorant chain is only asserted for j >= 16")
    return tail_far_prefactor(j_split) * tail_far_integral(j_split)


def tail_windings_prefactor(j_lo: int) -> float:
    """sup over n >= 2 of A_{n, j_lo} / (2 sqrt(pi))."""
    return (1.0 + 1.0 / _growth_threshold(j_lo)) / (2.0 * math.sqrt(math.pi))


def tail_windings_integral(j_lo: int) -> float:
    """(1/1.9) int_{j_lo - 1}^inf dj / (j^2 log^{5/2} j), in closed form."""
    a = float(j_lo - 1)
    la = math.log(a)
    integral = (2.0 / (3.0 * a * la ** 1.5)
                - 4.0 / (3.0 * a * math.sqrt(la))
                + 4.0 * upper_incomplete_gamma_half(la) / 3.0)
    return integral / 1.9


def tail_higher_windings_bound(j_lo: int = 51) -> float:
    """Bound on all n >= 2 windings of geodesics with index >= j_lo."""
    if j_lo < 51:
        raise ValueError("-log(1 - 1/x) <= 1/x + 1/(1.9 x^2) is used from x = 50 up")
    return tail_windings_prefactor(j_lo) * tail_windings_integral(j_lo)


def growth_inequality_check(j: int, n: int) -> bool:
    """j^n log^{n+1/2} j <= (j^n log^n j - 1)(log j + log log j)^{1/2}.

    Evaluated in log space so large n cannot overflow.  Guaranteed for
    j >= 16; smaller j are evaluated as-is.
    """
    if j < 2 or n < 1:
        raise ValueError("need j >= 2 and n >= 1")
    lj = math.log(j)
    llj = math.log(lj)
    v = n * (lj + llj)           # log(j^n log^n j)
    if v <= 0:
        return False
    lhs = n * lj + (n + 0.5) * llj
    rhs = v + math.log1p(-math.exp(-v)) + 0.5 * math.log(lj + llj)
    return lhs <= rhs


# ----------------------------------------------------------------------
# assembly
# ----------------------------------------------------------------------

def casimir_energy(sig: OrbifoldSignature,
                   spectrum: Optional[LengthSpectrum] = None,
                   N: int = 60,
                   n_tail_tol: float = 1e-13,
                   tail_j_lo: int = 51,
                   tail_j_hi: int = 10_000_000) -> EnergyBreakdown:
    """Assemble the certified lower bound for the energy at s = -1/2.

    The bound takes the pessimistic end of every piece: the low end of the
    identity bracket, the cone-point series minus its truncation bound,
    the spectrum head, and minus the full tail magnitude (direct sum plus
    far-index and higher-winding bounds).  The tail model presumes the
    spectrum covers the geodesics below index ``tail_j_lo`` and that the
    growth floor holds beyond; ``assumption`` records what was checkable.
    With an empty spectrum only the identity and cone terms are reported.
    """
    ident = identity_series(sig.volume, N)
    interval = identity_interval(sig.volume)
    ellip = elliptic_contribution(sig, N)

    if spectrum is not None and len(spectrum) > 0:
        head = hyperbolic_contribution(spectrum, n_tail_tol)
        b1 = tail_direct_sum(tail_j_lo, tail_j_hi)
        b2 = tail_far_bound(tail_j_hi)
        b3 = tail_higher_windings_bound(tail_j_lo)
        tail_components: Optional[Tuple[float, float, float]] = (b1, b2, b3)
        tail_bound = b1 + b2 + b3
        head_value, head_bound = head.value, head.truncation_bound
        report = assumption_check(spectrum)
    else:
        tail_components = None
        tail_bound = 0.0
        head_value = head_bound = 0.0
        report = AssumptionReport(True, None, 0, 0)

    certified = (ellip.value - ellip.truncation_bound + interval[0]
                 + head_value - tail_bound)
    return EnergyBreakdown(
        identity=ident,
        identity_interval=interval,
        elliptic=ellip,
        hyperbolic_head=head_value,
        hyperbolic_head_bound=head_bound,
        hyperbolic_tail_magnitude_bound=tail_bound,
        tail_components=tail_components,
        certified_lower_bound=certified,
        assumption=report,
    )


# ----------------------------------------------------------------------
# spectrum file format: "length,multiplicity" with '#' comments
# ----------------------------------------------------------------------

def read_spectrum_file(path: str) -> LengthSpectrum:
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = [f.strip() for f in line.split(",")]
            if len(fields) != 2:
                raise SpectrumFormatError(
                    f"{path}:{lineno}: expected 'length,multiplicity'")
            try:
                ell = float(fields[0])
                mult = int(fields[1])
            except ValueError as exc:
                raise SpectrumFormatError(f"{path}:{lineno}: {exc}") from exc
            pairs.append((ell, mult))
    if not pairs:
        raise SpectrumFormatError(f"{path}: no spectrum entries found")
    try:
        return LengthSpectrum.from_pairs(pairs, provenance="file")
    except ValueError as exc:
        raise SpectrumFormatError(f"{path}: {exc}") from exc


def spectrum_file_lines(spectrum: LengthSpectrum) -> list[str]:
    lines = ["# length,multiplicity"]
    lines.extend(f"{ell!r},{mult}" for ell, mult in spectrum.entries)
    return lines
