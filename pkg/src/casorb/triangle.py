"""(p,q,r) triangle-group geometry and the (2,3,7) geodesic machinery.

Hyperbolic conjugacy classes of the (2,3,7) group are represented by
cyclic words over the two order-7 rotations R and L.  A word's geodesic
length comes from the trace of its matrix product; its class count is the
number of distinct cyclic-canonical forms in the orbit of the word under
reversal and the R<->L swap, which models the four-element family
{g, g^-1, g*, (g*)^-1}.  Length is invariant under both involutions
(trace polynomials in SL(2) are), which the tests verify numerically.

Cyclic-word distinctness is a combinatorial proxy for distinctness of
conjugacy classes: group relations can identify words beyond the orbit
moves (same-trace classes are flagged, never merged here), so the count
is an upper bound on the number of distinct classes.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .contributions import LengthSpectrum, OrbifoldSignature, geodesic_contribution

__all__ = [
    "Mat2",
    "GeodesicClass",
    "WordError",
    "EllipticWordError",
    "NonHyperbolicSignatureError",
    "triangle_area",
    "triangle_signature",
    "systole_lengths",
    "generators_237",
    "word_to_matrix",
    "word_length",
    "canonical_rotation",
    "star_word",
    "reverse_word",
    "word_orbit",
    "class_count",
    "table_corpus",
    "enumerate_classes",
    "to_spectrum",
    "trace_coincidences",
    "classes_to_json",
]

log = logging.getLogger(__name__)

_TRANS = str.maketrans("RL", "01")   # R < L for canonical ordering


class WordError(ValueError):
    """Word is not a non-empty string over {R, L}."""


class EllipticWordError(ValueError):
    """Word represents a finite-order (or parabolic) element, no geodesic."""


class NonHyperbolicSignatureError(ValueError):
    """1/p + 1/q + 1/r >= 1: spherical or Euclidean signature."""


@dataclass
class Mat2:
    """Real 2x2 matrix with unit determinant maintained by renormalization."""

    a: float
    b: float
    c: float
    d: float

    def __matmul__(self, other: "Mat2") -> "Mat2":
        m = Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
        drift = m.det() - 1.0
        if abs(drift) > 1e-13:
            r = 1.0 / math.sqrt(m.det())
            m.a *= r
            m.b *= r
            m.c *= r
            m.d *= r
        return m

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    def inverse(self) -> "Mat2":
        det = self.det()
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)


@dataclass(frozen=True)
class GeodesicClass:
    """One conjugacy-class orbit: canonical word, trace, length, count, energy term."""

    representative: str
    trace: float
    length: float
    class_count: int
    contribution: float


def triangle_area(p: int, q: int, r: int) -> float:
    """Hyperbolic area 2 pi (1 - 1/p - 1/q - 1/r) of the (p,q,r) quotient."""
    for m in (p, q, r):
        if not isinstance(m, int) or m < 2:
            raise ValueError("cone orders must be integers >= 2")
    # exact rational test: (2,3,6)-style Euclidean signatures sit right on
    # the boundary and float rounding must not let them through
    defect = 1 - (Fraction(1, p) + Fraction(1, q) + Fraction(1, r))
    if defect <= 0:
        raise NonHyperbolicSignatureError(
            f"({p},{q},{r}) is not hyperbolic: 1/p + 1/q + 1/r >= 1")
    return 2.0 * math.pi * float(defect)


def triangle_signature(p: int, q: int, r: int) -> OrbifoldSignature:
    return OrbifoldSignature((p, q, r), triangle_area(p, q, r),
                             label=f"({p},{q},{r})")


def _acosh_length(x: float) -> float:
    if x <= 1.0:
        raise ValueError(f"arcosh argument must exceed 1 (got {x}); "
                         "no positive geodesic length at this signature")
    return 2.0 * math.acosh(x)


def systole_lengths(p: int, q: int, r: int):
    """First three geodesic lengths of a (p,q,r) quotient with all orders >= 3.

    The labelling convention is q >= p >= r; the closed forms are evaluated
    for any hyperbolic all->=3 triple.  Order-2 cone points are outside
    their range.
    """
    for m in (p, q, r):
        if not isinstance(m, int) or m < 3:
            raise ValueError("systole formulas need all cone orders >= 3")
    if Fraction(1, p) + Fraction(1, q) + Fraction(1, r) >= 1:
        raise NonHyperbolicSignatureError(
            f"({p},{q},{r}) is not hyperbolic")
    cp, cq, cr = (math.cos(math.pi / m) for m in (p, q, r))
    l1 = _acosh_length(2.0 * cr * cp + cq)
    l2 = _acosh_length(2.0 * cq * cr + cp)
    l3 = _acosh_length(2.0 * cp * cq + cr)
    return (l1, l2, l3)


@lru_cache(maxsize=1)
def generators_237():
    """(A, B, R, L) for the (2,3,7) group: A^3 = B^7 = (AB)^2 = -1, R = A^-1 B, L = B."""
    cot7 = 1.0 / math.tan(math.pi / 7.0)
    b = (math.sqrt(3.0 * (cot7 * cot7 - 3.0)) + math.sqrt(3.0) * cot7) / 3.0
    c3, s3 = math.cos(math.pi / 3.0), math.sin(math.pi / 3.0)
    c7, s7 = math.cos(math.pi / 7.0), math.sin(math.pi / 7.0)
    A = Mat2(c3, s3, -s3, c3)
    B = Mat2(c7, b * s7, -s7 / b, c7)
    R = A.inverse() @ B
    return A, B, R, B


def _validate_word(word: str) -> str:
    if not isinstance(word, str) or not word:
        raise WordError("word must be a non-empty string over {R, L}")
    if set(word) - {"R", "L"}:
        raise WordError(f"word may only contain R and L, got {word!r}")
    return word


def word_to_matrix(word: str) -> Mat2:
    """Left-to-right matrix product of the word's generators."""
    _validate_word(word)
    _, _, R, L = generators_237()
    m = Mat2(1.0, 0.0, 0.0, 1.0)
    for ch in word:
        m = m @ (R if ch == "R" else L)
    return m


def word_length(word: str) -> float:
    """Geodesic length 2 arcosh(|tr|/2) of a hyperbolic word."""
    t = abs(word_to_matrix(word).trace)
    if t <= 2.0 + 1e-12:
        raise EllipticWordError(
            f"{word!r} has |trace| = {t:.6f} <= 2: finite order or parabolic")
    return 2.0 * math.acosh(t / 2.0)


def star_word(word: str) -> str:
    """Swap R and L."""
    return _validate_word(word).translate(str.maketrans("RL", "LR"))


def reverse_word(word: str) -> str:
    return _validate_word(word)[::-1]


def canonical_rotation(word: str) -> str:
    """Lexicographically minimal cyclic rotation, ordering R < L."""
    _validate_word(word)
    doubled = word + word
    n = len(word)
    return min((doubled[i:i + n] for i in range(n)),
               key=lambda w: w.translate(_TRANS))


def word_orbit(word: str) -> tuple[str, ...]:
    """Sorted distinct canonical forms of {w, rev w, star w, rev star w}.

    The reversal realizes inversion up to conjugacy (trace-checked by the
    test suite), so these four cyclic words model {g, g^-1, g*, (g*)^-1}.
    """
    sw = star_word(word)
    forms = {
        canonical_rotation(word),
        canonical_rotation(word[::-1]),
        canonical_rotation(sw),
        canonical_rotation(sw[::-1]),
    }
    return tuple(sorted(forms, key=lambda w: w.translate(_TRANS)))


def class_count(word: str) -> int:
    """Number of distinct cyclic-canonical forms in the involution orbit.

    An upper bound for the number of distinct conjugacy classes among the
    four associated elements; group relations occasionally identify
    distinct cyclic words (the corpus stores the published counts).
    """
    n = len(word_orbit(word))
    assert n in (1, 2, 4)
    return n


# ----------------------------------------------------------------------
# the 27-row reference corpus: (word, class count, length, contribution)
# ----------------------------------------------------------------------

_CORPUS_ROWS = (
    ("RL",           1, 0.983987, -0.288955),
    ("RRLL",         1, 1.736006, -0.064746),
    ("RLRLL",        2, 2.131105, -0.069526),
    ("RLRRLL",       2, 2.661931, -0.032848),
    ("RLLRRLL",      2, 2.898149, -0.024028),
    ("RLRLRLL",      2, 3.154824, -0.017289),
    ("RLRRLRLL",     1, 3.542710, -0.0053429),
    ("RLRLRRLL",     2, 3.627316, -0.0096416),
    ("RLRRLRRLL",    2, 3.804704, -0.0077879),
    ("RLRLLRRLL",    2, 3.935946, -0.0066608),
    ("RLRLRLRLL",    2, 4.151972, -0.0051635),
    ("RLLRRLRRLL",   1, 4.201807, -0.0024355),
    ("RLRRLLRRLL",   2, 4.391460, -0.0039068),
    ("RLRLRRLRLL",   2, 4.489257, -0.0034894),
    ("RLRLRLRRLL",   2, 4.604733, -0.0030555),
    ("RLLRRLLRRLL",  2, 4.654014, -0.0028877),
    ("RLRLRRLRRLL",  2, 4.760433, -0.0025571),
    ("RLRLLRLRRLL",  4, 4.841798, -0.0046617),
    ("RLRLRLLRRLL",  2, 4.938763, -0.0020879),
    ("RLRLLRLLRRLL", 2, 5.013217, -0.0019192),
    ("RLRLRLRLRLL",  2, 5.140676, -0.0016622),
    ("RLRLLRRLRRLL", 2, 5.208017, -0.0015409),
    ("RLRLRLLRLRLL", 2, 5.288901, -0.0014072),
    ("RLRRLRLLRRLL", 2, 5.288901, -0.0014072),
    ("RLRLRRLLRRLL", 2, 5.351459, -0.0013120),
    ("RLRLRRLRLRLL", 1, 5.426797, -0.00060298),
    ("RLRLRLRRLRLL", 2, 5.459427, -0.0011628),
)

_LENGTH_TOL = 1e-5
_CONTRIBUTION_TOL = 5e-6


class CorpusIntegrityError(AssertionError):
    """Recomputed corpus values drifted from the stored reference data."""


@lru_cache(maxsize=1)
def table_corpus() -> tuple[GeodesicClass, ...]:
    """The reference corpus of the first primitive geodesic classes.

    Words and class counts are stored; lengths and contributions are
    recomputed from the generator matrices and winding sums, then checked
    against the stored reference values before anything is returned.
    """
    classes = []
    for word, count, ref_len, ref_a in _CORPUS_ROWS:
        m = word_to_matrix(word)
        length = word_length(word)
        a = geodesic_contribution(length, count)
        if abs(length - ref_len) > _LENGTH_TOL:
            raise CorpusIntegrityError(
                f"{word}: recomputed length {length} vs reference {ref_len}")
        if abs(a - ref_a) > _CONTRIBUTION_TOL:
            raise CorpusIntegrityError(
                f"{word}: recomputed contribution {a} vs reference {ref_a}")
        classes.append(GeodesicClass(word, m.trace, length, count, a))
    return tuple(classes)


def _lyndon_words(max_len: int) -> Iterator[str]:
    # Duval's generator: all Lyndon words of length <= max_len over R < L.
    w = [-1]
    alphabet = "RL"
    while w:
        w[-1] += 1
        yield "".join(alphabet[x] for x in w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == 1:
            w.pop()


def enumerate_classes(max_letters: int,
                      n_tail_tol: float = 1e-14) -> list[GeodesicClass]:
    """All hyperbolic involution orbits of aperiodic cyclic words.

    One :class:`GeodesicClass` per orbit, sorted by length then canonical
    word.  Finite-order words are skipped (count logged).  Orbits that
    share a trace are kept separate; use :func:`trace_coincidences` to
    inspect them.
    """
    if not 1 <= max_letters <= 20:
        raise ValueError("max_letters must lie in 1..20")
    seen: set[str] = set()
    skipped = 0
    classes: list[GeodesicClass] = []
    for word in _lyndon_words(max_letters):
        orbit = word_orbit(word)
        rep = orbit[0]
        if rep in seen:
            continue
        seen.add(rep)
        m = word_to_matrix(rep)
        t = abs(m.trace)
        if t <= 2.0 + 1e-12:
            skipped += 1
            continue
        length = 2.0 * math.acosh(t / 2.0)
        count = len(orbit)
        a = geodesic_contribution(length, count, n_tail_tol)
        classes.append(GeodesicClass(rep, m.trace, length, count, a))
    classes.sort(key=lambda c: (c.length, c.representative.translate(_TRANS)))
    if skipped:
        log.info("enumerate_classes(%d): skipped %d finite-order orbits",
                 max_letters, skipped)
    return classes


def trace_coincidences(classes: Iterable[GeodesicClass],
                       tol: float = 1e-9) -> list[list[GeodesicClass]]:
    """Groups of distinct orbits sharing a trace (necessary for conjugacy)."""
    by_trace: dict[float, list[GeodesicClass]] = {}
    out = []
    ordered = sorted(classes, key=lambda c: abs(c.trace))
    group: list[GeodesicClass] = []
    for c in ordered:
        if group and abs(abs(c.trace) - abs(group[-1].trace)) <= tol:
            group.append(c)
        else:
            if len(group) > 1:
                out.append(group)
            group = [c]
    if len(group) > 1:
        out.append(group)
    return out


def to_spectrum(classes: Iterable[GeodesicClass],
                merge_tol: Optional[float] = None,
                provenance: str = "enumerated") -> LengthSpectrum:
    """Expand class counts into a length spectrum.

    Entries stay separate by default even at equal lengths; pass
    ``merge_tol`` (typically 1e-9) to merge explicitly.
    """
    spec = LengthSpectrum.from_pairs(
        ((c.length, c.class_count) for c in classes), provenance)
    if merge_tol is not None:
        spec = spec.merged(merge_tol)
    return spec


def classes_to_json(classes: Iterable[GeodesicClass]) -> str:
    rows = [
        {
            "word": c.representative,
            "trace": c.trace,
            "length": c.length,
            "class_count": c.class_count,
            "contribution": c.contribution,
        }
        for c in classes
    ]
    return json.dumps(rows, indent=2)
