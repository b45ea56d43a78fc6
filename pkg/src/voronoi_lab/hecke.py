"""GL(N) Fourier coefficients from Satake parameters via Schur polynomials.

A coefficient source produces A(m_1, ..., m_{N-1}) for a degree-N form.  For
Satake-backed sources each prime-power block is a Schur polynomial in that
prime's parameters and blocks multiply across coprime parts, so the Hecke
relations hold by construction; raw tables bypass the Schur structure
entirely and serve identities that are pure finite arithmetic.

Index orientation (which end of the exponent tuple pairs with the standard
L-function) is an empirically pinned convention, not a formula quoted from a
reference: it is fixed so that the generating series of A(1, ..., 1, p^k) in
p^{-s} is the inverse of the degree-N Euler factor, and the regression tests
assert this together with the Hecke recursions that depend on it.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import threading
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .residues import divisors, factorize, primes_up_to

_DET_TOL = 1e-12


def _hvec(x: tuple[complex, ...], kmax: int) -> list[complex]:
    """Complete homogeneous symmetric polynomials h_0..h_kmax of x."""
    h = [1 + 0j] + [0j] * kmax
    for xi in x:
        for k in range(1, kmax + 1):
            h[k] = h[k] + xi * h[k - 1]
    return h


def _det_fraction_free(a: list[list[complex]]) -> complex:
    """Bareiss (fraction-free) determinant with partial pivoting; destroys a."""
    n = len(a)
    sign = 1
    prev = 1 + 0j
    for k in range(n - 1):
        piv = max(range(k, n), key=lambda r: abs(a[r][k]))
        if abs(a[piv][k]) == 0.0:
            return 0j
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            a[i][k] = 0j
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def schur(k: tuple[int, ...], x: tuple[complex, ...]) -> complex:
    """Schur polynomial S_{k_1,...,k_{N-1}}(x_1,...,x_N).

    The partition is lambda_j = k_j + ... + k_{N-1}; evaluation is the
    Jacobi-Trudi determinant det(h_{lambda_i - i + j}) over the complete
    homogeneous polynomials of x.
    """
    if any(ki < 0 for ki in k):
        raise ValueError("Schur indices must be nonnegative")
    rows = len(k)
    if rows == 0:
        return 1 + 0j
    lam = list(itertools.accumulate(reversed(k)))[::-1]
    h = _hvec(tuple(x), lam[0] + rows)
    mat = [
        [h[lam[i] - (i + 1) + (j + 1)] if 0 <= lam[i] - (i + 1) + (j + 1) else 0j for j in range(rows)]
        for i in range(rows)
    ]
    return _det_fraction_free(mat)


def schur_bialternant(k: tuple[int, ...], x: tuple[complex, ...]) -> complex:
    """Ratio-of-alternants oracle: det(x_i^(lambda_j + N - j)) / det(x_i^(N - j)).

    Degenerates when parameters nearly coincide; used only as a test oracle
    away from the Vandermonde cancellation locus.
    """
    n = len(x)
    lam = list(itertools.accumulate(reversed(k)))[::-1] + [0] * (n - len(k))
    num = np.array([[xi ** (lam[j] + n - 1 - j) for j in range(n)] for xi in x])
    den = np.array([[xi ** (n - 1 - j) for j in range(n)] for xi in x])
    return complex(np.linalg.det(num) / np.linalg.det(den))


# ---------------------------------------------------------------------------
# Parameter families


@dataclass(frozen=True)
class SatakeParams:
    """Per-prime tuples (alpha_1(p), ..., alpha_N(p)) with product 1."""

    degree: int
    alphas: Mapping[int, tuple[complex, ...]]

    def __post_init__(self):
        object.__setattr__(self, "alphas", MappingProxyType(dict(self.alphas)))
        for p, a in self.alphas.items():
            if len(a) != self.degree:
                raise ValueError(f"expected {self.degree} parameters at p = {p}")
            prod = math.prod(a, start=1 + 0j)
            if abs(prod - 1) > 1e-12 * max(1.0, abs(prod)):
                raise ValueError(f"parameter product at p = {p} is {prod}, not 1")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(self.alphas))

    def alphas_at(self, p: int) -> tuple[complex, ...]:
        try:
            return self.alphas[p]
        except KeyError:
            raise ValueError(f"prime {p} not populated in SatakeParams") from None


def random_satake(degree: int, prime_bound: int, seed: int) -> SatakeParams:
    """N-1 parameters uniform on the unit circle, the last their inverse product."""
    rng = np.random.default_rng(seed)
    table = {}
    for p in primes_up_to(prime_bound):
        angles = rng.uniform(0.0, 2.0 * np.pi, degree - 1)
        a = [complex(np.exp(1j * t)) for t in angles]
        a.append(1 / math.prod(a, start=1 + 0j))
        table[p] = tuple(a)
    return SatakeParams(degree, table)


def isobaric_params(degree: int, shifts: tuple[complex, ...], prime_bound: int) -> SatakeParams:
    """alpha_i(p) = p^(-s_i) for balanced shifts (sum 0)."""
    if len(shifts) != degree:
        raise ValueError("need one shift per degree")
    total = sum(shifts)
    if abs(total) > 1e-12 * max(1.0, max((abs(s) for s in shifts), default=0.0)):
        raise ValueError(f"shifts must sum to zero, got {total}")
    table = {
        p: tuple(complex(p) ** (-s) for s in shifts) for p in primes_up_to(prime_bound)
    }
    return SatakeParams(degree, table)


def rankin_selberg_params(f1: SatakeParams, f2: SatakeParams) -> SatakeParams:
    """All pairwise products alpha_i(p) beta_j(p); degree N1*N2."""
    if f1.primes != f2.primes:
        raise ValueError("parameter families live on different prime sets")
    table = {
        p: tuple(a * b for a in f1.alphas_at(p) for b in f2.alphas_at(p))
        for p in f1.primes
    }
    return SatakeParams(f1.degree * f2.degree, table)


# ---------------------------------------------------------------------------
# Coefficient sources


def _hash_unit(seed: int, degree: int, key: tuple) -> complex:
    h = hashlib.sha256(f"{seed}|{degree}|{key}".encode()).digest()
    u = int.from_bytes(h[:8], "big") / 2**64
    v = int.from_bytes(h[8:16], "big") / 2**64
    return complex(2 * u - 1, 2 * v - 1)


class CoefficientSource:
    """Fourier coefficients A(m_1,...,m_{N-1}) of a degree-N symbol.

    kind is one of "random-satake", "isobaric", "rankin-selberg" (all backed
    by SatakeParams and Schur blocks) or "raw-table" (explicit values,
    optionally extended by seeded deterministic draws per prime block).
    Memo dictionaries are only ever inserted into (atomic in CPython), so
    concurrent readers are safe.
    """

    def __init__(
        self,
        kind: str,
        degree: int,
        satake: SatakeParams | None = None,
        table: Mapping[tuple[int, ...], complex] | None = None,
        seed: int | None = None,
    ):
        if degree < 2:
            raise ValueError("degree must be >= 2")
        if kind in ("random-satake", "isobaric", "rankin-selberg"):
            if satake is None or satake.degree != degree:
                raise ValueError(f"kind {kind} requires SatakeParams of degree {degree}")
        elif kind == "raw-table":
            if satake is not None:
                raise ValueError("raw-table sources have no SatakeParams")
            if table is None and seed is None:
                raise ValueError("raw-table needs explicit values, a seed, or both")
        else:
            raise ValueError(f"unknown kind {kind!r}")
        self.kind = kind
        self.degree = degree
        self.satake = satake
        self.seed = seed
        # filled in by isobaric_source; lets downstream series evaluators
        # recover the L-function factorization without re-deriving shifts
        self.isobaric_shifts: tuple[complex, ...] | None = None
        self._table = dict(table or {})
        self._memo: dict[tuple[int, ...], complex] = {}
        self._blocks: dict[tuple[int, tuple[int, ...]], complex] = {}
        self._row_cache: dict[tuple, object] = {}
        self._lock = threading.Lock()

    # -- prime blocks -------------------------------------------------------

    def _block(self, p: int, kvec: tuple[int, ...]) -> complex:
        key = (p, kvec)
        hit = self._blocks.get(key)
        if hit is None:
            if self.satake is not None:
                hit = schur(kvec, self.satake.alphas_at(p))
            else:
                hit = _block_from_table(self, p, kvec)
            self._blocks[key] = hit
        return hit

    def coefficient(self, m: tuple[int, ...]) -> complex:
        """A(m); prime-power blocks assembled multiplicatively (coprime parts)."""
        m = tuple(int(v) for v in m)
        if len(m) != self.degree - 1:
            raise ValueError(f"need {self.degree - 1} indices, got {len(m)}")
        if any(v < 1 for v in m):
            raise ValueError("indices must be >= 1")
        hit = self._memo.get(m)
        if hit is not None:
            return hit
        if self.kind == "raw-table" and m in self._table:
            self._memo[m] = self._table[m]
            return self._table[m]
        out = 1 + 0j
        support: dict[int, list[int]] = {}
        for pos, v in enumerate(m):
            for p, e in factorize(v):
                support.setdefault(p, [0] * (self.degree - 1))[pos] = e
        for p, evec in support.items():
            # block indices pair the last coordinate of m with k_1
            out *= self._block(p, tuple(reversed(evec)))
        self._memo[m] = out
        return out

    def dual_coefficient(self, m: tuple[int, ...]) -> complex:
        """B(m) = A with the index tuple reversed."""
        return self.coefficient(tuple(reversed(m)))


def _block_from_table(src: CoefficientSource, p: int, kvec: tuple[int, ...]) -> complex:
    """Raw-table prime block: m with p^k at the positions kvec prescribes."""
    m = tuple(p**e for e in reversed(kvec))
    if m in src._table:
        return src._table[m]
    if all(e == 0 for e in kvec):
        return 1 + 0j
    if src.seed is None:
        raise ValueError(f"raw table has no entry for {m}")
    val = _hash_unit(src.seed, src.degree, m)
    src._table[m] = val
    return val


def random_satake_source(degree: int, prime_bound: int, seed: int) -> CoefficientSource:
    return CoefficientSource(
        "random-satake", degree, satake=random_satake(degree, prime_bound, seed)
    )


def isobaric_source(degree: int, shifts: tuple[complex, ...], prime_bound: int) -> CoefficientSource:
    src = CoefficientSource(
        "isobaric", degree, satake=isobaric_params(degree, shifts, prime_bound)
    )
    src.isobaric_shifts = tuple(complex(sh) for sh in shifts)
    return src


def rankin_selberg_source(f1: SatakeParams, f2: SatakeParams) -> CoefficientSource:
    return CoefficientSource(
        "rankin-selberg",
        f1.degree * f2.degree,
        satake=rankin_selberg_params(f1, f2),
    )


def raw_table_source(
    degree: int,
    table: Mapping[tuple[int, ...], complex] | None = None,
    seed: int | None = None,
) -> CoefficientSource:
    return CoefficientSource("raw-table", degree, table=table, seed=seed)


# -- module-level operation forms -------------------------------------------


def coefficient(f: CoefficientSource, m: tuple[int, ...]) -> complex:
    return f.coefficient(m)


def dual_coefficient(f: CoefficientSource, m: tuple[int, ...]) -> complex:
    return f.dual_coefficient(m)


def verify_hecke_relations(
    f: CoefficientSource, n: int, m: tuple[int, ...]
) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
    """Both sides of the two Hecke recursions.

    First pair: A(1,..,1,n) A(m_{N-1},..,m_1) against the divisor sum over
    d_0 d_1 ... d_{N-1} = n with d_i | m_i of A(m_{N-1} d_{N-2}/d_{N-1}, ...,
    m_1 d_0/d_1).  Second pair: A(n,1,..,1) A(m_1,..,m_{N-1}) against the sum
    of A(m_1 d_0/d_1, ..., m_{N-1} d_{N-2}/d_{N-1}).
    """
    deg = f.degree
    if len(m) != deg - 1:
        raise ValueError(f"need {deg - 1} indices")
    last = (1,) * (deg - 2) + (n,)
    first = (n,) + (1,) * (deg - 2)
    lhs_a = f.coefficient(last) * f.coefficient(tuple(reversed(m)))
    lhs_b = f.coefficient(first) * f.coefficient(m)
    rhs_a = 0j
    rhs_b = 0j
    for dtail in itertools.product(*(divisors(mi) for mi in m)):
        dp = math.prod(dtail)
        if n % dp != 0:
            continue
        d = (n // dp,) + dtail  # d[i] = d_i, i = 0..N-1
        idx_a = tuple(m[deg - j - 1] * d[deg - 1 - j] // d[deg - j] for j in range(1, deg))
        idx_b = tuple(m[j - 1] * d[j - 1] // d[j] for j in range(1, deg))
        rhs_a += f.coefficient(idx_a)
        rhs_b += f.coefficient(idx_b)
    return (lhs_a, rhs_a), (lhs_b, rhs_b)


def growth_exponent_estimate(f: CoefficientSource, bound: int) -> float:
    """max over m with 1 < prod(m) <= bound of log|A(m)| / log(prod m), floored at 0."""
    if bound < 2:
        raise ValueError("bound must be >= 2")
    worst = 0.0

    def rec(prefix: tuple[int, ...], budget: int):
        nonlocal worst
        if len(prefix) == f.degree - 1:
            total = math.prod(prefix)
            if total > 1:
                a = abs(f.coefficient(prefix))
                if a > 0.0:
                    worst = max(worst, math.log(a) / math.log(total))
            return
        for v in range(1, budget + 1):
            rec(prefix + (v,), budget // v)

    rec((), bound)
    return worst


# ---------------------------------------------------------------------------
# Coefficient table exchange

TABLE_FORMAT_VERSION = 1


def export_coefficient_table(f: CoefficientSource, entries) -> dict:
    """Versioned JSON document of coefficient values at the given index tuples."""
    rows = []
    for m in entries:
        v = f.coefficient(tuple(m))
        rows.append([list(int(x) for x in m), [v.real, v.imag]])
    return {
        "version": TABLE_FORMAT_VERSION,
        "N": f.degree,
        "kind": f.kind,
        "entries": rows,
    }


def import_coefficient_table(doc: Mapping) -> CoefficientSource:
    """Raw-table source from an exported document (cross-implementation oracle)."""
    if doc.get("version") != TABLE_FORMAT_VERSION:
        raise ValueError(f"unsupported coefficient-table version {doc.get('version')!r}")
    table = {
        tuple(int(x) for x in m): complex(re, im) for m, (re, im) in doc["entries"]
    }
    return raw_table_source(int(doc["N"]), table=table)
