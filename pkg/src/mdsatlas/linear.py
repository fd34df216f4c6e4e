"""Finite fields, extended Reed-Solomon seeds, and linear-MDS enumeration.

Field elements are integers 0..q-1; for prime powers the integer encodes the
polynomial coefficient vector in base p with x mapped to p (so alpha = p).
Moduli are pinned: GF(4): x^2+x+1, GF(8): x^3+x+1, GF(9): x^2+x+2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .core import Code, require_mds
from .errors import CapacityError, LinearityUndecided, ParameterError

_MODULI = {4: (2, (1, 1, 1)), 8: (2, (1, 1, 0, 1)), 9: (3, (2, 1, 1))}
_PRIMES = {2, 3, 5, 7}
SUPPORTED_Q = (2, 3, 4, 5, 7, 8, 9)

DEFAULT_ENUM_CAP = 1 << 26


@dataclass(frozen=True)
class Field:
    """GF(q) with exhaustive add/mul/inv tables."""

    q: int
    add: np.ndarray
    mul: np.ndarray
    inv: np.ndarray

    def neg(self, a: int) -> int:
        return int(np.flatnonzero(self.add[a] == 0)[0])


def _poly_mul_mod(a: int, b: int, p: int, modulus: tuple[int, ...]) -> int:
    deg = len(modulus) - 1
    ca = [(a // p**i) % p for i in range(deg)]
    cb = [(b // p**i) % p for i in range(deg)]
    prod = [0] * (2 * deg - 1)
    for i, x in enumerate(ca):
        for j, y in enumerate(cb):
            prod[i + j] = (prod[i + j] + x * y) % p
    # reduce modulo the fixed modulus (monic)
    for i in range(len(prod) - 1, deg - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j, m in enumerate(modulus[:-1]):
                prod[i - deg + j] = (prod[i - deg + j] - c * m) % p
    return sum(prod[i] * p**i for i in range(deg))


@lru_cache(maxsize=None)
def build_field(q: int) -> Field:
    if q not in SUPPORTED_Q:
        raise ParameterError(f"unsupported field size {q}; supported: {SUPPORTED_Q}")
    if q in _PRIMES:
        r = np.arange(q)
        add = (r[:, None] + r[None, :]) % q
        mul = (r[:, None] * r[None, :]) % q
    else:
        p, modulus = _MODULI[q]
        deg = len(modulus) - 1
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                s = 0
                for i in range(deg):
                    s += (((a // p**i) + (b // p**i)) % p) * p**i
                add[a, b] = s
                mul[a, b] = _poly_mul_mod(a, b, p, modulus)
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        hits = np.flatnonzero(mul[a] == 1)
        if hits.size != 1:
            raise ParameterError(f"element {a} lacks a unique inverse in GF({q})")
        inv[a] = hits[0]
    field = Field(q, add, mul, inv)
    _verify_field(field)
    return field


def _verify_field(f: Field) -> None:
    q, add, mul = f.q, f.add, f.mul
    r = np.arange(q)
    assert (add[0] == r).all() and (mul[1] == r).all() and (mul[0] == 0).all()
    assert (add == add.T).all() and (mul == mul.T).all()
    for a in range(q):
        assert sorted(add[a]) == list(r), "addition row is not a permutation"
        if a:
            assert sorted(mul[a]) == list(r), "multiplication row is not a permutation"
        for b in range(q):
            for c in range(q):
                assert add[add[a, b], c] == add[a, add[b, c]]
                assert mul[mul[a, b], c] == mul[a, mul[b, c]]
                assert mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]


# ---------------------------------------------------------------------------
# Reed-Solomon construction
# ---------------------------------------------------------------------------


def rs_code(q: int, n: int, k: int) -> Code:
    """Evaluations of all polynomials of degree < k at the field points.

    For n = q+1 the leading coefficient is appended as an extra coordinate
    (doubly-extended construction).
    """
    if n > q + 1:
        raise ParameterError(f"rs_code requires n <= q+1, got n={n}, q={q}")
    if not 1 <= k <= n:
        raise ParameterError(f"rs_code requires 1 <= k <= n, got k={k}")
    f = build_field(q)
    n_eval = min(n, q)
    count = q**k
    # coefficient matrix, low degree first
    coeffs = np.empty((count, k), dtype=np.int64)
    idx = np.arange(count)
    for i in range(k):
        coeffs[:, i] = idx % q
        idx //= q
    words = np.zeros((count, n), dtype=np.uint8)
    points = np.arange(n_eval)
    for j, x in enumerate(points):
        acc = np.zeros(count, dtype=np.int64)
        for i in range(k - 1, -1, -1):  # Horner
            acc = f.add[f.mul[acc, x], coeffs[:, i]]
        words[:, j] = acc
    if n == q + 1:
        words[:, q] = coeffs[:, k - 1]
    code = Code.from_words(q, n, words)
    prof = require_mds(code, f"rs_code({q},{n},{k})")
    if prof.k != k:
        raise ParameterError(f"rs_code produced dimension {prof.k}, expected {k}")
    return code


# ---------------------------------------------------------------------------
# Exhaustive linear MDS enumeration
# ---------------------------------------------------------------------------


def _minor_dets(f: Field, A: np.ndarray, rows: tuple[int, ...], cols: tuple[int, ...]) -> np.ndarray:
    """Determinants of A[:, rows, cols] for a batch of matrices, |rows| <= 3 fast."""
    t = len(rows)
    if t == 1:
        return A[:, rows[0], cols[0]]
    if t == 2:
        a, b = A[:, rows[0], cols[0]], A[:, rows[0], cols[1]]
        c, d = A[:, rows[1], cols[0]], A[:, rows[1], cols[1]]
        ad = f.mul[a, d]
        bc = f.mul[b, c]
        return f.add[ad, _neg_vec(f, bc)]
    if t == 3:
        r0, r1, r2 = rows
        c0, c1, c2 = cols
        m = lambda i, j: A[:, i, j]
        t1 = f.mul[m(r0, c0), f.add[f.mul[m(r1, c1), m(r2, c2)], _neg_vec(f, f.mul[m(r1, c2), m(r2, c1)])]]
        t2 = f.mul[m(r0, c1), f.add[f.mul[m(r1, c0), m(r2, c2)], _neg_vec(f, f.mul[m(r1, c2), m(r2, c0)])]]
        t3 = f.mul[m(r0, c2), f.add[f.mul[m(r1, c0), m(r2, c1)], _neg_vec(f, f.mul[m(r1, c1), m(r2, c0)])]]
        return f.add[f.add[t1, _neg_vec(f, t2)], t3]
    # generic (slow) path: Gaussian elimination per matrix
    out = np.empty(A.shape[0], dtype=np.int64)
    for i in range(A.shape[0]):
        out[i] = _det_gauss(f, A[i][np.ix_(rows, cols)])
    return out


def _neg_vec(f: Field, v: np.ndarray) -> np.ndarray:
    negtab = np.array([f.neg(a) for a in range(f.q)], dtype=np.int64)
    return negtab[v]


def _det_gauss(f: Field, M: np.ndarray) -> int:
    M = M.astype(np.int64).copy()
    t = M.shape[0]
    det = 1
    for col in range(t):
        piv = None
        for row in range(col, t):
            if M[row, col]:
                piv = row
                break
        if piv is None:
            return 0
        if piv != col:
            M[[col, piv]] = M[[piv, col]]
            det = f.neg(det)
        det = int(f.mul[det, M[col, col]])
        inv = int(f.inv[M[col, col]])
        for row in range(col + 1, t):
            if M[row, col]:
                factor = int(f.mul[M[row, col], inv])
                for j in range(col, t):
                    M[row, j] = f.add[M[row, j], f.neg(int(f.mul[factor, M[col, j]]))]
    return det


def _scaled_normal_form(f: Field, A: np.ndarray) -> np.ndarray:
    """Row/column scalings bringing first row and first column to all ones.

    Valid only when every entry is nonzero (guaranteed by the 1x1 minors);
    the scalings realize symbol permutations plus row operations, so the
    generated code stays in the same equivalence class.
    """
    B = A.astype(np.int64).copy()
    k, r = B.shape
    for i in range(k):
        s = int(f.inv[B[i, 0]])
        B[i] = f.mul[B[i], s]
    for j in range(r):
        s = int(f.inv[B[0, j]])
        B[:, j] = f.mul[B[:, j], s]
    return B


def _code_from_systematic(f: Field, A: np.ndarray, n: int, k: int) -> Code:
    q = f.q
    count = q**k
    msgs = np.empty((count, k), dtype=np.int64)
    idx = np.arange(count)
    for i in range(k):
        msgs[:, i] = idx % q
        idx //= q
    words = np.zeros((count, n), dtype=np.uint8)
    words[:, :k] = msgs
    for j in range(n - k):
        acc = np.zeros(count, dtype=np.int64)
        for i in range(k):
            acc = f.add[acc, f.mul[msgs[:, i], int(A[i, j])]]
        words[:, k + j] = acc
    return Code.from_words(q, n, words)


def enumerate_linear_mds(q: int, n: int, k: int, cap: int = DEFAULT_ENUM_CAP):
    """Canonical representatives of all linear (n,k)_q MDS codes.

    Enumerates systematic generator matrices [I | A] and keeps those whose A
    has every square submatrix nonsingular, then dedups by canonical form.
    Returns a list of CanonicalForm objects sorted by certificate.
    """
    from .symmetry import canonical_form  # local import to avoid a cycle

    if not 1 <= k <= n:
        raise ParameterError(f"invalid dimensions n={n}, k={k}")
    r = n - k
    total = q ** (k * r)
    if total > cap:
        raise CapacityError(
            f"enumerate_linear_mds({q},{n},{k}) needs {total} matrices (cap {cap})",
            required=total,
            cap=cap,
        )
    f = build_field(q)
    if r == 0:
        return [canonical_form(_code_from_systematic(f, np.zeros((k, 0)), n, k))]
    survivors: list[np.ndarray] = []
    batch = 1 << 18
    minors = [
        (rows, cols)
        for t in range(2, min(k, r) + 1)
        for rows in combinations(range(k), t)
        for cols in combinations(range(r), t)
    ]
    for lo in range(0, total, batch):
        hi = min(lo + batch, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        A = np.empty((hi - lo, k, r), dtype=np.int64)
        for pos in range(k * r):
            A[:, pos // r, pos % r] = idx % q
            idx //= q
        ok = (A != 0).all(axis=(1, 2))
        A = A[ok]
        for rows, cols in minors:
            if A.shape[0] == 0:
                break
            ok = _minor_dets(f, A, rows, cols) != 0
            A = A[ok]
        for i in range(A.shape[0]):
            survivors.append(_scaled_normal_form(f, A[i]))
    if not survivors:
        return []
    stacked = np.stack(survivors).reshape(len(survivors), k * r)
    uniq = np.unique(stacked, axis=0)
    forms = {}
    for row in uniq:
        code = _code_from_systematic(f, row.reshape(k, r), n, k)
        require_mds(code, "enumerated linear code")
        cf = canonical_form(code)
        forms.setdefault(cf.cert, cf)
    return [forms[c] for c in sorted(forms)]


def linear_class_certs(q: int, n: int, k: int, cap: int = DEFAULT_ENUM_CAP) -> tuple[set, bool]:
    """Certificates of known linear classes and whether the set is complete."""
    from .symmetry import canonical_form

    certs = set()
    complete = False
    if n <= q + 1 and q in SUPPORTED_Q:
        certs.add(canonical_form(rs_code(q, n, k)).cert)
    try:
        certs |= {cf.cert for cf in enumerate_linear_mds(q, n, k, cap=cap)}
        complete = True
    except CapacityError:
        pass
    return certs, complete


def is_linear_equivalent(C: Code, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True iff C is equivalent to a linear code.

    A positive answer may come from any known linear certificate (an RS match
    suffices); a negative answer requires the exhaustive enumeration to be
    feasible, otherwise the test is undecided.
    """
    from .symmetry import canonical_form

    prof = require_mds(C, "linearity-test input")
    cert = canonical_form(C).cert
    certs, complete = linear_class_certs(C.q, C.n, prof.k, cap=cap)
    if cert in certs:
        return True
    if complete:
        return False
    raise LinearityUndecided(
        f"cannot decide linearity of ({C.n},{prof.k})_{C.q}: "
        f"enumeration needs {C.q ** (prof.k * (C.n - prof.k))} matrices"
    )
