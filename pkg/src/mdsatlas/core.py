"""Code values and the structural operations used throughout the pipeline.

A code is a finite, duplicate-free set of equal-length words over the
alphabet {0..q-1}, held in strictly increasing lexicographic order so that
equality, hashing, and file output are all value-based.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import FormatError, ParameterError, ValidationError

MAX_Q = 64

# ---------------------------------------------------------------------------
# Code
# ---------------------------------------------------------------------------


def _sorted_word_array(q: int, n: int, words) -> np.ndarray:
    arr = np.asarray(words, dtype=np.uint8)
    if arr.ndim != 2 or arr.shape[1] != n:
        raise ParameterError(f"expected words of shape (M, {n}), got {arr.shape}")
    if arr.shape[0] == 0:
        raise ParameterError("a code must contain at least one word")
    if arr.size and int(arr.max(initial=0)) >= q:
        raise ParameterError(f"symbol out of range for q={q}")
    order = np.lexsort(tuple(arr[:, i] for i in range(n - 1, -1, -1)))
    arr = np.ascontiguousarray(arr[order])
    if arr.shape[0] > 1:
        dup_rows = (arr[1:] == arr[:-1]).all(axis=1)
        if dup_rows.any():
            dup = arr[1:][dup_rows][0]
            raise ParameterError(f"duplicate word {tuple(int(s) for s in dup)}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Code:
    """An (n, M)_q code: sorted, duplicate-free words over {0..q-1}."""

    q: int
    n: int
    words: np.ndarray

    @staticmethod
    def from_words(q: int, n: int, words) -> "Code":
        if not (2 <= q <= MAX_Q):
            raise ParameterError(f"q must be in [2, {MAX_Q}], got {q}")
        if n < 1:
            raise ParameterError(f"n must be >= 1, got {n}")
        return Code(q, n, _sorted_word_array(q, n, words))

    @property
    def size(self) -> int:
        return int(self.words.shape[0])

    @cached_property
    def key(self) -> bytes:
        """Value identity: header plus the sorted word matrix, byte-exact."""
        return b"%d,%d,%d;" % (self.q, self.n, self.size) + self.words.tobytes()

    @cached_property
    def packed(self) -> np.ndarray:
        """Words as base-q integers (uint64); requires q**n to fit 64 bits."""
        if self.n * np.log2(self.q) > 62:
            raise ParameterError("words too wide to pack into 64 bits")
        pows = (self.q ** np.arange(self.n - 1, -1, -1, dtype=np.uint64))
        return self.words.astype(np.uint64) @ pows

    @cached_property
    def coord_masks(self) -> list[list[int]]:
        """Per-coordinate symbol occupancy bitsets over word indices."""
        masks = []
        for i in range(self.n):
            col = self.words[:, i]
            per = []
            for s in range(self.q):
                sel = np.flatnonzero(col == s)
                m = 0
                for idx in sel:
                    m |= 1 << int(idx)
                per.append(m)
            masks.append(per)
        return masks

    def word(self, i: int) -> tuple[int, ...]:
        return tuple(int(s) for s in self.words[i])

    def __eq__(self, other) -> bool:
        return isinstance(other, Code) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Code(q={self.q}, n={self.n}, M={self.size})"


def full_space(q: int, n: int) -> Code:
    """The (n, n)_q trivial code containing every word of length n."""
    idx = np.arange(q**n)
    words = np.empty((q**n, n), dtype=np.uint8)
    for i in range(n - 1, -1, -1):
        words[:, i] = idx % q
        idx //= q
    return Code.from_words(q, n, words)


def repetition_code(q: int, n: int) -> Code:
    words = np.repeat(np.arange(q, dtype=np.uint8)[:, None], n, axis=1)
    return Code.from_words(q, n, words)


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------

_CHUNK = 256


def min_distance(C: Code) -> int:
    """Smallest Hamming distance between two distinct words; n for singletons.

    The singleton convention keeps zero-dimensional parts composable in the
    base case of the partition search.
    """
    M = C.size
    if M == 1:
        return C.n
    best = C.n
    W = C.words
    for lo in range(0, M - 1, _CHUNK):
        hi = min(lo + _CHUNK, M - 1)
        block = W[lo:hi]
        rest = W[lo + 1:]
        # distances between block rows and all later rows
        d = (block[:, None, :] != rest[None, :, :]).sum(axis=2)
        rows = np.arange(lo, hi)
        cols = np.arange(lo + 1, M)
        valid = cols[None, :] > rows[:, None]
        dmin = int(d[valid].min())
        if dmin < best:
            best = dmin
            if best == 1:
                return 1
    return best


def cross_distance(C: Code, D: Code) -> int:
    """Minimum Hamming distance over pairs from C x D; 0 iff a word is shared."""
    if C.n != D.n or C.q != D.q:
        raise ParameterError("cross_distance requires matching length and alphabet")
    return int(cross_distance_words(C.words, D.words))


def cross_distance_words(A: np.ndarray, B: np.ndarray) -> int:
    best = A.shape[1]
    for lo in range(0, A.shape[0], _CHUNK):
        block = A[lo:lo + _CHUNK]
        d = (block[:, None, :] != B[None, :, :]).sum(axis=2)
        dmin = int(d.min())
        if dmin < best:
            best = dmin
            if best == 0:
                return 0
    return best


def distance_distribution(C: Code) -> tuple[int, ...]:
    """Histogram of pairwise distances, index = distance 0..n."""
    hist = np.zeros(C.n + 1, dtype=np.int64)
    M = C.size
    W = C.words
    for lo in range(0, M - 1, _CHUNK):
        hi = min(lo + _CHUNK, M - 1)
        block = W[lo:hi]
        rest = W[lo + 1:]
        d = (block[:, None, :] != rest[None, :, :]).sum(axis=2)
        rows = np.arange(lo, hi)
        cols = np.arange(lo + 1, M)
        valid = cols[None, :] > rows[:, None]
        hist += np.bincount(d[valid].ravel(), minlength=C.n + 1)
    return tuple(int(x) for x in hist)


# ---------------------------------------------------------------------------
# MDS verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MdsProfile:
    k: int
    d: int
    is_mds: bool


def _exact_log(M: int, q: int) -> int | None:
    k = 0
    while M > 1:
        if M % q:
            return None
        M //= q
        k += 1
    return k


def projections_distinct(C: Code, k: int) -> bool:
    """True iff every k-subset of coordinates induces M distinct projections."""
    W = C.words.astype(np.uint64)
    M = C.size
    for subset in combinations(range(C.n), k):
        pows = C.q ** np.arange(len(subset) - 1, -1, -1, dtype=np.uint64)
        packed = W[:, subset] @ pows
        if np.unique(packed).size != M:
            return False
    return True


def is_mds(C: Code, method: str = "auto") -> MdsProfile:
    """Classify C as MDS or not.

    `distance` computes the exact minimum distance and applies Singleton
    equality; `projection` checks the defining property (every k-subset of
    coordinates bijects onto the k-tuples).  Both agree on every input; the
    projection route avoids the quadratic scan on large codes.
    """
    k = _exact_log(C.size, C.q)
    if method == "auto":
        method = "projection" if C.size > 4096 else "distance"
    if k is None or k > C.n:
        d = min_distance(C)
        return MdsProfile(k=C.n - d + 1, d=d, is_mds=False)
    if method == "projection":
        if k == 0:
            return MdsProfile(k=0, d=C.n, is_mds=True)
        if projections_distinct(C, k):
            # Singleton: M = q^k forces d <= n-k+1; distinct projections
            # force d >= n-k+1.
            return MdsProfile(k=k, d=C.n - k + 1, is_mds=True)
        d = min_distance(C)
        return MdsProfile(k=C.n - d + 1, d=d, is_mds=False)
    if method != "distance":
        raise ParameterError(f"unknown is_mds method {method!r}")
    d = min_distance(C)
    return MdsProfile(k=C.n - d + 1, d=d, is_mds=(d == C.n - k + 1))


def require_mds(C: Code, context: str = "code") -> MdsProfile:
    prof = is_mds(C)
    if not prof.is_mds:
        raise ValidationError(f"{context} is not MDS (q={C.q}, n={C.n}, M={C.size})")
    return prof


# ---------------------------------------------------------------------------
# Puncturing / shortening / extension
# ---------------------------------------------------------------------------


def puncture(C: Code, pos: int) -> Code:
    """Delete coordinate `pos` from every word; rejects the full space."""
    if not 0 <= pos < C.n:
        raise ParameterError(f"position {pos} out of range for n={C.n}")
    if C.size == C.q**C.n:
        raise ParameterError("puncturing the full space would collide words")
    kept = np.delete(C.words, pos, axis=1)
    try:
        return Code.from_words(C.q, C.n - 1, kept)
    except ParameterError as exc:
        raise ValidationError(f"puncturing at {pos} collides words: {exc}") from exc


def shorten(C: Code, pos: int, s: int) -> Code:
    """Keep words with symbol `s` at `pos`, then delete that coordinate."""
    if not 0 <= pos < C.n:
        raise ParameterError(f"position {pos} out of range for n={C.n}")
    if not 0 <= s < C.q:
        raise ParameterError(f"symbol {s} out of range for q={C.q}")
    if C.size == 1:
        raise ParameterError("cannot shorten a zero-dimensional (singleton) code")
    sel = C.words[C.words[:, pos] == s]
    if sel.shape[0] == 0:
        raise ValidationError(f"no words with symbol {s} at position {pos}")
    return Code.from_words(C.q, C.n - 1, np.delete(sel, pos, axis=1))


@dataclass(frozen=True)
class LabeledPartition:
    """q index sets over a parent code's word list; part i carries label i."""

    parts: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_parts(parts) -> "LabeledPartition":
        return LabeledPartition(tuple(tuple(int(i) for i in p) for p in parts))


def validate_partition(C: Code, P: LabeledPartition) -> None:
    """Check P splits C into q MDS subcodes of one lower dimension."""
    if len(P.parts) != C.q:
        raise ValidationError(f"expected {C.q} parts, got {len(P.parts)}")
    prof = require_mds(C, "partition parent")
    seen: set[int] = set()
    total = 0
    for label, part in enumerate(P.parts):
        if not part:
            raise ValidationError(f"part {label} is empty")
        pset = set(part)
        if len(pset) != len(part):
            raise ValidationError(f"part {label} repeats a word index")
        if pset & seen:
            raise ValidationError(f"part {label} shares words with an earlier part")
        if max(pset) >= C.size or min(pset) < 0:
            raise ValidationError(f"part {label} has out-of-range indices")
        seen |= pset
        total += len(part)
        sub = Code.from_words(C.q, C.n, C.words[sorted(pset)])
        sprof = is_mds(sub)
        if not (sprof.is_mds and sprof.k == prof.k - 1):
            raise ValidationError(
                f"part {label} is not an ({C.n},{prof.k - 1})_{C.q} MDS code"
            )
    if total != C.size:
        raise ValidationError("parts do not cover the code")


def extend_with_partition(C: Code, P: LabeledPartition, validate: bool = True) -> Code:
    """Append symbol i to part i's words; the result extends C by one coordinate."""
    if validate:
        validate_partition(C, P)
    M = C.size
    out = np.empty((M, C.n + 1), dtype=np.uint8)
    row = 0
    for label, part in enumerate(P.parts):
        m = len(part)
        out[row:row + m, : C.n] = C.words[list(part)]
        out[row:row + m, C.n] = label
        row += m
    if row != M:
        raise ValidationError("partition does not cover the code")
    return Code.from_words(C.q, C.n + 1, out)


def induced_partition(E: Code, pos: int | None = None) -> LabeledPartition:
    """Group an extension's words by the symbol at `pos` (default: last).

    Indices refer to puncture(E, pos)'s sorted word order, so
    extend_with_partition(puncture(E), induced_partition(E)) == E.
    """
    pos = E.n - 1 if pos is None else pos
    parent = puncture(E, pos)
    kept = np.delete(E.words, pos, axis=1)
    pows = parent.q ** np.arange(parent.n - 1, -1, -1, dtype=np.uint64)
    idx_in_parent = np.searchsorted(parent.packed, kept.astype(np.uint64) @ pows)
    parts = [[] for _ in range(E.q)]
    labels = E.words[:, pos]
    for i, lab in enumerate(labels):
        parts[int(lab)].append(int(idx_in_parent[i]))
    return LabeledPartition.from_parts(tuple(sorted(p) for p in parts))


# ---------------------------------------------------------------------------
# Direct sum and the glued-sum construction
# ---------------------------------------------------------------------------


def direct_sum(C: Code, D: Code) -> Code:
    """All concatenations c || d; size |C|*|D|, length n_C + n_D."""
    if C.q != D.q:
        raise ParameterError("direct_sum requires matching alphabets")
    left = np.repeat(C.words, D.size, axis=0)
    right = np.tile(D.words, (C.size, 1))
    return Code.from_words(C.q, C.n + D.n, np.hstack([left, right]))


def glued_sum(C: Code, D: Code) -> Code:
    """Glue two distance-2 MDS codes along their last coordinate.

    Shortens both at the last position and unions the per-symbol direct sums,
    producing an MDS code of length n1+n2-2 and minimum distance 2.
    """
    if C.q != D.q:
        raise ParameterError("glued_sum requires matching alphabets")
    for X, name in ((C, "first"), (D, "second")):
        prof = require_mds(X, f"{name} glued_sum input")
        if prof.d != 2:
            raise ValidationError(f"{name} glued_sum input must have d=2, got d={prof.d}")
    blocks = []
    for s in range(C.q):
        blocks.append(direct_sum(shorten(C, C.n - 1, s), shorten(D, D.n - 1, s)).words)
    out = Code.from_words(C.q, C.n + D.n - 2, np.vstack(blocks))
    require_mds(out, "glued_sum output")
    return out


# ---------------------------------------------------------------------------
# .mds file format
# ---------------------------------------------------------------------------

_HEADER_RE = re.compile(r"^MDS q=(\d+) n=(\d+) m=(\d+)$")


def write_mds(C: Code, comments: tuple[str, ...] = ()) -> str:
    """Canonical text form: comments, header, then sorted rows, one per line."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"MDS q={C.q} n={C.n} m={C.size}")
    for row in C.words:
        lines.append(" ".join(str(int(s)) for s in row))
    return "\n".join(lines) + "\n"


def read_mds(text: str) -> Code:
    header = None
    rows: list[list[int]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            m = _HEADER_RE.match(line)
            if not m:
                raise FormatError(f"line {ln}: expected 'MDS q=.. n=.. m=..' header")
            header = tuple(int(g) for g in m.groups())
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise FormatError(f"line {ln}: {exc}") from exc
    if header is None:
        raise FormatError("missing MDS header")
    q, n, m = header
    if len(rows) != m:
        raise FormatError(f"header promises {m} words, file has {len(rows)}")
    for r in rows:
        if len(r) != n:
            raise FormatError(f"word of length {len(r)}, expected {n}")
    try:
        code = Code.from_words(q, n, np.array(rows, dtype=np.uint8) if rows else [])
    except ParameterError as exc:
        raise FormatError(str(exc)) from exc
    return code


def load_mds(path: str | Path) -> Code:
    return read_mds(Path(path).read_text(encoding="utf-8"))


def save_mds(C: Code, path: str | Path, comments: tuple[str, ...] = ()) -> None:
    Path(path).write_text(write_mds(C, comments), encoding="utf-8")


def code_digest(C: Code) -> str:
    return hashlib.sha256(C.key).hexdigest()
