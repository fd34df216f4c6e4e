"""Equivalence machinery: isometries, automorphism groups, canonical forms.

Two codes are equivalent when one maps onto the other under a coordinate
permutation composed with independent per-coordinate symbol permutations.
Equivalence, automorphism groups, and canonical representatives are computed
by individualization-refinement over the coordinate/symbol incidence
structure (equivalently, over the two-colored gadget graph built by
``encode_graph``), with exact group order bookkeeping via a deterministic
Schreier-Sims chain.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import reduce
from math import factorial

import numpy as np

from .core import Code, distance_distribution
from .errors import ParameterError, ValidationError

# ---------------------------------------------------------------------------
# Isometries
# ---------------------------------------------------------------------------


def full_group_order(q: int, n: int) -> int:
    """Order of the equivalence group acting on length-n words: n! * (q!)^n."""
    return factorial(n) * factorial(q) ** n


@dataclass(frozen=True)
class Isometry:
    """A coordinate permutation plus one symbol permutation per coordinate.

    Action: (g.c)[i] = symbol_perms[i][ c[coord_perm^-1(i)] ], i.e. the symbol
    table is indexed by the target coordinate.
    """

    coord_perm: tuple[int, ...]
    symbol_perms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.coord_perm)
        if sorted(self.coord_perm) != list(range(n)):
            raise ParameterError("coord_perm is not a permutation")
        if len(self.symbol_perms) != n:
            raise ParameterError("need one symbol permutation per coordinate")
        q = len(self.symbol_perms[0]) if n else 0
        for p in self.symbol_perms:
            if sorted(p) != list(range(q)):
                raise ParameterError("symbol_perms entry is not a permutation")

    @property
    def n(self) -> int:
        return len(self.coord_perm)

    @property
    def q(self) -> int:
        return len(self.symbol_perms[0])

    @staticmethod
    def identity(q: int, n: int) -> "Isometry":
        return Isometry(tuple(range(n)), tuple(tuple(range(q)) for _ in range(n)))

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other: (self * other) . c == self . (other . c)."""
        if self.n != other.n or self.q != other.q:
            raise ParameterError("isometry dimension mismatch")
        n, q = self.n, self.q
        coord = tuple(self.coord_perm[other.coord_perm[i]] for i in range(n))
        inv_self = _inv_perm(self.coord_perm)
        syms = []
        for j in range(n):
            mid = inv_self[j]  # coordinate feeding self's slot j
            so = other.symbol_perms[mid]
            ss = self.symbol_perms[j]
            syms.append(tuple(ss[so[s]] for s in range(q)))
        return Isometry(coord, tuple(syms))

    def inverse(self) -> "Isometry":
        # (g^-1 . c)[i] = inv(symbol_perms[coord_perm[i]])(c[coord_perm[i]])
        n = self.n
        coord = _inv_perm(self.coord_perm)
        syms = tuple(
            _inv_perm(self.symbol_perms[self.coord_perm[i]]) for i in range(n)
        )
        return Isometry(coord, syms)

    def to_text(self) -> str:
        parts = ["pi=" + " ".join(map(str, self.coord_perm))]
        for i, p in enumerate(self.symbol_perms):
            parts.append(f"s{i}=" + " ".join(map(str, p)))
        return "; ".join(parts)

    @staticmethod
    def from_text(text: str) -> "Isometry":
        fields = {}
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            name, _, payload = chunk.partition("=")
            fields[name.strip()] = tuple(int(t) for t in payload.split())
        coord = fields.pop("pi")
        syms = tuple(fields[f"s{i}"] for i in range(len(coord)))
        return Isometry(coord, syms)


def _inv_perm(p) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def apply_isometry(g: Isometry, C: Code) -> Code:
    if g.n != C.n or g.q != C.q:
        raise ParameterError("isometry does not match code dimensions")
    inv_coord = _inv_perm(g.coord_perm)
    sym = np.array(g.symbol_perms, dtype=np.uint8)
    out = np.empty_like(C.words)
    for i in range(C.n):
        out[:, i] = sym[i][C.words[:, inv_coord[i]]]
    return Code.from_words(C.q, C.n, out)


def random_isometry(q: int, n: int, rng: np.random.Generator) -> Isometry:
    coord = tuple(int(x) for x in rng.permutation(n))
    syms = tuple(tuple(int(x) for x in rng.permutation(q)) for _ in range(n))
    return Isometry(coord, syms)


# cell indexing: cell (i, s) <-> i*q + s ------------------------------------


def isometry_to_cellperm(g: Isometry) -> tuple[int, ...]:
    n, q = g.n, g.q
    out = [0] * (n * q)
    for i in range(n):
        j = g.coord_perm[i]
        sp = g.symbol_perms[j]
        for s in range(q):
            out[i * q + s] = j * q + sp[s]
    return tuple(out)


def cellperm_to_isometry(p: tuple[int, ...], q: int, n: int) -> Isometry:
    coord = [0] * n
    syms: list[tuple[int, ...]] = [()] * n
    for i in range(n):
        j = p[i * q] // q
        coord[i] = j
        mapping = [0] * q
        for s in range(q):
            tgt = p[i * q + s]
            if tgt // q != j:
                raise ValidationError("cell permutation does not respect coordinates")
            mapping[s] = tgt % q
        syms[j] = tuple(mapping)
    return Isometry(tuple(coord), tuple(syms))


# ---------------------------------------------------------------------------
# Deterministic Schreier-Sims permutation group
# ---------------------------------------------------------------------------


def _pcompose(p, s):
    """(p o s)(x) = p[s[x]]."""
    return tuple(p[s[x]] for x in range(len(p)))


def _pinv(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


class PermGroup:
    """Permutation group on {0..degree-1} with an exact stabilizer chain.

    `base_hint` biases the choice of base points (used so path stabilizers
    during canonical search line up with the chain).
    """

    def __init__(self, degree: int, gens=(), base_hint=()):
        self.degree = degree
        self._identity = tuple(range(degree))
        self.base: list[int] = []
        self.base_hint = tuple(base_hint)
        self.level_gens: list[list[tuple[int, ...]]] = []
        self.transversals: list[dict[int, tuple[int, ...]]] = []
        self.gens: list[tuple[int, ...]] = []
        for g in gens:
            self.extend(tuple(g))

    def order(self) -> int:
        return reduce(lambda a, t: a * len(t), self.transversals, 1)

    def _sift(self, g, start: int = 0):
        """Reduce g through the chain; returns the residue."""
        for lvl in range(start, len(self.base)):
            x = g[self.base[lvl]]
            u = self.transversals[lvl].get(x)
            if u is None:
                return g
            g = _pcompose(_pinv(u), g)
        return g

    def __contains__(self, g) -> bool:
        return self._sift(tuple(g)) == self._identity

    def _fix_level(self, g) -> int:
        """Deepest level whose base prefix g fixes pointwise."""
        j = 0
        while j < len(self.base) and g[self.base[j]] == self.base[j]:
            j += 1
        return j

    def _new_level(self, g) -> None:
        moved = None
        for x in self.base_hint:
            if g[x] != x:
                moved = x
                break
        if moved is None:
            for x in range(self.degree):
                if g[x] != x:
                    moved = x
                    break
        self.base.append(moved)
        self.level_gens.append([])
        self.transversals.append({moved: self._identity})

    def extend(self, g) -> bool:
        """Add a permutation; returns True if the group grew."""
        g = tuple(g)
        if len(g) != self.degree:
            raise ParameterError("permutation degree mismatch")
        if g in self:
            return False
        self.gens.append(g)
        j = self._fix_level(g)
        if j == len(self.base):
            self._new_level(g)
        self.level_gens[j].append(g)
        for i in range(j, -1, -1):
            self._complete(i)
        return True

    def _complete(self, lvl):
        """Close level lvl (orbit + Schreier generators), deeper levels first.

        Assumes levels > lvl are complete on entry; keeps them complete.
        """
        b = self.base[lvl]
        gens = [g for lev in self.level_gens[lvl:] for g in lev]
        trans = {b: self._identity}
        frontier = [b]
        while frontier:
            nxt = []
            for x in frontier:
                u = trans[x]
                for g in gens:
                    y = g[x]
                    if y not in trans:
                        trans[y] = _pcompose(g, u)
                        nxt.append(y)
            frontier = nxt
        self.transversals[lvl] = trans
        for x in sorted(trans):
            u = trans[x]
            for g in gens:
                schreier = _pcompose(_pinv(trans[g[x]]), _pcompose(g, u))
                if schreier == self._identity:
                    continue
                res = self._sift(schreier, lvl + 1)
                if res != self._identity:
                    j = self._fix_level(res)
                    if j == len(self.base):
                        self._new_level(res)
                    self.level_gens[j].append(res)
                    # complete deeper levels down to just below this one;
                    # level lvl's own orbit is unaffected (j > lvl)
                    for i in range(j, lvl, -1):
                        self._complete(i)

    def elements(self):
        """Yield every element exactly once (deterministic order)."""
        def rec(lvl, acc):
            if lvl == len(self.base):
                yield acc
                return
            for x in sorted(self.transversals[lvl]):
                yield from rec(lvl + 1, _pcompose(acc, self.transversals[lvl][x]))
        # left-to-right: acc o u_lvl; every element has a unique such product
        yield from rec(0, self._identity)

    def stabilizer_gens(self, points) -> list[tuple[int, ...]] | None:
        """Generators of a subgroup fixing `points` pointwise.

        Exact (the full pointwise stabilizer) when the points form a prefix
        of the chain's base; None when no chain prefix covers them, in which
        case callers should fall back to filtering generators directly.
        """
        need = set(points)
        for lvl in range(len(self.base) + 1):
            if not need - set(self.base[:lvl]):
                return [g for lev in self.level_gens[lvl:] for g in lev]
        return None


def orbit_partition(degree: int, gens) -> list[int]:
    """Union-find orbit labels for the action of `gens` on points."""
    parent = list(range(degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(degree):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(x) for x in range(degree)]


# ---------------------------------------------------------------------------
# Colored gadget graph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ColoredGraph:
    """Gadget graph: n cliques of size q (color 1) plus one vertex per word
    (color 2) joined to its n coordinate-symbol cells."""

    n_vertices: int
    colors: tuple[int, ...]
    adjacency: tuple[tuple[int, ...], ...]
    part_map: tuple[tuple, ...]

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2


def encode_graph(C: Code) -> ColoredGraph:
    q, n, M = C.q, C.n, C.size
    nq = n * q
    adj: list[list[int]] = [[] for _ in range(nq + M)]
    for i in range(n):
        for s in range(q):
            v = i * q + s
            for t in range(s + 1, q):
                w = i * q + t
                adj[v].append(w)
                adj[w].append(v)
    for widx in range(M):
        wv = nq + widx
        for i in range(n):
            cv = i * q + int(C.words[widx, i])
            adj[wv].append(cv)
            adj[cv].append(wv)
    colors = tuple([1] * nq + [2] * M)
    part_map = tuple(
        [("cell", i, s) for i in range(n) for s in range(q)]
        + [("word", w) for w in range(M)]
    )
    return ColoredGraph(
        nq + M,
        colors,
        tuple(tuple(sorted(a)) for a in adj),
        part_map,
    )


# ---------------------------------------------------------------------------
# Canonical forms via individualization-refinement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    canon: Code
    cert: bytes
    aut_gens: tuple[Isometry, ...]
    aut_order: int
    gamma: Isometry  # carries the input onto canon: gamma . input == canon


class _Leaf:
    __slots__ = ("trace", "cert", "cellperm")

    def __init__(self, trace, cert, cellperm):
        self.trace = trace
        self.cert = cert
        self.cellperm = cellperm


_HASH_LIMIT = 256


def _sizes_blob(col: np.ndarray, n_colors: int) -> bytes:
    sizes = np.bincount(col, minlength=n_colors).astype(np.int64).tobytes()
    if len(sizes) <= _HASH_LIMIT:
        return sizes
    return hashlib.blake2b(sizes, digest_size=16).digest()


class _Canonizer:
    """One search pass over the individualization-refinement tree.

    With `backjump` the pass abandons a subtree once it produces an
    automorphism anchored at the first leaf; that makes it fast but it may
    miss generators on highly symmetric inputs, so it is only used to seed
    the sound pass (`backjump=False`), whose pruning is limited to verified
    automorphisms fixing the individualized path pointwise.
    """

    def __init__(self, C: Code, backjump: bool = False, seed: tuple = (), base_hint: tuple = ()):
        self.C = C
        self.q, self.n, self.M = C.q, C.n, C.size
        self.nq = self.n * self.q
        self.backjump = backjump
        self.words = C.words.astype(np.int32)
        # cell index per (word, coordinate)
        self.cell_matrix = np.arange(self.n, dtype=np.int32)[None, :] * self.q + self.words
        self.cell_words = [
            np.flatnonzero(self.words[:, i] == s)
            for i in range(self.n)
            for s in range(self.q)
        ]
        degs = {len(w) for w in self.cell_words}
        self.inc_matrix = np.vstack(self.cell_words) if len(degs) == 1 else None
        bits = max(1, (self.nq - 1).bit_length())
        if bits * self.n <= 62:
            self._pack = (1 << (bits * np.arange(self.n, dtype=np.int64)))
        else:
            self._pack = None
        self.first: _Leaf | None = None
        self.first_path: tuple[int, ...] = ()
        self.best: _Leaf | None = None
        self.aut: PermGroup | None = None
        self.aut_isos: list[Isometry] = []
        self._orbit_cache: tuple[int, tuple, list[int]] | None = None
        if seed:
            self.aut = PermGroup(self.nq, base_hint=base_hint)
            for p in seed:
                if self.aut.extend(p):
                    self.aut_isos.append(cellperm_to_isometry(p, self.q, self.n))

    # -- refinement --------------------------------------------------------

    def _refine(self, cell_col: np.ndarray, word_col: np.ndarray):
        ncc = int(cell_col.max()) + 1
        nwc = int(word_col.max()) + 1
        while True:
            # words: (old color, sorted multiset of incident cell colors)
            inc = cell_col[self.cell_matrix]
            inc.sort(axis=1)
            if self._pack is not None:
                packed = inc.astype(np.int64) @ self._pack
                order = np.lexsort((packed, word_col))
                sw, sp = word_col[order], packed[order]
                brk = np.empty(self.M, dtype=bool)
                brk[0] = True
                if self.M > 1:
                    brk[1:] = (sw[1:] != sw[:-1]) | (sp[1:] != sp[:-1])
            else:
                keys = [inc[:, j] for j in range(self.n - 1, -1, -1)] + [word_col]
                order = np.lexsort(tuple(keys))
                sw, si = word_col[order], inc[order]
                brk = np.empty(self.M, dtype=bool)
                brk[0] = True
                if self.M > 1:
                    brk[1:] = (sw[1:] != sw[:-1]) | (si[1:] != si[:-1]).any(axis=1)
            new_word = np.empty(self.M, dtype=np.int32)
            new_word[order] = np.cumsum(brk) - 1
            nwc2 = int(brk.sum())

            # cells: (old color, own-coordinate color multiset, sorted
            # incident word colors)
            coord_keys = [
                np.sort(cell_col[i * self.q:(i + 1) * self.q]).tobytes()
                for i in range(self.n)
            ]
            if self.inc_matrix is not None:
                wc = new_word[self.inc_matrix]
                wc.sort(axis=1)
                cellkeys = [
                    (int(cell_col[c]), coord_keys[c // self.q], wc[c].tobytes())
                    for c in range(self.nq)
                ]
            else:
                cellkeys = [
                    (
                        int(cell_col[c]),
                        coord_keys[c // self.q],
                        np.sort(new_word[self.cell_words[c]]).tobytes(),
                    )
                    for c in range(self.nq)
                ]
            ranked = sorted(range(self.nq), key=lambda c: cellkeys[c])
            new_cell = np.empty(self.nq, dtype=np.int32)
            ncc2 = -1
            prev = None
            for c in ranked:
                if cellkeys[c] != prev:
                    ncc2 += 1
                    prev = cellkeys[c]
                new_cell[c] = ncc2
            ncc2 += 1

            if ncc2 == ncc and nwc2 == nwc:
                cell_col, word_col = new_cell, new_word
                break
            cell_col, word_col = new_cell, new_word
            ncc, nwc = ncc2, nwc2
            if ncc == self.nq and nwc == self.M:
                break
        item = (ncc, nwc, _sizes_blob(cell_col, ncc), _sizes_blob(word_col, nwc))
        return cell_col, word_col, item

    # -- leaves -------------------------------------------------------------

    def _decode(self, cell_col: np.ndarray) -> tuple[int, ...]:
        q, n = self.q, self.n
        mins = [int(cell_col[i * q:(i + 1) * q].min()) for i in range(n)]
        coord_rank = {i: r for r, i in enumerate(sorted(range(n), key=lambda i: mins[i]))}
        perm = [0] * self.nq
        for i in range(n):
            j = coord_rank[i]
            sym_order = sorted(range(q), key=lambda s: int(cell_col[i * q + s]))
            for r, s in enumerate(sym_order):
                perm[i * q + s] = j * q + r
        return tuple(perm)

    def _leaf_cert(self, cellperm) -> bytes:
        iso = cellperm_to_isometry(cellperm, self.q, self.n)
        return apply_isometry(iso, self.C).key

    def _register_aut(self, p1, p2):
        """Record the automorphism mapping leaf p1's labeling onto p2's."""
        a = _pcompose(_pinv(p1), p2)
        if a == tuple(range(self.nq)):
            return
        if self.aut is None:
            self.aut = PermGroup(self.nq, base_hint=self.first_path)
        if a in self.aut:
            return
        iso = cellperm_to_isometry(a, self.q, self.n)
        if apply_isometry(iso, self.C) != self.C:
            raise ValidationError("internal: discovered map is not an automorphism")
        self.aut.extend(a)
        self.aut_isos.append(iso)
        self._orbit_cache = None

    def _orbit_labels(self, path) -> list[int] | None:
        """Orbit labels under discovered automorphisms fixing `path` pointwise."""
        if self.aut is None or not self.aut.gens:
            return None
        key = (len(self.aut.gens), tuple(path))
        if self._orbit_cache is not None and self._orbit_cache[:2] == key:
            return self._orbit_cache[2]
        gens = self.aut.stabilizer_gens(path)
        if gens is None:
            gens = [g for g in self.aut.gens if all(g[x] == x for x in path)]
        labels = orbit_partition(self.nq, gens) if gens else None
        self._orbit_cache = (key[0], key[1], labels)
        return labels

    # -- search -------------------------------------------------------------

    def _target_class(self, cell_col) -> list[int]:
        ncc = int(cell_col.max()) + 1
        sizes = np.bincount(cell_col, minlength=ncc)
        big = int(sizes.max())
        if big == 1:
            return []
        color = int(np.flatnonzero(sizes == big)[0])
        return [int(c) for c in np.flatnonzero(cell_col == color)]

    @staticmethod
    def _cmp_leafs(a: _Leaf, b: _Leaf) -> int:
        for x, y in zip(a.trace, b.trace):
            if x < y:
                return -1
            if x > y:
                return 1
        if len(a.trace) != len(b.trace):
            return -1 if len(a.trace) < len(b.trace) else 1
        if a.cert != b.cert:
            return -1 if a.cert < b.cert else 1
        return 0

    def run(self) -> "_Canonizer":
        cell0 = np.zeros(self.nq, dtype=np.int32)
        word0 = np.zeros(self.M, dtype=np.int32)
        cell0, word0, item = self._refine(cell0, word0)
        self._search(cell0, word0, (item,), (), eq_first=True, cmp_best=0)
        assert self.best is not None
        return self

    def result(self) -> CanonicalForm:
        iso = cellperm_to_isometry(self.best.cellperm, self.q, self.n)
        canon = apply_isometry(iso, self.C)
        cert = hashlib.sha256(canon.key).digest()
        return CanonicalForm(
            canon=canon,
            cert=cert,
            aut_gens=tuple(self.aut_isos),
            aut_order=self.aut.order() if self.aut is not None else 1,
            gamma=iso,
        )

    _NO_JUMP = 1 << 30

    def _search(self, cell_col, word_col, trace, path, eq_first, cmp_best) -> int:
        """Explore one node; returns a backjump depth (frames deeper than the
        returned value unwind immediately after an automorphism is found)."""
        target = self._target_class(cell_col)
        if not target:
            # discrete on cells; the decoded relabeling is fully determined
            perm = self._decode(cell_col)
            cert = self._leaf_cert(perm)
            leaf = _Leaf(trace, cert, perm)
            if self.first is None:
                self.first = leaf
                self.first_path = path
                self.best = leaf
                return self._NO_JUMP
            jump = self._NO_JUMP
            if (
                eq_first
                and len(trace) == len(self.first.trace)
                and cert == self.first.cert
            ):
                self._register_aut(self.first.cellperm, perm)
                if self.backjump:
                    # abandon up to the deepest common ancestor with the
                    # first path (generator-oracle mode only)
                    jump = 0
                    while (
                        jump < len(path)
                        and jump < len(self.first_path)
                        and path[jump] == self.first_path[jump]
                    ):
                        jump += 1
            rel = self._cmp_leafs(leaf, self.best)
            if rel == 0:
                if leaf is not self.best:
                    self._register_aut(self.best.cellperm, perm)
            elif rel < 0:
                self.best = leaf
            return jump

        depth = len(trace)
        processed: list[int] = []
        for v in target:
            if processed:
                # prune candidates reachable from an explored sibling by a
                # discovered automorphism fixing the individualized path
                labels = self._orbit_labels(path)
                if labels is not None and any(
                    labels[v] == labels[u] for u in processed
                ):
                    continue
            child_cell = cell_col.copy()
            cls = child_cell[v]
            bump = (child_cell > cls) | (
                (child_cell == cls) & (np.arange(self.nq) != v)
            )
            child_cell[bump] += 1
            child_cell, child_word, item = self._refine(child_cell, word_col.copy())
            ctrace = trace + (item,)

            c_first = eq_first
            if c_first and self.first is not None:
                ft = self.first.trace
                c_first = len(ft) > depth and ft[depth] == item
            c_best = cmp_best
            if c_best == 0 and self.best is not None:
                bt = self.best.trace
                if len(bt) <= depth:
                    c_best = 1
                elif item < bt[depth]:
                    c_best = -1
                elif item > bt[depth]:
                    c_best = 1
            # a strictly worse partial trace can hold neither the canonical
            # leaf nor a leaf matching the automorphism anchor
            if self.first is not None and c_best > 0 and not c_first:
                processed.append(v)
                continue
            bj = self._search(
                child_cell, child_word, ctrace, path + (v,), c_first, c_best
            )
            processed.append(v)
            if bj < len(path):
                return bj
        return self._NO_JUMP


def canonical_form(C: Code) -> CanonicalForm:
    """Canonical representative, certificate, and exact automorphism group.

    Two passes: a backjumping pass harvests automorphism generators quickly,
    then the sound pass (seeded with them) settles the canonical leaf and the
    exact group; with a good seed its tree collapses to the first path plus
    a thin pruned fringe.
    """
    fast = _Canonizer(C, backjump=True).run()
    seed = tuple(fast.aut.gens) if fast.aut is not None else ()
    # the sound pass owns the answer; the fast pass only donates generators
    sound = _Canonizer(C, seed=seed, base_hint=fast.first_path).run()
    return sound.result()


def isomorphism_from_forms(fc: CanonicalForm, fd: CanonicalForm) -> Isometry | None:
    """Map carrying the first form's input onto the second's, if equivalent."""
    if fc.cert != fd.cert or fc.canon != fd.canon:
        return None
    return fd.gamma.inverse().compose(fc.gamma)


def find_isomorphism(C: Code, D: Code) -> Isometry | None:
    """Some g with g.C == D, or None when the codes are inequivalent."""
    if (C.q, C.n, C.size) != (D.q, D.n, D.size):
        raise ParameterError("isomorphism search requires matching (q, n, M)")
    if C.size <= 4096 and distance_distribution(C) != distance_distribution(D):
        return None
    g = isomorphism_from_forms(canonical_form(C), canonical_form(D))
    if g is not None and apply_isometry(g, C) != D:
        raise ValidationError("internal: composed map fails to carry C onto D")
    return g


class IsometryCoset:
    """The set {g : g.C = D} represented as Aut(D) composed with a carrier g0."""

    def __init__(self, g0: Isometry, aut_group: PermGroup, q: int, n: int):
        self.g0 = g0
        self._group = aut_group
        self._q = q
        self._n = n

    @property
    def cardinality(self) -> int:
        return self._group.order()

    def __iter__(self):
        for p in self._group.elements():
            yield cellperm_to_isometry(p, self._q, self._n).compose(self.g0)


def isometry_coset(C: Code, D: Code) -> IsometryCoset:
    if (C.q, C.n, C.size) != (D.q, D.n, D.size):
        raise ParameterError("coset search requires matching (q, n, M)")
    fc = canonical_form(C)
    fd = canonical_form(D)
    g0 = isomorphism_from_forms(fc, fd)
    if g0 is None:
        raise ValidationError("isometry_coset requires equivalent codes")
    group = PermGroup(D.n * D.q, [isometry_to_cellperm(g) for g in fd.aut_gens])
    return IsometryCoset(g0, group, D.q, D.n)
