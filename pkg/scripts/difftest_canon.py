"""Differential test: canonizer vs brute-force group sweep on small codes."""

import itertools
import sys
import time

import numpy as np

sys.path.insert(0, "src")

from mdsatlas import Code, full_space
from mdsatlas.symmetry import (
    Isometry,
    apply_isometry,
    canonical_form,
    full_group_order,
    random_isometry,
)


def brute(C):
    q, n = C.q, C.n
    perms = list(itertools.permutations(range(q)))
    stab = 0
    canon_keys = set()
    best = None
    for cp in itertools.permutations(range(n)):
        for sps in itertools.product(perms, repeat=n):
            g = Isometry(cp, sps)
            img = apply_isometry(g, C)
            if img == C:
                stab += 1
            canon_keys.add(img.key)
            if best is None or img.key < best:
                best = img.key
    return stab, len(canon_keys), best


def run_case(C, rng, n_inv=8):
    cf = canonical_form(C)
    stab, orbit, _ = brute(C)
    ok = True
    if cf.aut_order != stab:
        print(f"  AUT MISMATCH: canonizer={cf.aut_order} brute={stab} q={C.q} n={C.n} M={C.size}")
        print("  words:", C.words.tolist())
        ok = False
    if stab * orbit != full_group_order(C.q, C.n):
        print(f"  ORBIT-STAB VIOLATION: {stab} * {orbit} != |G|")
        ok = False
    for _ in range(n_inv):
        g = random_isometry(C.q, C.n, rng)
        ci = canonical_form(apply_isometry(g, C))
        if ci.cert != cf.cert or ci.canon != cf.canon:
            print(f"  INVARIANCE FAILURE q={C.q} n={C.n}")
            ok = False
            break
    for g in cf.aut_gens:
        if apply_isometry(g, C) != C:
            print("  BAD GENERATOR")
            ok = False
    return ok


def main():
    rng = np.random.default_rng(2024)
    failures = 0
    cases = 0
    t0 = time.time()

    # structured codes
    structured = [
        full_space(2, 2),
        full_space(3, 2),
        full_space(2, 3),
        Code.from_words(3, 3, [(x, y, (x + y) % 3) for x in range(3) for y in range(3)]),
        Code.from_words(4, 3, [(x, y, (x + y) % 4) for x in range(4) for y in range(4)]),
        Code.from_words(4, 3, [(x, y, x ^ y) for x in range(4) for y in range(4)]),
        Code.from_words(3, 4, [(x, y, (x + y) % 3, (x + 2 * y) % 3) for x in range(3) for y in range(3)]),
        Code.from_words(2, 4, [(a, b, c, (a + b + c) % 2) for a in range(2) for b in range(2) for c in range(2)]),
    ]
    for C in structured:
        cases += 1
        if not run_case(C, rng):
            failures += 1

    # random subsets of A^n, various sizes including degenerate
    specs = [(2, 3, 4, 60), (3, 3, 9, 60), (3, 3, 5, 60), (2, 4, 8, 25), (3, 4, 9, 10), (4, 3, 8, 10)]
    for q, n, M, reps in specs:
        for _ in range(reps):
            total = q**n
            M_eff = min(M, total)
            sel = rng.choice(total, size=M_eff, replace=False)
            words = np.empty((M_eff, n), dtype=np.uint8)
            tmp = sel.copy()
            for i in range(n - 1, -1, -1):
                words[:, i] = tmp % q
                tmp //= q
            C = Code.from_words(q, n, words)
            cases += 1
            if not run_case(C, rng, n_inv=4):
                failures += 1

    print(f"{cases} cases, {failures} failures, {time.time() - t0:.1f}s")
    return failures


if __name__ == "__main__":
    sys.exit(1 if main() else 0)
