"""Dessins as permutation triples: validation, genus, monodromy order,
ramification-prime certificates and exhaustive small-degree enumeration.

Permutations act on {0, .., n-1} and are stored as image tuples; products
compose right-to-left ((a*b)(i) = a[b[i]]). The triple constraint
sigma0 sigma1 sigma_inf = 1 fixes sigma_inf = (sigma0 sigma1)^(-1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from gmpy2 import mpz

from .intmath import DomainError, prime_divisors

DEGREE_LIMIT = 12
ENUMERATION_LIMIT = 7


def perm_id(n):
    return tuple(range(n))


def perm_mul(a, b):
    """(a*b)(i) = a[b[i]]: apply b first."""
    return tuple(a[b[i]] for i in range(len(a)))


def perm_inv(a):
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def perm_conj(g, s):
    """g s g^(-1) as an image tuple."""
    out = [0] * len(s)
    for i in range(len(s)):
        out[g[i]] = g[s[i]]
    return tuple(out)


def cycle_type(p):
    """Cycle lengths in decreasing order (a partition of n)."""
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        out.append(length)
    return tuple(sorted(out, reverse=True))


def cycle_count(p) -> int:
    return len(cycle_type(p))


def _check_perm(p, n):
    p = tuple(int(i) for i in p)
    if len(p) != n or sorted(p) != list(range(n)):
        raise DomainError("not a permutation of the stated degree")
    return p


@dataclass(frozen=True)
class PermutationTriple:
    """(sigma0, sigma1, sigma_inf) with product 1 and transitive action."""

    n: int
    sigma0: tuple
    sigma1: tuple

    @property
    def sigma_inf(self):
        return perm_inv(perm_mul(self.sigma0, self.sigma1))

    def as_record(self) -> dict:
        pp = passport(self)
        return {
            "degree": self.n,
            "sigma0": [i + 1 for i in self.sigma0],
            "sigma1": [i + 1 for i in self.sigma1],
            "passport": [list(t) for t in pp.cycle_types],
            "genus": pp.genus,
            "group_order": str(monodromy_order(self)),
            "beckmann_primes": [int(p) for p in beckmann_primes(self)],
        }


def triple_validate(sigma0, sigma1, n: int) -> PermutationTriple:
    """Build a triple, checking sizes and transitivity by orbit closure."""
    s0 = _check_perm(sigma0, n)
    s1 = _check_perm(sigma1, n)
    if not _is_transitive((s0, s1), n):
        raise DomainError("the pair generates an intransitive group")
    return PermutationTriple(n, s0, s1)


def _is_transitive(gens, n) -> bool:
    seen = [False] * n
    seen[0] = True
    queue = [0]
    count = 1
    while queue:
        x = queue.pop()
        for g in gens:
            y = g[x]
            if not seen[y]:
                seen[y] = True
                count += 1
                queue.append(y)
    return count == n


def genus(t: PermutationTriple) -> int:
    """Genus via the three-point Riemann-Hurwitz count; always a nonnegative
    integer for a valid transitive triple."""
    total = cycle_count(t.sigma0) + cycle_count(t.sigma1) + cycle_count(t.sigma_inf)
    euler = total - t.n
    if (2 - euler) % 2 != 0:
        raise AssertionError("Riemann-Hurwitz parity violated")
    g = (2 - euler) // 2
    if g < 0:
        raise AssertionError("negative genus for a transitive triple")
    return g


@dataclass(frozen=True)
class Passport:
    cycle_types: tuple
    genus: int


def passport(t: PermutationTriple) -> Passport:
    return Passport(
        cycle_types=(cycle_type(t.sigma0), cycle_type(t.sigma1),
                     cycle_type(t.sigma_inf)),
        genus=genus(t),
    )


# ---------------------------------------------------------------------------
# group order via a stabilizer chain
# ---------------------------------------------------------------------------

class _Chain:
    """Incremental Schreier-Sims stabilizer chain with membership sifting."""

    def __init__(self, n):
        self.n = n
        self.point = None
        self.orbit = {}
        self.gens = []
        self.stab = None

    def order(self):
        if self.point is None:
            return mpz(1)
        return mpz(len(self.orbit)) * self.stab.order()

    def contains(self, g) -> bool:
        if g == perm_id(self.n):
            return True
        if self.point is None:
            return False
        img = g[self.point]
        if img not in self.orbit:
            return False
        rep = self.orbit[img]
        return self.stab.contains(perm_mul(perm_inv(rep), g))

    def add(self, g):
        if self.contains(g):
            return
        self.gens.append(g)
        if self.point is None:
            self.point = next(i for i in range(self.n) if g[i] != i)
            self.stab = _Chain(self.n)
        self._close_orbit()

    def _close_orbit(self):
        ident = perm_id(self.n)
        self.orbit = {self.point: ident}
        queue = [self.point]
        while queue:
            x = queue.pop()
            u = self.orbit[x]
            for h in self.gens:
                y = h[x]
                if y not in self.orbit:
                    self.orbit[y] = perm_mul(h, u)
                    queue.append(y)
                else:
                    schreier = perm_mul(perm_inv(self.orbit[y]), perm_mul(h, u))
                    self.stab.add(schreier)


def group_order(gens, n) -> mpz:
    chain = _Chain(n)
    for g in gens:
        chain.add(tuple(g))
    return chain.order()


def monodromy_order(t: PermutationTriple, limit: int = DEGREE_LIMIT) -> mpz:
    """Order of <sigma0, sigma1>; divides n!."""
    if t.n > limit:
        raise DomainError(f"degree above the configured limit {limit}")
    return group_order([t.sigma0, t.sigma1], t.n)


def beckmann_primes(t: PermutationTriple, limit: int = DEGREE_LIMIT):
    """Primes dividing the monodromy order: the field of moduli of the dessin
    is unramified outside this set, and every member is <= n."""
    order = monodromy_order(t, limit)
    return sorted(prime_divisors(order))


# ---------------------------------------------------------------------------
# enumeration at small degree
# ---------------------------------------------------------------------------

def canonical_pair(sigma0, sigma1):
    """Lexicographically minimal simultaneous conjugate of the pair."""
    n = len(sigma0)
    best = None
    for g in itertools.permutations(range(n)):
        cand = (perm_conj(g, sigma0), perm_conj(g, sigma1))
        if best is None or cand < best:
            best = cand
    return best


def _class_representatives(n):
    """One permutation per cycle type: decreasing cycles on consecutive points."""
    reps = []
    for part in _partitions(n):
        img = []
        start = 0
        for length in part:
            img.extend(list(range(start + 1, start + length)) + [start])
            start += length
        reps.append((part, tuple(img)))
    return reps


def _partitions(n, largest=None):
    if n == 0:
        yield ()
        return
    if largest is None:
        largest = n
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def enumerate_dessins(n: int, limit: int = ENUMERATION_LIMIT):
    """All degree-n dessins up to simultaneous conjugation.

    Returns (triples, count) with deterministic canonical representatives in
    sorted order. Enumeration fixes sigma0 as a cycle-type representative and
    deduplicates sigma1 under its centralizer, which reaches the same orbit
    set as a raw scan over all pairs (verified against a brute-force oracle
    in the tests).
    """
    if n < 1:
        raise DomainError("degree must be positive")
    if n > limit:
        raise DomainError(f"degree above the configured limit {limit}")
    if n == 1:
        return [PermutationTriple(1, (0,), (0,))], 1

    all_perms = list(itertools.permutations(range(n)))
    canon = set()
    if n <= 4:
        for s0 in all_perms:
            for s1 in all_perms:
                if _is_transitive((s0, s1), n):
                    canon.add(canonical_pair(s0, s1))
    else:
        for _, rep in _class_representatives(n):
            cent = [g for g in all_perms if perm_mul(g, rep) == perm_mul(rep, g)]
            for s1 in all_perms:
                if not _is_transitive((rep, s1), n):
                    continue
                minimal = min(perm_conj(g, s1) for g in cent)
                if minimal == s1:
                    canon.add(canonical_pair(rep, s1))
    triples = [PermutationTriple(n, s0, s1) for s0, s1 in sorted(canon)]
    return triples, len(triples)
