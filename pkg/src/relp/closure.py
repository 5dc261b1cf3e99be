"""Decomposition closure of a finite language.

The closure C(L) is the smallest family of languages that contains L and,
for every member K and every way of writing K as a concatenation K1·K2 or
a union K1+K2 of nonempty languages, contains K1 and K2 as well.

Because K = K1 + K with any nonempty K1 subset of K, the union rule is
equivalent to: every nonempty subset of a member is a member.  That is
how we compute it -- subsets plus exact concatenation factorizations, to
a fixpoint.

Derived index sets used by the linear programs:

* strings: C0(L), the s with {s} in C(L) (one LP variable per string);
* concat_pairs: ordered member pairs (K1,K2) with K1·K2 in C(L);
* union_pairs: ordered member pairs (K1,K2) with K1+K2 in C(L).

For the block languages B(n,k) the closure has a closed form -- all
nonempty subsets of the blocks B(m,l) with m <= n, l <= min(m,k) -- and
materializing it is hopeless beyond small n.  BinomialIndex is the
implicit counterpart used by the relaxed programs: it enumerates blocks
and block quadruples without ever listing subsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .config import ResourceCapError
from .lang import Language, binomial, canon_key


def _quotients(u: str, lang: Language) -> frozenset[str]:
    """The left quotient u^{-1}K: suffixes v with u+v a member."""
    lu = len(u)
    return frozenset(s[lu:] for s in lang.members if len(s) > lu and s.startswith(u))


def factorizations(
    lang: Language, max_prefix_pool: int = 20
) -> list[tuple[Language, Language]]:
    """All ordered pairs (K1, K2) of languages with K1·K2 == lang, exactly.

    Every valid right factor K2 contains at least one proper suffix of the
    canonically first member, so we anchor the search there: for each such
    suffix v0, candidate left factors are subsets of {u : u v0 in K}.  For
    each candidate K1 the inclusion-maximal right factor is the
    intersection of left quotients; any subset of it whose product still
    covers K is a valid K2.

    The candidate pool per anchor is at most |K| strings; if it exceeds
    max_prefix_pool the subset enumeration is refused as a resource cap.
    """
    members = lang.members
    first = members[0]
    member_set = set(members)
    found: set[tuple[tuple[str, ...], tuple[str, ...]]] = set()
    out: list[tuple[Language, Language]] = []

    for cut in range(1, len(first)):
        v0 = first[cut:]
        lv = len(v0)
        pool = sorted(
            {s[:-lv] for s in members if len(s) > lv and s.endswith(v0)},
            key=canon_key,
        )
        if not pool:
            continue
        if len(pool) > max_prefix_pool:
            raise ResourceCapError(
                f"factorization prefix pool has {len(pool)} candidates "
                f"(cap {max_prefix_pool}) for {lang!r}"
            )
        quots = {u: _quotients(u, lang) for u in pool}
        for r in range(1, len(pool) + 1):
            for left in combinations(pool, r):
                right_max = frozenset.intersection(*(quots[u] for u in left))
                if not right_max:
                    continue
                produced = {u + v for u in left for v in right_max}
                if not member_set <= produced:
                    continue  # even the maximal right factor cannot cover K
                # forced suffixes: members writable in only one way over left
                ways: dict[str, set[str]] = {s: set() for s in members}
                for u in left:
                    for v in right_max:
                        ways[u + v].add(v)
                forced: set[str] = set()
                for s in members:
                    if len(ways[s]) == 1:
                        forced |= ways[s]
                optional = sorted(right_max - forced, key=canon_key)
                for r2 in range(len(optional) + 1):
                    for extra in combinations(optional, r2):
                        right = forced | set(extra)
                        if not right:
                            continue
                        covered = {u + v for u in left for v in right}
                        if covered != member_set:
                            continue
                        key = (tuple(left), tuple(sorted(right, key=canon_key)))
                        if key not in found:
                            found.add(key)
                            out.append((Language(left), Language(right)))

    out.sort(key=lambda pair: (pair[0].sort_key(), pair[1].sort_key()))
    return out


class Closure:
    """The materialized closure C(L), with its index sets computed lazily."""

    def __init__(self, base: Language, members: list[Language]):
        self.base = base
        self.members: tuple[Language, ...] = tuple(sorted(members, key=Language.sort_key))
        self._member_set = frozenset(self.members)
        self._strings: tuple[str, ...] | None = None
        self._concat_pairs: list[tuple[Language, Language]] | None = None
        self._union_pairs: list[tuple[Language, Language]] | None = None

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, lang: Language) -> bool:
        return lang in self._member_set

    def __repr__(self) -> str:
        return f"Closure(base={self.base.serialize()}, members={len(self.members)})"

    def strings(self) -> tuple[str, ...]:
        """C0(L): the strings whose singleton language is a member."""
        if self._strings is None:
            self._strings = tuple(
                sorted((k.only for k in self.members if k.is_singleton), key=canon_key)
            )
        return self._strings

    def _buckets(self) -> dict[tuple[int, int], list[Language]]:
        buckets: dict[tuple[int, int], list[Language]] = {}
        for k in self.members:
            buckets.setdefault((k.min_len(), k.max_len()), []).append(k)
        return buckets

    def concat_pairs(self) -> list[tuple[Language, Language]]:
        """C_c(L): ordered member pairs whose concatenation is a member."""
        if self._concat_pairs is not None:
            return self._concat_pairs
        buckets = self._buckets()
        signatures = set(buckets)
        pairs = []
        for (lo1, hi1), group1 in buckets.items():
            for (lo2, hi2), group2 in buckets.items():
                if (lo1 + lo2, hi1 + hi2) not in signatures:
                    continue
                for k1 in group1:
                    for k2 in group2:
                        if k1.concat(k2) in self._member_set:
                            pairs.append((k1, k2))
        pairs.sort(key=lambda p: (p[0].sort_key(), p[1].sort_key()))
        self._concat_pairs = pairs
        return pairs

    def union_pairs(self) -> list[tuple[Language, Language]]:
        """C_u(L): ordered member pairs whose union is a member."""
        if self._union_pairs is not None:
            return self._union_pairs
        buckets = self._buckets()
        signatures = set(buckets)
        pairs = []
        for (lo1, hi1), group1 in buckets.items():
            for (lo2, hi2), group2 in buckets.items():
                if (min(lo1, lo2), max(hi1, hi2)) not in signatures:
                    continue
                for k1 in group1:
                    for k2 in group2:
                        if k1.union(k2) in self._member_set:
                            pairs.append((k1, k2))
        pairs.sort(key=lambda p: (p[0].sort_key(), p[1].sort_key()))
        self._union_pairs = pairs
        return pairs


def compute_closure(
    base: Language, max_members: int = 100_000, factor_pool_cap: int = 20
) -> Closure:
    """Materialize C(base) by fixpoint iteration.

    Raises ResourceCapError when the member count exceeds max_members;
    the block-language closures grow like 2^n, so the cap matters.
    """
    seen: dict[Language, None] = {base: None}
    queue: list[Language] = [base]
    while queue:
        lang = queue.pop()
        fresh: list[Language] = []
        if len(lang) > 1:
            for sub in lang.subsets(proper=True):
                if sub not in seen:
                    fresh.append(sub)
        for k1, k2 in factorizations(lang, max_prefix_pool=factor_pool_cap):
            if k1 not in seen:
                fresh.append(k1)
            if k2 not in seen:
                fresh.append(k2)
        for lang2 in fresh:
            if lang2 not in seen:
                seen[lang2] = None
                queue.append(lang2)
        if len(seen) > max_members:
            raise ResourceCapError(
                f"closure of {base!r} exceeds {max_members} members"
            )
    return Closure(base, list(seen))


# -- implicit closure of the block languages B(n,k) --------------------------


@dataclass(frozen=True)
class BinomialIndex:
    """Index sets of C(B(n,k)) in block form, without listing subsets.

    blocks are the (m,l) with 0 < m <= n, 0 <= l <= min(m,k); quadruples
    are the (n1,k1,n2,k2) with both halves blocks, n1+n2 <= n and
    k1+k2 <= k.  One LP row per quadruple replaces the per-subset rows of
    the full program.
    """

    n: int
    k: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"need 0 <= k <= n, got k={self.k}, n={self.n}")

    def blocks(self) -> list[tuple[int, int]]:
        return [
            (m, l) for m in range(1, self.n + 1) for l in range(0, min(m, self.k) + 1)
        ]

    def quadruples(self) -> list[tuple[int, int, int, int]]:
        quads = []
        for n1 in range(1, self.n):
            for n2 in range(1, self.n - n1 + 1):
                for k1 in range(0, min(n1, self.k) + 1):
                    for k2 in range(0, min(n2, self.k - k1) + 1):
                        quads.append((n1, k1, n2, k2))
        quads.sort()
        return quads

    def strings(self) -> list[str]:
        """C0(B(n,k)): strings of length <= n with at most k ones."""
        out: list[str] = []
        for m, l in self.blocks():
            out.extend(binomial(m, l).members)
        out.sort(key=canon_key)
        return out

    def block_size(self, m: int, l: int) -> int:
        return comb(m, l)


def product_block(n1: int, k1: int, n2: int, k2: int) -> list[str]:
    """B(n1,k1)·B(n2,k2): length n1+n2, k1 ones in the first n1 positions."""
    return [
        u + v for u in binomial(n1, k1).members for v in binomial(n2, k2).members
    ]
