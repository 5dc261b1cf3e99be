"""Regular expressions for finite languages: symbols, union, concatenation.

The grammar is deliberately star-free and epsilon-free:

    R ::= a | (R1 + R2) | R1 R2        (a an alphabet symbol)

so every expression denotes a nonempty finite language of nonempty
strings.  The *length* of an expression is the number of symbol
occurrences in it -- parentheses and plus signs are free.

Text syntax follows the usual conventions: juxtaposition for
concatenation, ``(...+...+...)`` for (n-ary) union.  The renderer emits
the minimal parenthesization: unions are always parenthesized, symbols
and concatenations never are.  Parsing folds n-ary unions to the right
and concatenation chains to the left, so ``parse(render(r))`` recovers
``r`` up to those folds (see :func:`normalize`).

A *term* is a maximal run of symbols not interrupted by a union, e.g.
``(0+00)0`` has terms 0, 00 and 0 again.  Terms are what the dual
certificate procedures count, so :func:`terms_of` returns a multiset.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import ceil, log2

from .lang import FORBIDDEN_SYMBOLS, Language, check_alphabet, check_symbol


@dataclass(frozen=True, slots=True)
class Symbol:
    ch: str


@dataclass(frozen=True, slots=True)
class Concat:
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True, slots=True)
class Union:
    left: "Regex"
    right: "Regex"


Regex = Symbol | Concat | Union


class RegexSyntaxError(ValueError):
    pass


# -- structure helpers -------------------------------------------------------


def concat_factors(r: Regex) -> list[Regex]:
    """Flatten nested concatenations into their factor sequence."""
    out: list[Regex] = []
    stack = [r]
    while stack:
        node = stack.pop()
        if isinstance(node, Concat):
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def union_branches(r: Regex) -> list[Regex]:
    """Flatten nested unions into their branch sequence."""
    out: list[Regex] = []
    stack = [r]
    while stack:
        node = stack.pop()
        if isinstance(node, Union):
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def cat(factors: list[Regex]) -> Regex:
    """Left-fold a factor list back into a concatenation chain."""
    if not factors:
        raise ValueError("cannot concatenate zero factors")
    node = factors[0]
    for f in factors[1:]:
        node = Concat(node, f)
    return node


def alt(branches: list[Regex]) -> Regex:
    """Right-fold a branch list back into a union chain."""
    if not branches:
        raise ValueError("cannot union zero branches")
    node = branches[-1]
    for b in reversed(branches[:-1]):
        node = Union(b, node)
    return node


def word(s: str) -> Regex:
    """The term denoting exactly the string s."""
    return cat([Symbol(ch) for ch in s])


def as_word(r: Regex) -> str | None:
    """The string spelled by r if r is symbols-only (a term), else None."""
    chars = []
    for f in concat_factors(r):
        if not isinstance(f, Symbol):
            return None
        chars.append(f.ch)
    return "".join(chars)


def length(r: Regex) -> int:
    """Number of alphabet-symbol occurrences in r."""
    n = 0
    stack = [r]
    while stack:
        node = stack.pop()
        if isinstance(node, Symbol):
            n += 1
        else:
            stack.append(node.left)
            stack.append(node.right)
    return n


def normalize(r: Regex) -> Regex:
    """Canonical fold: concatenations to the left, unions to the right."""
    if isinstance(r, Symbol):
        return r
    if isinstance(r, Concat):
        return cat([normalize(f) for f in concat_factors(r)])
    return alt([normalize(b) for b in union_branches(r)])


def flip(r: Regex) -> Regex:
    """Exchange the symbols 0 and 1 throughout."""
    swap = {"0": "1", "1": "0"}
    if isinstance(r, Symbol):
        return Symbol(swap.get(r.ch, r.ch))
    if isinstance(r, Concat):
        return Concat(flip(r.left), flip(r.right))
    return Union(flip(r.left), flip(r.right))


def language_of(r: Regex) -> Language:
    """The finite language denoted by r."""
    if isinstance(r, Symbol):
        return Language([r.ch])
    if isinstance(r, Concat):
        return language_of(r.left).concat(language_of(r.right))
    return language_of(r.left).union(language_of(r.right))


def terms_of(r: Regex) -> Counter[str]:
    """Multiset of the maximal symbol-only runs of r.

    Adjacent symbol factors inside one concatenation chain merge into a
    single term; a union boundary always ends a run.
    """
    out: Counter[str] = Counter()

    def walk(node: Regex) -> None:
        w = as_word(node)
        if w is not None:
            out[w] += 1
            return
        if isinstance(node, Union):
            walk(node.left)
            walk(node.right)
            return
        run = ""
        for f in concat_factors(node):
            if isinstance(f, Symbol):
                run += f.ch
            else:
                if run:
                    out[run] += 1
                    run = ""
                walk(f)
        if run:
            out[run] += 1

    walk(r)
    return out


# -- text form ----------------------------------------------------------------


def render(r: Regex) -> str:
    if isinstance(r, Symbol):
        return r.ch
    if isinstance(r, Union):
        return "(" + "+".join(render(b) for b in union_branches(r)) + ")"
    return "".join(render(f) for f in concat_factors(r))


def parse(text: str, alphabet: str = "01") -> Regex:
    """Parse the text syntax.  Star, epsilon and empty-set tokens are refused."""
    check_alphabet(alphabet)
    symbols = set(alphabet)
    pos = 0
    n = len(text)

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos] in " \t":
            pos += 1

    def fail(msg: str) -> "RegexSyntaxError":
        return RegexSyntaxError(f"{msg} at position {pos} in {text!r}")

    def parse_seq() -> Regex:
        nonlocal pos
        factors: list[Regex] = []
        while True:
            skip_ws()
            if pos >= n or text[pos] in ")+":
                break
            ch = text[pos]
            if ch == "(":
                pos += 1
                factors.append(parse_alt())
                skip_ws()
                if pos >= n or text[pos] != ")":
                    raise fail("expected ')'")
                pos += 1
            elif ch in symbols:
                factors.append(Symbol(ch))
                pos += 1
            elif ch in FORBIDDEN_SYMBOLS or ch in "ε∅":
                raise fail(f"token {ch!r} is not part of this grammar (no star, no epsilon, no empty set)")
            else:
                raise fail(f"unexpected character {ch!r} (alphabet is {alphabet!r})")
        if not factors:
            raise fail("empty expression")
        return cat(factors)

    def parse_alt() -> Regex:
        nonlocal pos
        branches = [parse_seq()]
        while True:
            skip_ws()
            if pos < n and text[pos] == "+":
                pos += 1
                branches.append(parse_seq())
            else:
                break
        return alt(branches)

    result = parse_seq()
    skip_ws()
    if pos != n:
        if text[pos] == "+":
            raise fail("top-level union must be parenthesized")
        raise fail(f"unexpected character {text[pos]!r}")
    return result


# -- divide-and-conquer constructions ----------------------------------------


def _zeros(m: int) -> Regex:
    return word("0" * m)


def _sigma_chain(m: int) -> Regex:
    return cat([Union(Symbol("0"), Symbol("1")) for _ in range(m)])


def ellul_b_n1(n: int) -> Regex:
    """Balanced construction for B(n,1), of length ceil(n*log2(2n)).

    R_1 = 1 and R_n = (0^(n//2) R_ceil + R_floor 0^ceil(n/2)): each half
    carries the single 1 in one branch and is all zeros in the other.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Symbol("1")
    a, b = n // 2, n - n // 2
    return Union(Concat(_zeros(a), ellul_b_n1(b)), Concat(ellul_b_n1(a), _zeros(b)))


def ellul_b_n1_length(n: int) -> int:
    """ceil(n*log2(2n)), the exact length of ellul_b_n1(n)."""
    return ceil(n * log2(2 * n))


def ellul_t_n1(n: int) -> Regex:
    """The same halving idea for T(n,1), with (0+1) blocks for the free half.

    The resulting length is exactly 2*ceil(n*log2(2n)) - n.  (It is often
    quoted as ceil(2n*log2(2n)); that is only an upper bound -- the base
    case contributes 1 symbol per leaf, not 2.)
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Symbol("1")
    a, b = n // 2, n - n // 2
    return Union(
        Concat(_sigma_chain(a), ellul_t_n1(b)),
        Concat(ellul_t_n1(a), _sigma_chain(b)),
    )


def ellul_t_n1_length(n: int) -> int:
    return 2 * ceil(n * log2(2 * n)) - n


@lru_cache(maxsize=None)
def ellul_bnk(n: int, k: int) -> Regex:
    """Generalized balanced construction for B(n,k).

    R_{n,0} = 0^n; for k > n/2 take the 0/1 flip of R_{n,n-k}; otherwise
    split the positions in half and branch over how many ones fall left:

        R_{n,k} = ( R_{floor,0} R_{ceil,k} + ... + R_{floor,k} R_{ceil,0} )

    Summands whose factor would need more ones than positions (an empty
    block) are dropped; with the flip rule applied first this never
    actually triggers, but it keeps the recursion safe under edits.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    if k == 0:
        return _zeros(n)
    if 2 * k > n:
        return flip(ellul_bnk(n, n - k))
    a, b = n // 2, n - n // 2
    branches = [
        Concat(ellul_bnk(a, i), ellul_bnk(b, k - i))
        for i in range(k + 1)
        if i <= a and k - i <= b
    ]
    return alt(branches)
