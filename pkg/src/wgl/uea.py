"""Exact arithmetic in U(gl_N) over a fixed pyramid.

Generators are the matrix units e_{a,b} indexed by ordered pairs of pyramid
boxes, with [e_ab, e_cd] = delta_bc e_ad - delta_da e_cb.  Elements are sparse
maps from PBW-ordered monomials to exact rational coefficients.

The total order on generators is blockwise by grading class — everything of
degree <= 0 first, then the degree-1/2 letters, then degree >= 1 — with ties
broken lexicographically.  Because of that, the trailing block of any
PBW-ordered monomial is exactly its degree->=1 part, which is what makes
reduction modulo the left ideal I (module `quotient`) a single substitution
pass.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

from .pyramid import Box, HalfInt, Partition, boxes, grading_class, x_coord

Coeff = Union[int, Fraction]

# Straightening-cache entries are cheap to recompute but can pile up on long
# runs; past this many the cache is dropped wholesale (only between products,
# never mid-walk).
_LM_CACHE_CAP = 3_000_000


def _ncoeff(c: Coeff) -> Coeff:
    """Collapse Fractions with unit denominator to plain ints (speed)."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class Algebra:
    """U(gl_N) for one partition; interns letters and caches rewriting steps.

    One instance per partition (construction is memoized), so elements of the
    same partition share the letter tables and the normal-form cache.
    """

    _instances: dict = {}

    def __new__(cls, partition: Partition):
        key = partition.parts
        inst = cls._instances.get(key)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(partition)
            cls._instances[key] = inst
        return inst

    def _init(self, partition: Partition):
        self.partition = partition
        self.boxes = boxes(partition)
        self.N = partition.N
        pairs = [(a, b) for a in self.boxes for b in self.boxes]
        pairs.sort(key=lambda ab: (grading_class(partition, *ab), ab))
        self.letters: Tuple[Tuple[Box, Box], ...] = tuple(pairs)
        self.letter_id = {ab: n for n, ab in enumerate(pairs)}
        self.cls = tuple(grading_class(partition, a, b) for a, b in pairs)
        self.deg2 = tuple(
            x_coord(partition, a).doubled - x_coord(partition, b).doubled
            for a, b in pairs
        )
        # Kazhdan degree of a letter is 1 - (grading degree), doubled here.
        self.delta2 = tuple(2 - d for d in self.deg2)
        # (f | e_{a,b}): 1 iff b is the box immediately right of a in its row.
        self.fval = tuple(
            1 if (a.i == b.i and b.h == a.h + 1) else 0 for a, b in pairs
        )
        self._comm_cache: dict = {}
        self._lm_cache: dict = {}

    # -- structure constants ------------------------------------------------

    def _comm_ids(self, x: int, y: int):
        """[e_x, e_y] as ((letter id, +-1), ...)."""
        key = (x, y)
        hit = self._comm_cache.get(key)
        if hit is not None:
            return hit
        a, b = self.letters[x]
        c, d = self.letters[y]
        acc: dict = {}
        if b == c:
            t = self.letter_id[(a, d)]
            acc[t] = acc.get(t, 0) + 1
        if d == a:
            t = self.letter_id[(c, b)]
            acc[t] = acc.get(t, 0) - 1
        res = tuple((t, cf) for t, cf in acc.items() if cf != 0)
        self._comm_cache[key] = res
        return res

    # -- PBW straightening ---------------------------------------------------

    def _letter_mono(self, x: int, mono: tuple):
        """Normal form of e_x * mono for a PBW-ordered mono; memoized.

        Iterative dependency walk (no recursion): termination follows from
        the usual diamond-lemma argument — each rewrite either shortens the
        word or removes an inversion.
        """
        memo = self._lm_cache
        root = (x, mono)
        cached = memo.get(root)
        if cached is not None:
            return cached
        stack = [root]
        while stack:
            key = stack[-1]
            if key in memo:
                stack.pop()
                continue
            kx, kmono = key
            if not kmono or kx <= kmono[0]:
                memo[key] = (((kx,) + kmono, 1),)
                stack.pop()
                continue
            y, rest = kmono[0], kmono[1:]
            ready = True
            dep1 = (kx, rest)
            got1 = memo.get(dep1)
            if got1 is None:
                stack.append(dep1)
                ready = False
            else:
                for m1, _ in got1:
                    if (y, m1) not in memo:
                        stack.append((y, m1))
                        ready = False
            for t, _ in self._comm_ids(kx, y):
                if (t, rest) not in memo:
                    stack.append((t, rest))
                    ready = False
            if not ready:
                continue
            acc: dict = {}
            for m1, c1 in memo[dep1]:
                for m2, c2 in memo[(y, m1)]:
                    acc[m2] = acc.get(m2, 0) + c1 * c2
            for t, ct in self._comm_ids(kx, y):
                for m3, c3 in memo[(t, rest)]:
                    acc[m3] = acc.get(m3, 0) + ct * c3
            memo[key] = tuple((m, c) for m, c in acc.items() if c != 0)
            stack.pop()
        return memo[root]

    def _word_terms(self, word: Sequence[int], coeff: Coeff = 1) -> dict:
        """Normal form of an arbitrary generator word, as a term dict."""
        acc = {(): 1}
        for ell in reversed(list(word)):
            nxt: dict = {}
            for mono, c in acc.items():
                for m2, c2 in self._letter_mono(ell, mono):
                    nxt[m2] = nxt.get(m2, 0) + c * c2
            acc = nxt
        if coeff != 1:
            acc = {m: c * coeff for m, c in acc.items()}
        return acc

    # -- element factories ----------------------------------------------------

    def zero(self) -> "UEAElement":
        return UEAElement(self, {})

    def one(self) -> "UEAElement":
        return UEAElement(self, {(): 1})

    def scalar(self, c: Coeff) -> "UEAElement":
        c = _ncoeff(c)
        return UEAElement(self, {(): c} if c != 0 else {})

    def gen(self, a, b) -> "UEAElement":
        lid = self.letter_id.get((Box(*a), Box(*b)))
        if lid is None:
            raise ValueError(f"no generator e[{tuple(a)},{tuple(b)}] for partition {self.partition}")
        return UEAElement(self, {(lid,): 1})

    def gen_by_id(self, lid: int) -> "UEAElement":
        return UEAElement(self, {(lid,): 1})

    def element(self, terms: dict) -> "UEAElement":
        return UEAElement(self, dict(terms))

    def normal_form(self, expr) -> "UEAElement":
        """Normal form of a formal expression.

        Accepts the element text grammar (see `parse_element`) or an iterable
        of (coeff, [letter, ...]) pairs, letters given as ((i,h),(j,k)).
        """
        if isinstance(expr, str):
            return parse_element(self, expr)
        total: dict = {}
        for coeff, word in expr:
            ids = [self.letter_id[(Box(*a), Box(*b))] for a, b in word]
            for m, c in self._word_terms(ids, _ncoeff(coeff)).items():
                total[m] = total.get(m, 0) + c
        return UEAElement(self, total)

    def __repr__(self):
        return f"Algebra(gl_{self.N}, partition {self.partition})"


class UEAElement:
    """Sparse PBW-normal-form element of U(gl_N).

    Immutable by convention: no method mutates `terms` after construction.
    """

    __slots__ = ("alg", "terms")

    def __init__(self, alg: Algebra, terms: dict):
        self.alg = alg
        self.terms = {m: _ncoeff(c) for m, c in terms.items() if c != 0}

    # -- ring operations ------------------------------------------------------

    def _check(self, other: "UEAElement"):
        if self.alg is not other.alg:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.alg.scalar(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return UEAElement(self.alg, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.alg.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return UEAElement(self.alg, {m: -c for m, c in self.terms.items()})

    def scale(self, c: Coeff) -> "UEAElement":
        c = _ncoeff(c)
        if c == 0:
            return self.alg.zero()
        return UEAElement(self.alg, {m: cf * c for m, cf in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        alg = self.alg
        if len(alg._lm_cache) > _LM_CACHE_CAP:
            alg._lm_cache.clear()
        lm = alg._letter_mono
        res: dict = {}
        # Fold the left factor's letters right-to-left onto the right factor,
        # sharing partial results between monomials with a common tail: sort
        # the reversed words so equal tails are contiguous, then walk them as
        # a trie (one straightening fold per distinct tail extension).
        items = sorted((mono[::-1], c) for mono, c in self.terms.items())
        stack = [(0, len(items), 0, other.terms)]
        while stack:
            lo, hi, depth, acc = stack.pop()
            i = lo
            csum = 0
            while i < hi and len(items[i][0]) == depth:
                csum += items[i][1]
                i += 1
            if csum:
                for mono, c in acc.items():
                    res[mono] = res.get(mono, 0) + csum * c
            while i < hi:
                ell = items[i][0][depth]
                j = i
                while j < hi and items[j][0][depth] == ell:
                    j += 1
                nxt: dict = {}
                for mono, c in acc.items():
                    for m2, c2 in lm(ell, mono):
                        nxt[m2] = nxt.get(m2, 0) + c * c2
                stack.append((i, j, depth + 1,
                              {m: c for m, c in nxt.items() if c}))
                i = j
        return UEAElement(alg, {m: c for m, c in res.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def commutator(self, other: "UEAElement") -> "UEAElement":
        return self * other - other * self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.alg.scalar(other)
        if not isinstance(other, UEAElement):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.alg), tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    # -- gradings ---------------------------------------------------------------

    def kazhdan_degree(self) -> Optional[HalfInt]:
        """Smallest filtration degree containing this element; None for 0."""
        if not self.terms:
            return None
        delta2 = self.alg.delta2
        return HalfInt(max(sum(delta2[ell] for ell in m) for m in self.terms))

    def is_central(self) -> bool:
        alg = self.alg
        for lid in range(len(alg.letters)):
            if not alg.gen_by_id(lid).commutator(self).is_zero():
                return False
        return True

    # -- presentation -------------------------------------------------------------

    def sorted_terms(self):
        letters = self.alg.letters
        return sorted(
            self.terms.items(),
            key=lambda mc: (len(mc[0]), tuple(letters[ell] for ell in mc[0])),
        )

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        letters = self.alg.letters
        chunks = []
        for mono, c in self.sorted_terms():
            body = "*".join(
                f"e[({a.i},{a.h}),({b.i},{b.h})]" for a, b in (letters[ell] for ell in mono)
            )
            mag = abs(Fraction(c))
            coeff_txt = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if not body:
                piece = coeff_txt
            elif mag == 1:
                piece = body
            else:
                piece = f"{coeff_txt}*{body}"
            sign = "-" if c < 0 else "+"
            chunks.append((sign, piece))
        first_sign, first_piece = chunks[0]
        out = ("-" if first_sign == "-" else "") + first_piece
        for sign, piece in chunks[1:]:
            out += f" {sign} {piece}"
        return out

    def to_json_obj(self) -> list:
        letters = self.alg.letters
        out = []
        for mono, c in self.sorted_terms():
            out.append(
                {
                    "coeff": str(Fraction(c)),
                    "monomial": [
                        [[a.i, a.h], [b.i, b.h]] for a, b in (letters[ell] for ell in mono)
                    ],
                }
            )
        return out

    def __repr__(self):
        return self.to_text()


# -- text / JSON parsing -------------------------------------------------------

_LETTER_RE = re.compile(
    r"e\[\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*,\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\]"
)


def _split_terms(text: str):
    """Split on top-level + and - (not inside e[...] brackets)."""
    terms = []
    sign, buf, depth = 1, [], 0
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if depth == 0 and ch in "+-" and buf and "".join(buf).strip():
            terms.append((sign, "".join(buf).strip()))
            sign, buf = (1 if ch == "+" else -1), []
        elif depth == 0 and ch in "+-" and not "".join(buf).strip():
            # leading sign of the term
            sign *= 1 if ch == "+" else -1
            buf = []
        else:
            buf.append(ch)
    tail = "".join(buf).strip()
    if tail:
        terms.append((sign, tail))
    return terms


def parse_element(alg: Algebra, text: str) -> UEAElement:
    """Parse the element grammar: `coeff*e[(i,h),(j,k)]*...` joined by +/-."""
    text = text.strip()
    if text == "0" or not text:
        return alg.zero()
    total = alg.zero()
    for sign, term in _split_terms(text):
        coeff = Fraction(sign)
        word = []
        for factor in term.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in term {term!r}")
            m = _LETTER_RE.fullmatch(factor)
            if m:
                i, h, j, k = map(int, m.groups())
                word.append(((i, h), (j, k)))
            else:
                try:
                    coeff *= Fraction(factor)
                except ValueError as exc:
                    raise ValueError(f"bad factor {factor!r} in element text") from exc
        total = total + alg.normal_form([(coeff, word)])
    return total


def element_from_json(alg: Algebra, obj) -> UEAElement:
    """Inverse of to_json_obj; accepts the bare term array or {"terms": [...]}."""
    if isinstance(obj, dict):
        obj = obj.get("terms", [])
    words = []
    for entry in obj:
        coeff = Fraction(entry["coeff"])
        word = [ (tuple(a), tuple(b)) for a, b in entry["monomial"] ]
        words.append((coeff, word))
    return alg.normal_form(words)
