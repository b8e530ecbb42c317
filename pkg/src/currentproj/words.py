"""Surface group words: reduction, conjugacy canonical forms, enumeration,
and Dehn twist substitution along the fixed pants decomposition.

Letters are nonzero integers: generator i of the standard presentation
(a1, b1, ..., ag, bg) is i, its inverse is -i, with a_k = 2k-1, b_k = 2k.
The string form uses "a1b1A1" with capitals for inverses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import BadIndex, EmptyWord

_LETTER_RE = re.compile(r"([abAB])(\d+)")


@dataclass(frozen=True, slots=True)
class Word:
    """A word in the surface group generators; cyclic words model
    conjugacy classes (free homotopy classes of unoriented curves)."""

    letters: tuple[int, ...]
    cyclic: bool = False

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)), self.cyclic)

    def __mul__(self, other: "Word") -> "Word":
        return reduce(Word(self.letters + other.letters, self.cyclic))

    def __str__(self):
        return format_word(self)

    @staticmethod
    def parse(text: str, cyclic: bool = False) -> "Word":
        return parse_word(text, cyclic=cyclic)


def parse_word(text: str, cyclic: bool = False) -> Word:
    """Parse "a1b2A1" style strings; empty string gives the empty word."""
    pos = 0
    letters = []
    for m in _LETTER_RE.finditer(text):
        if m.start() != pos:
            raise ValueError(f"cannot parse word {text!r} at position {pos}")
        pos = m.end()
        kind, idx = m.group(1), int(m.group(2))
        if idx < 1:
            raise ValueError(f"generator index must be >= 1 in {text!r}")
        base = 2 * idx - 1 if kind in "aA" else 2 * idx
        letters.append(base if kind.islower() else -base)
    if pos != len(text):
        raise ValueError(f"cannot parse word {text!r} at position {pos}")
    return Word(tuple(letters), cyclic)


def format_word(w: Word) -> str:
    out = []
    for x in w.letters:
        base = abs(x)
        idx = (base + 1) // 2
        kind = "a" if base % 2 == 1 else "b"
        out.append((kind if x > 0 else kind.upper()) + str(idx))
    return "".join(out)


def _free_reduce(letters):
    stack = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return stack


def reduce(w: Word) -> Word:
    """Freely reduce; cyclic words are also cyclically reduced."""
    stack = _free_reduce(w.letters)
    if w.cyclic:
        while len(stack) >= 2 and stack[0] == -stack[-1]:
            stack = stack[1:-1]
    return Word(tuple(stack), w.cyclic)


def _letter_key(x: int) -> tuple[int, int]:
    # a1 < A1 < b1 < B1 < a2 < ... so canonical forms prefer positive letters
    return (abs(x), 0 if x > 0 else 1)


def _word_key(letters) -> tuple:
    return tuple(_letter_key(x) for x in letters)


def canonical_class(w: Word) -> Word:
    """Canonical representative of the unoriented conjugacy class: the least
    cyclic rotation of the cyclically reduced word or of its inverse.

    Equal outputs iff the inputs are conjugate or inverse-conjugate in the
    free group; identifications that need the surface relation are *not*
    applied (see flag_geometric_duplicates in the intersection module).
    """
    r = reduce(Word(w.letters, cyclic=True))
    n = len(r.letters)
    if n == 0:
        raise EmptyWord("canonical_class of a trivial word")
    best = None
    best_key = None
    for seq in (r.letters, r.inverse().letters):
        for i in range(n):
            rot = seq[i:] + seq[:i]
            key = _word_key(rot)
            if best_key is None or key < best_key:
                best, best_key = rot, key
    return Word(best, cyclic=True)


def is_primitive(w: Word) -> bool:
    """False iff the cyclic word is a proper power v^k, k >= 2."""
    letters = reduce(Word(w.letters, cyclic=True)).letters
    n = len(letters)
    if n == 0:
        return False
    for d in range(1, n):
        if n % d == 0 and all(letters[i] == letters[i % d] for i in range(n)):
            return False
    return True


@dataclass(frozen=True)
class SurfacePresentation:
    """Standard presentation of a closed genus-g surface group with its
    fixed pants decomposition (handle cores a_i, handle boundaries h_i,
    and chain curves s_j for genus >= 4)."""

    genus: int
    pants_curves: tuple[Word, ...] = field(init=False)
    relator: Word = field(init=False)

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be >= 2")
        g = self.genus
        rel = []
        for i in range(1, g + 1):
            a, b = 2 * i - 1, 2 * i
            rel += [a, b, -a, -b]
        object.__setattr__(self, "relator", Word(tuple(rel)))
        curves = [Word((2 * i - 1,), cyclic=True) for i in range(1, g + 1)]
        if g == 2:
            curves.append(canonical_class(self._handle_boundary(1)))
        else:
            for i in range(1, g + 1):
                curves.append(canonical_class(self._handle_boundary(i)))
            for j in range(2, g - 1):
                curves.append(canonical_class(self._chain_curve(j)))
        object.__setattr__(self, "pants_curves", tuple(curves))

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus

    @property
    def generator_count(self) -> int:
        return 2 * self.genus

    def letters(self):
        n = self.generator_count
        return [i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)]

    def _handle_boundary(self, i: int) -> Word:
        a, b = 2 * i - 1, 2 * i
        return Word((a, b, -a, -b))

    def _chain_curve(self, j: int) -> Word:
        out = []
        for i in range(1, j + 1):
            a, b = 2 * i - 1, 2 * i
            out += [a, b, -a, -b]
        return Word(tuple(out))

    # ----- Dehn twist substitution tables ---------------------------------

    def twist_table(self, curve_index: int, direction: int) -> dict[int, Word]:
        """Generator image table of the Dehn twist along pants curve
        curve_index; direction +1 is the twist realized by increasing the
        matching Fenchel-Nielsen twist coordinate by one full length."""
        g = self.genus
        n_curves = 3 * g - 3
        if not 0 <= curve_index < n_curves:
            raise BadIndex(f"curve index {curve_index} not in [0, {n_curves - 1}]")
        if direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        table: dict[int, Word] = {}
        if curve_index < g:  # twist along handle core a_i
            i = curve_index + 1
            a, b = 2 * i - 1, 2 * i
            # b_i -> b_i a_i^-direction  (sign pinned by the holonomy
            # full-twist periodicity tests)
            table[b] = Word((b, -direction * a))
        elif g == 2 or curve_index < 2 * g:  # handle boundary h_i
            i = 1 if g == 2 else curve_index - g + 1
            # conjugate the handle carrying the gluing map: the far handle in
            # genus 2 (the only gluing), handle i itself for genus >= 3; the
            # genus-2 gluing targets the inverse boundary, which reverses the
            # twist direction relative to the higher-genus case
            h = self._handle_boundary(i)
            conj_dir = direction if g == 2 else -direction
            conj = h if conj_dir == 1 else h.inverse()
            targets = [3, 4] if g == 2 else [2 * i - 1, 2 * i]
            for t in targets:
                table[t] = conj * Word((t,)) * conj.inverse()
        else:  # chain curve s_j, j in 2..g-2
            j = curve_index - 2 * g + 2
            s = self._chain_curve(j)
            conj = s if direction == 1 else s.inverse()
            for k in range(j + 1, g + 1):
                for t in (2 * k - 1, 2 * k):
                    table[t] = conj * Word((t,)) * conj.inverse()
        return table


def apply_substitution(table: dict[int, Word], w: Word) -> Word:
    out: list[int] = []
    for x in w.letters:
        img = table.get(abs(x))
        if img is None:
            out.append(x)
        else:
            out.extend(img.letters if x > 0 else img.inverse().letters)
    return reduce(Word(tuple(out), w.cyclic))


def dehn_twist_word(P: SurfacePresentation, curve_index: int, w: Word,
                    direction: int = 1) -> Word:
    """Image of the class of w under the Dehn twist along pants curve
    curve_index, canonicalized."""
    table = P.twist_table(curve_index, direction)
    return canonical_class(apply_substitution(table, w))


def enumerate_classes(P: SurfacePresentation, max_len: int) -> list[Word]:
    """All canonical primitive unoriented classes of word length <= max_len,
    sorted by (length, letters)."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    letters = P.letters()
    seen: set[tuple[int, ...]] = set()
    out: list[Word] = []

    def extend(prefix: list[int], remaining: int):
        if prefix:
            if prefix[0] != -prefix[-1]:  # cyclically reduced
                c = canonical_class(Word(tuple(prefix), cyclic=True))
                if c.letters not in seen and is_primitive(c):
                    seen.add(c.letters)
                    out.append(c)
        if remaining == 0:
            return
        for x in letters:
            if prefix and x == -prefix[-1]:
                continue
            prefix.append(x)
            extend(prefix, remaining - 1)
            prefix.pop()

    extend([], max_len)
    out.sort(key=lambda w: (len(w.letters), _word_key(w.letters)))
    return out
