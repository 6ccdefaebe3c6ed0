"""Braid words, plat presentations, and diagram-level quantities.

A plat lives on an even number of strands: adjacent pairs are joined by
caps at the top and cups at the bottom.  Two sign conventions coexist:

* the diagram writhe is the plain sum of braid-letter signs (the
  convention under which the ambient-isotopy normalization removes
  kinks), and
* linking numbers use orientation-traced crossing signs.  Each cap/cup
  joins one upward and one downward strand, so we orient every component
  (downward on its lowest-index top strand), transport directions through
  the word, and flip a crossing's sign when its strands run antiparallel.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .qnum import Spin

__all__ = [
    "BraidWord",
    "PlatBraid",
    "LinkStructure",
    "BraidSyntaxError",
    "parse_braid",
    "plat_components",
    "writhe",
    "linking_number",
    "catalog",
    "catalog_plat",
    "load_catalog_file",
]


class BraidSyntaxError(ValueError):
    """Malformed braid text or out-of-range generator index."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[tuple[int, int], ...]  # (index 1..strands-1, sign +-1)

    def __post_init__(self):
        if self.strands < 2:
            raise BraidSyntaxError("a braid needs at least 2 strands")
        for idx, sign in self.letters:
            if sign not in (-1, 1):
                raise BraidSyntaxError(f"letter sign must be +-1, got {sign}")
            if not (1 <= idx <= self.strands - 1):
                raise BraidSyntaxError(
                    f"generator index {idx} out of range for "
                    f"{self.strands} strands")

    def __len__(self) -> int:
        return len(self.letters)

    def permutation(self) -> list[int]:
        """perm[i] = bottom position of the strand entering at top i (0-based)."""
        occupants = list(range(self.strands))  # position -> strand id
        for idx, _sign in self.letters:
            a, b = idx - 1, idx
            occupants[a], occupants[b] = occupants[b], occupants[a]
        out = [0] * self.strands
        for pos, strand in enumerate(occupants):
            out[strand] = pos
        return out

    def text(self) -> str:
        return " ".join(str(i * s) for i, s in self.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands,
                         tuple((i, -s) for i, s in reversed(self.letters)))


def parse_braid(text: str, strands: int) -> BraidWord:
    """Parse whitespace-separated signed generator indices, e.g. "2 2 2"."""
    letters = []
    for tok in text.split():
        try:
            v = int(tok)
        except ValueError as exc:
            raise BraidSyntaxError(f"bad braid token {tok!r}") from exc
        if v == 0:
            raise BraidSyntaxError("generator index 0 is not allowed")
        letters.append((abs(v), 1 if v > 0 else -1))
    return BraidWord(strands, tuple(letters))


@dataclass(frozen=True)
class PlatBraid:
    """A braid on 2n strands together with plat-closure data.

    ``colors`` (if set) are the top-edge strand colors; adjacent top pairs
    must match since they meet in a cap.  ``orientations`` optionally fixes
    the direction (+1 down, -1 up) of each top strand; defaults follow the
    component traversal with the diagram composed downward.
    """

    word: BraidWord
    colors: tuple[Spin, ...] | None = None
    orientations: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.word.strands % 2:
            raise BraidSyntaxError("a plat needs an even number of strands")
        if self.colors is not None:
            if len(self.colors) != self.word.strands:
                raise ValueError("one color per strand required")
            for i in range(0, self.word.strands, 2):
                if self.colors[i] != self.colors[i + 1]:
                    raise ValueError(
                        f"top cap ({i + 1},{i + 2}) joins different colors")

    @property
    def n_pairs(self) -> int:
        return self.word.strands // 2

    def with_colors(self, colors) -> "PlatBraid":
        return PlatBraid(self.word, tuple(colors), self.orientations)


@dataclass
class LinkStructure:
    components: int
    strand_to_component: list[int]          # by top position
    crossings_between: list[list[int]]      # oriented signed counts, symmetric
    self_writhe: list[int]                  # oriented, per component
    orientation: list[int]                  # +1 down / -1 up per top position

    @property
    def oriented_writhe(self) -> int:
        total = sum(self.self_writhe)
        s = self.components
        for a in range(s):
            for b in range(a + 1, s):
                total += self.crossings_between[a][b]
        return total


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def plat_components(plat: PlatBraid) -> LinkStructure:
    """Trace caps, cups and the word permutation into link components, then
    scan the word for signed crossing counts."""
    m = plat.word.strands
    perm = plat.word.permutation()

    # nodes: 0..m-1 top positions, m..2m-1 bottom positions
    dsu = _DSU(2 * m)
    for i in range(0, m, 2):
        dsu.union(i, i + 1)             # top caps
        dsu.union(m + i, m + i + 1)     # bottom cups
    for s in range(m):
        dsu.union(s, m + perm[s])       # strands

    roots: dict[int, int] = {}
    strand_comp = []
    for i in range(m):
        r = dsu.find(i)
        if r not in roots:
            roots[r] = len(roots)
        strand_comp.append(roots[r])
    n_comp = len(roots)

    orientation = _orient(plat, strand_comp, perm)

    # scan the word, tracking which strand (and direction) sits where
    occupants = list(range(m))
    sw = [0] * n_comp
    between = [[0] * n_comp for _ in range(n_comp)]
    for idx, sign in plat.word.letters:
        a, b = idx - 1, idx
        sa, sb = occupants[a], occupants[b]
        da, db = orientation[sa], orientation[sb]
        eps = sign if da == db else -sign
        ca, cb = strand_comp[sa], strand_comp[sb]
        if ca == cb:
            sw[ca] += eps
        else:
            between[ca][cb] += eps
            between[cb][ca] += eps
        occupants[a], occupants[b] = occupants[b], occupants[a]

    return LinkStructure(n_comp, strand_comp, between, sw, orientation)


def _orient(plat: PlatBraid, strand_comp: list[int], perm: list[int]) -> list[int]:
    """Direction of each top strand: +1 downward, -1 upward."""
    m = plat.word.strands
    if plat.orientations is not None:
        if len(plat.orientations) != m:
            raise ValueError("one orientation per strand required")
        ori = list(plat.orientations)
        for i in range(0, m, 2):
            if ori[i] == ori[i + 1]:
                raise ValueError(
                    f"cap ({i + 1},{i + 2}) needs opposite orientations")
        return ori

    # walk each component; the traversal alternates direction at every
    # cap and cup, and keeps it along a strand
    ori = [0] * m
    inv = [0] * m
    for s in range(m):
        inv[perm[s]] = s
    cap_partner = lambda i: i + 1 if i % 2 == 0 else i - 1
    for start in range(m):
        if ori[start]:
            continue
        i, direction = start, 1      # enter going down
        while ori[i] == 0:
            ori[i] = direction
            if direction == 1:
                # down strand i to bottom perm[i], through the cup, back up
                j = cap_partner(perm[i])
                i, direction = inv[j], -1
            else:
                # up to the top, through the cap, back down
                i, direction = cap_partner(i), 1
    return ori


def writhe(plat: PlatBraid) -> int:
    """Diagram writhe in the braid-letter convention: the sum of letter
    signs.  This is the writhe entering the ambient-isotopy normalization
    (a positive letter inserted next to a cap multiplies the polynomial by
    exactly the twist phase the normalization divides out).  Linking
    numbers, by contrast, use the orientation-traced signs."""
    return sum(sign for _idx, sign in plat.word.letters)


def linking_number(plat: PlatBraid, s: int, t: int) -> int:
    """Half the signed count of crossings between components s and t."""
    if s == t:
        raise ValueError("self-linking is framing data, not a linking number")
    struct = plat_components(plat)
    raw = struct.crossings_between[s][t]
    if raw % 2:
        raise AssertionError("odd inter-component crossing count")
    return raw // 2


# -- bundled link catalog -----------------------------------------------------

_CATALOG = {
    # all entries sit on 4 strands so cap-count bookkeeping is uniform
    "unknot": {"strands": 4, "word": "1 2",
               "notes": "writhe-0 unknot on 4 strands"},
    "unknot_kinked": {
        "strands": 4, "word": "2",
        "notes": "unknot with a single positive kink (writhe +1)"},
    "hopf": {"strands": 4, "word": "2 2", "notes": "Hopf link"},
    "trefoil": {"strands": 4, "word": "2 2 2", "notes": "right trefoil"},
    "figure_eight": {
        "strands": 4, "word": "2 -1 2 2",
        "notes": "figure-eight knot (two-bridge 5/3 plat), verified "
                 "against the bracket oracle"},
}


def catalog() -> dict:
    return {name: dict(entry) for name, entry in _CATALOG.items()}


def catalog_plat(name: str, color: Spin | None = None) -> PlatBraid:
    try:
        entry = _CATALOG[name]
    except KeyError as exc:
        raise KeyError(f"unknown catalog link {name!r}; "
                       f"have {sorted(_CATALOG)}") from exc
    word = parse_braid(entry["word"], entry["strands"])
    plat = PlatBraid(word)
    if color is not None:
        plat = plat.with_colors((color,) * entry["strands"])
    return plat


def load_catalog_file(path: str | Path) -> dict:
    """Read a user catalog: {name: {strands, word, notes?}}."""
    data = json.loads(Path(path).read_text())
    out = {}
    for name, entry in data.items():
        word = parse_braid(entry["word"], int(entry["strands"]))
        out[name] = {"strands": word.strands, "word": entry["word"],
                     "notes": entry.get("notes", "")}
    return out
