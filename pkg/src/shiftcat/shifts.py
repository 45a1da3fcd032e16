"""Subshift presentations and the queries that live on them.

A presentation is either an SFT (finite list of forbidden words) or a
sofic labeled graph.  All queries run on the trimmed essential graph:
every vertex lies on a bi-infinite path, so finite path labels are
exactly the blocks of the subshift.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable

from .errors import EmptyShift, MismatchBug, NonIntegralCoefficient
from .words import Alphabet, Word, factors_up_to, least_rotation, primitive_root

Edge = tuple[Hashable, str, Hashable]


class LabeledGraph:
    """A finite directed graph with alphabet-labeled edges.

    Vertices are arbitrary hashables; parallel edges and loops allowed.
    Immutable by convention; adjacency maps are precomputed.
    """

    def __init__(self, vertices: Iterable[Hashable], edges: Iterable[Edge]):
        self.vertices: tuple[Hashable, ...] = tuple(vertices)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertices")
        self.edges: tuple[Edge, ...] = tuple(edges)
        for s, _, d in self.edges:
            if s not in vset or d not in vset:
                raise ValueError("edge endpoint not a vertex")
        self.out: dict[Hashable, list[Edge]] = {v: [] for v in self.vertices}
        self.inc: dict[Hashable, list[Edge]] = {v: [] for v in self.vertices}
        # (src, label) -> destinations, the step map used by every word walk
        self.step: dict[tuple[Hashable, str], list[Hashable]] = {}
        for e in self.edges:
            s, a, d = e
            self.out[s].append(e)
            self.inc[d].append(e)
            self.step.setdefault((s, a), []).append(d)

    def walk(self, starts: set[Hashable], letters: Iterable[str]) -> set[Hashable]:
        """Vertices reachable from `starts` along a path labeled by `letters`."""
        cur = set(starts)
        for a in letters:
            nxt: set[Hashable] = set()
            for v in cur:
                nxt.update(self.step.get((v, a), ()))
            if not nxt:
                return nxt
            cur = nxt
        return cur


def trim_graph(g: LabeledGraph) -> LabeledGraph:
    """Remove everything not on a bi-infinite path.

    Iterates deletion of vertices with no incoming or no outgoing edge.
    At the fixpoint every vertex has a predecessor and a successor, so in
    a finite graph it reaches a cycle in both directions, i.e. lies on a
    bi-infinite path; vertices on bi-infinite paths are never deleted.
    """
    alive = set(g.vertices)
    edges = list(g.edges)
    changed = True
    while changed:
        changed = False
        edges = [e for e in edges if e[0] in alive and e[2] in alive]
        has_out = {e[0] for e in edges}
        has_in = {e[2] for e in edges}
        for v in list(alive):
            if v not in has_out or v not in has_in:
                alive.discard(v)
                changed = True
    if not alive:
        raise EmptyShift("no vertex lies on a bi-infinite path")
    keep = [v for v in g.vertices if v in alive]
    kept_edges = [e for e in g.edges if e[0] in alive and e[2] in alive]
    return LabeledGraph(keep, kept_edges)


def de_bruijn_graph(alphabet: Alphabet, forbidden: Iterable[Word]) -> LabeledGraph:
    """Memory-m vertex graph of the SFT avoiding the given words (untrimmed).

    m = max forbidden length - 1, at least 1.  Vertices are the allowed
    m-words; u steps to (u.c)[1:] under letter c when u.c has no forbidden
    factor.
    """
    forb = [tuple(w.letters) for w in forbidden]
    if any(len(f) == 0 for f in forb):
        raise ValueError("forbidden words must be nonempty")
    m = max([len(f) - 1 for f in forb] + [1])

    def clean(seq: tuple[str, ...]) -> bool:
        for f in forb:
            k = len(f)
            if any(seq[i:i + k] == f for i in range(len(seq) - k + 1)):
                return False
        return True

    verts: list[tuple[str, ...]] = []
    stack: list[tuple[str, ...]] = [()]
    while stack:
        u = stack.pop()
        if len(u) == m:
            verts.append(u)
            continue
        for c in alphabet.symbols:
            if clean(u + (c,)):
                stack.append(u + (c,))
    verts.sort()
    edges: list[Edge] = []
    vset = set(verts)
    for u in verts:
        for c in alphabet.symbols:
            w = u + (c,)
            if clean(w) and w[1:] in vset:
                edges.append((u, c, w[1:]))
    return LabeledGraph(verts, edges)


@dataclass(frozen=True)
class PeriodicPoint:
    """The point shifted `shift_phase` steps into representative^∞."""

    representative: Word
    shift_phase: int

    def __post_init__(self) -> None:
        n = len(self.representative)
        if n == 0:
            raise ValueError("representative must be nonempty")
        root, e = primitive_root(self.representative)
        if e != 1:
            raise ValueError("representative must be primitive")
        if not 0 <= self.shift_phase < n:
            raise ValueError("shift_phase out of range")

    @staticmethod
    def from_word(w: Word, phase: int = 0) -> "PeriodicPoint":
        root, _ = primitive_root(w)
        return PeriodicPoint(root, phase % len(root))

    def normalized(self) -> "PeriodicPoint":
        """Rotate the representative to its least conjugate, keeping the point."""
        rep = self.representative
        best = least_rotation(rep)
        for r in range(len(rep)):
            if rep.letters[r:] + rep.letters[:r] == best.letters:
                return PeriodicPoint(best, (self.shift_phase - r) % len(rep))
        raise AssertionError("least rotation is always a rotation")


class ShiftPresentation:
    """An SFT or sofic presentation of a subshift."""

    def __init__(self, alphabet: Alphabet, kind: str,
                 forbidden: Iterable[Word] = (),
                 vertices: Iterable[Hashable] = (),
                 edges: Iterable[Edge] = ()):
        if kind not in ("sft", "sofic"):
            raise ValueError("kind must be 'sft' or 'sofic'")
        self.alphabet = alphabet
        self.kind = kind
        self.forbidden: tuple[Word, ...] = tuple(forbidden)
        for w in self.forbidden:
            if len(w) == 0:
                raise ValueError("forbidden words must be nonempty")
            if w.alphabet != alphabet:
                raise ValueError("forbidden word over wrong alphabet")
        if kind == "sofic":
            self._raw = LabeledGraph(vertices, edges)
            for _, a, _ in self._raw.edges:
                if a not in alphabet:
                    raise ValueError(f"edge label {a!r} not in alphabet")
        else:
            self._raw = None
        self._graph: LabeledGraph | None = None
        self._blocks: dict[int, set[Word]] = {}

    # -- constructors -------------------------------------------------

    @staticmethod
    def sft(alphabet: Alphabet, forbidden: Iterable[Word | str]) -> "ShiftPresentation":
        words = [w if isinstance(w, Word) else Word.from_str(alphabet, w)
                 for w in forbidden]
        return ShiftPresentation(alphabet, "sft", forbidden=words)

    @staticmethod
    def sofic(alphabet: Alphabet, vertices: Iterable[Hashable],
              edges: Iterable[Edge]) -> "ShiftPresentation":
        return ShiftPresentation(alphabet, "sofic", vertices=vertices, edges=edges)

    @staticmethod
    def full_shift(alphabet: Alphabet) -> "ShiftPresentation":
        return ShiftPresentation(alphabet, "sft")

    @staticmethod
    def orbit(v: Word) -> "ShiftPresentation":
        """The finite orbit shift of v^∞, presented by a labeled cycle."""
        n = len(v)
        if n == 0:
            raise ValueError("orbit of the empty word is undefined")
        verts = [str(i) for i in range(n)]
        edges = [(str(i), v.letters[i], str((i + 1) % n)) for i in range(n)]
        return ShiftPresentation.sofic(v.alphabet, verts, edges)

    # -- essential graph ----------------------------------------------

    def graph(self) -> LabeledGraph:
        """The trimmed essential graph; raises EmptyShift if nothing survives."""
        if self._graph is None:
            raw = self._raw if self._raw is not None else \
                de_bruijn_graph(self.alphabet, self.forbidden)
            self._graph = trim_graph(raw)
        return self._graph

    def word(self, letters: Iterable[str] | str) -> Word:
        if isinstance(letters, str):
            return Word.from_str(self.alphabet, letters)
        return Word(self.alphabet, tuple(letters))

    # -- serialization ------------------------------------------------

    @staticmethod
    def from_json(data: dict | str) -> "ShiftPresentation":
        if isinstance(data, str):
            data = json.loads(data)
        alphabet = Alphabet(tuple(data["alphabet"]))
        if data["kind"] == "sft":
            forb = [w if isinstance(w, Word) else
                    (Word.from_str(alphabet, w) if isinstance(w, str)
                     else Word(alphabet, tuple(w)))
                    for w in data.get("forbidden", [])]
            return ShiftPresentation(alphabet, "sft", forbidden=forb)
        if data["kind"] == "sofic":
            edges = [(s, a, d) for s, a, d in data["edges"]]
            return ShiftPresentation(alphabet, "sofic",
                                     vertices=data["vertices"], edges=edges)
        raise ValueError(f"unknown kind {data['kind']!r}")

    def to_json(self) -> dict:
        if self.kind == "sft":
            forb = ["".join(w.letters) if self.alphabet.is_single_char()
                    else list(w.letters) for w in self.forbidden]
            return {"alphabet": list(self.alphabet.symbols), "kind": "sft",
                    "forbidden": forb}
        g = self._raw
        return {"alphabet": list(self.alphabet.symbols), "kind": "sofic",
                "vertices": [str(v) for v in g.vertices],
                "edges": [[str(s), a, str(d)] for s, a, d in g.edges]}

    def to_dot(self) -> str:
        g = self.graph()
        names = {v: _vertex_name(v) for v in g.vertices}
        lines = ["digraph shift {"]
        for v in sorted(g.vertices, key=lambda v: names[v]):
            lines.append(f'  "{names[v]}";')
        for s, a, d in sorted(g.edges, key=lambda e: (names[e[0]], e[1], names[e[2]])):
            lines.append(f'  "{names[s]}" -> "{names[d]}" [label="{a}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _vertex_name(v: Hashable) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, tuple):
        return "|".join(_vertex_name(x) for x in v)
    return str(v)


def trim(x: ShiftPresentation) -> ShiftPresentation:
    """The essential sofic presentation of x (SFTs pass through their
    memory graph).  Raises EmptyShift when the presented subshift is empty."""
    g = x.graph()
    names = {v: _vertex_name(v) for v in g.vertices}
    if len(set(names.values())) != len(names):
        names = {v: str(i) for i, v in enumerate(g.vertices)}
    out = ShiftPresentation.sofic(
        x.alphabet,
        [names[v] for v in g.vertices],
        [(names[s], a, names[d]) for s, a, d in g.edges])
    return out


def blocks(x: ShiftPresentation, n: int) -> set[Word]:
    """All blocks of x of length between 1 and n."""
    if n < 1:
        raise ValueError("n must be positive")
    have = max(x._blocks) if x._blocks else 0
    if have >= n:
        return {w for m in range(1, n + 1) for w in x._blocks[m]}
    g = x.graph()
    if have == 0:
        frontier: dict[tuple[str, ...], set[Hashable]] = {(): set(g.vertices)}
        start = 1
    else:
        frontier = {w.letters: g.walk(set(g.vertices), w.letters)
                    for w in x._blocks[have]}
        start = have + 1
    for m in range(start, n + 1):
        nxt: dict[tuple[str, ...], set[Hashable]] = {}
        for seq, ends in frontier.items():
            for v in ends:
                for (_, a, d) in g.out[v]:
                    nxt.setdefault(seq + (a,), set()).add(d)
        x._blocks[m] = {Word(x.alphabet, seq) for seq in nxt}
        frontier = nxt
    return {w for m in range(1, n + 1) for w in x._blocks[m]}


def is_block(x: ShiftPresentation, w: Word) -> bool:
    """True iff w labels a path in the trimmed presentation."""
    if len(w) == 0:
        raise ValueError("blocks are nonempty")
    g = x.graph()
    return bool(g.walk(set(g.vertices), w.letters))


def subset_dfa(g: LabeledGraph, alphabet: Alphabet):
    """Determinize the path-label NFA whose start set is all vertices.

    Returns (states, trans) with states[0] = full vertex set, states as
    frozensets in BFS discovery order, the empty set as explicit sink,
    and trans[(i, a)] = j.  A word is a block iff it walks 0 to a
    nonempty state.
    """
    initial = frozenset(g.vertices)
    states: list[frozenset] = [initial]
    index = {initial: 0}
    trans: dict[tuple[int, str], int] = {}
    queue = [initial]
    while queue:
        cur = queue.pop(0)
        i = index[cur]
        for a in alphabet.symbols:
            nxt = frozenset(g.walk(set(cur), (a,)))
            if nxt not in index:
                index[nxt] = len(states)
                states.append(nxt)
                queue.append(nxt)
            trans[(i, a)] = index[nxt]
    return states, trans


def is_irreducible(x: ShiftPresentation) -> bool:
    """Whether x admits a strongly connected presentation.

    Decided by the word criterion (for all blocks u, v some u·w·v is a
    block), made finite on the subset automaton: reading u from the full
    vertex set lands in a state T, and some u·w·v is a block iff v is
    readable from the union W of all subsets reachable from T.  Since
    readable-from-W languages are monotone in W, the criterion reduces
    to: every such union W reads the whole language, checked by a
    product walk hunting for a word readable from all vertices but not
    from W.  A direct witness search on short blocks cross-checks.
    """
    g = x.graph()
    states, trans = subset_dfa(g, x.alphabet)
    syms = x.alphabet.symbols

    def reach(i: int) -> set[int]:
        seen = {i}
        stack = [i]
        while stack:
            j = stack.pop()
            for a in syms:
                k = trans[(j, a)]
                if states[k] and k not in seen:
                    seen.add(k)
                    stack.append(k)
        return seen

    def reads_everything(wset: frozenset) -> bool:
        # hunt for a word readable from all vertices but not from wset
        start = (frozenset(g.vertices), wset)
        seen = {start}
        stack = [start]
        while stack:
            full, part = stack.pop()
            for a in syms:
                nf = frozenset(g.walk(set(full), (a,)))
                np = frozenset(g.walk(set(part), (a,)))
                if not nf:
                    continue
                if not np:
                    return False
                if (nf, np) not in seen:
                    seen.add((nf, np))
                    stack.append((nf, np))
        return True

    verdict = True
    for i, st in enumerate(states):
        if not st or i == 0:
            continue
        union: set[Hashable] = set()
        for j in reach(i):
            union.update(states[j])
        if not reads_everything(frozenset(union)):
            verdict = False
            break

    _crosscheck_irreducible(x, verdict)
    return verdict


def _crosscheck_irreducible(x: ShiftPresentation, verdict: bool) -> None:
    """Witness search for u·w·v on short blocks; disagreement is a bug.

    Only one direction is conclusive: if the verdict is irreducible,
    every short pair must have a witness.  A reducible shift may still
    connect all its short blocks.
    """
    g = x.graph()
    states, trans = subset_dfa(g, x.alphabet)
    index = {s: i for i, s in enumerate(states)}
    short = sorted(blocks(x, min(4, len(g.vertices) + 2)), key=Word.lex_key)
    for u in short:
        t0 = index[frozenset(g.walk(set(g.vertices), u.letters))]
        seen = {t0}
        stack = [t0]
        while stack:
            j = stack.pop()
            for a in x.alphabet.symbols:
                k = trans[(j, a)]
                if states[k] and k not in seen:
                    seen.add(k)
                    stack.append(k)
        for v in short:
            found = any(g.walk(set(states[j]), v.letters) for j in seen)
            if verdict and not found:
                raise MismatchBug(
                    f"irreducible verdict but no w with {u}·w·{v} a block")


def is_periodic_point(x: ShiftPresentation, w: Word) -> bool:
    """True iff w^∞ lies in x.

    Tests whether w^(V+1) labels a path, V = vertex count: the V+1
    vertices sitting at the copy boundaries of such a path must repeat,
    giving a cycle labeled by a power of w, hence w^∞ in x.  Conversely
    every power of w is a block when w^∞ is in x.
    """
    if len(w) == 0:
        raise ValueError("w must be nonempty")
    g = x.graph()
    return is_block(x, w ** (len(g.vertices) + 1))


def periodic_counts(x: ShiftPresentation, n_max: int) -> tuple[list[int], list[int]]:
    """p(n) = number of points of period dividing n; q(n) = number with
    least period exactly n (equivalently, primitive words w of length n
    with w^∞ in x).  The Möbius relation between the two is recomputed
    both ways; disagreement raises MismatchBug."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    blocks(x, n_max)
    p: list[int] = []
    q: list[int] = []
    for n in range(1, n_max + 1):
        per = [w for w in x._blocks.get(n, set()) if is_periodic_point(x, w)]
        p.append(len(per))
        q.append(sum(1 for w in per if primitive_root(w)[1] == 1))
    for n in range(1, n_max + 1):
        total = 0
        for d in range(1, n + 1):
            if n % d == 0:
                total += _mobius(n // d) * p[d - 1]
        if total != q[n - 1]:
            raise MismatchBug(
                f"Möbius inversion gives q({n}) = {total}, direct count {q[n - 1]}")
    return p, q


def _mobius(n: int) -> int:
    m = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            m = -m
        d += 1
    if n > 1:
        m = -m
    return m


@dataclass(frozen=True)
class ZetaSeries:
    """Truncated zeta series with its periodic-count companions."""

    order: int
    coefficients: tuple[int, ...]
    p: tuple[int, ...]
    q: tuple[int, ...]

    def __str__(self) -> str:
        terms = ["1"]
        for n in range(1, self.order + 1):
            c = self.coefficients[n]
            if c:
                terms.append(f"{c}t^{n}" if n > 1 else f"{c}t")
        return " + ".join(terms)


def zeta(x: ShiftPresentation, order: int) -> ZetaSeries:
    """exp(Σ p(n)/n · tⁿ) truncated at the given order, in exact rationals.

    Uses g₀ = 1, n·gₙ = Σ_{k≤n} p(k)·g_{n−k} (differentiate g = exp f).
    Coefficients must come out nonnegative integers; anything else means
    the periodic counts are wrong and raises NonIntegralCoefficient.
    """
    if order < 1:
        raise ValueError("order must be positive")
    p, q = periodic_counts(x, order)
    g: list[Fraction] = [Fraction(1)]
    for n in range(1, order + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            acc += p[k - 1] * g[n - k]
        g.append(acc / n)
    coeffs: list[int] = []
    for n, c in enumerate(g):
        if c.denominator != 1 or c < 0:
            raise NonIntegralCoefficient(f"coefficient of t^{n} is {c}")
        coeffs.append(int(c))
    return ZetaSeries(order, tuple(coeffs), tuple(p), tuple(q))


def mirage_membership_k(x: ShiftPresentation, w: Word, k: int) -> bool:
    """True iff every factor of w of length ≤ k is a block of x."""
    if len(w) == 0:
        raise ValueError("w must be nonempty")
    if k < 1:
        raise ValueError("k must be positive")
    kk = min(k, len(w))
    allowed = blocks(x, kk)
    return all(f in allowed for f in factors_up_to(w, kk))
