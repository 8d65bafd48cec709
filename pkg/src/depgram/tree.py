"""Nuclei, connexions and dependency trees.

A tree is a set of nuclei (each owning one or more, possibly
discontiguous, word segments) joined by labelled connexions from regent
to dependent.  The virtual root has id 0; the top nucleus is attached to
it with the function ``main``.

Construction through :func:`build_tree` validates the structural axioms;
:class:`DependencyTree` itself accepts arbitrary (possibly broken)
structures so that :func:`validate_axioms` can diagnose them.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

ROOT = 0

DEFAULT_FUNCTIONS = (
    "main", "subj", "obj", "v-ch", "det", "loc", "tmp",
    "pcomp", "pm", "oc", "cc", "pnct",
)


class TreeError(ValueError):
    """Base class for structural errors in dependency trees."""

    def __init__(self, message: str, ids: tuple = ()):
        super().__init__(message)
        self.ids = ids


class MultipleHeads(TreeError):
    pass


class MissingRegent(TreeError):
    pass


class Cycle(TreeError):
    pass


class NoRoot(TreeError):
    pass


class MultipleRoots(TreeError):
    pass


class IsolatedNode(TreeError):
    pass


class MultipleDependency(TreeError):
    pass


class SegmentOverlap(TreeError):
    pass


class DanglingReference(TreeError):
    pass


class InvalidNucleus(TreeError):
    pass


class InvalidFunction(TreeError):
    pass


class UnknownId(KeyError):
    pass


class FunctionInventory:
    """Closed set of syntactic function labels.

    ``families`` are label prefixes accepted wholesale (``dep:`` is used for
    the synthesized labels of grammar-derived trees).  Exactly one label is
    flagged as a non-dependency relation.
    """

    def __init__(self, labels: Iterable[str] = DEFAULT_FUNCTIONS,
                 non_dependency: str = "cc", families: Iterable[str] = ("dep:",)):
        self.labels = frozenset(labels)
        self.families = tuple(families)
        if non_dependency not in self.labels:
            raise ValueError(f"non-dependency label {non_dependency!r} not in inventory")
        self.non_dependency = non_dependency

    def __contains__(self, label: str) -> bool:
        return label in self.labels or any(label.startswith(p) for p in self.families)

    def extend(self, labels: Iterable[str]) -> "FunctionInventory":
        return FunctionInventory(self.labels | set(labels), self.non_dependency, self.families)

    @classmethod
    def from_file(cls, path: str | Path) -> "FunctionInventory":
        """Load labels from a file, one per line; ``#`` starts a comment.

        A line ``family <prefix>`` declares an open label family.
        """
        labels, families = [], []
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("family "):
                families.append(line.split(None, 1)[1])
            else:
                labels.append(line)
        return cls(labels, families=families)


DEFAULT_INVENTORY = FunctionInventory()


@dataclass(frozen=True, order=True)
class WordSegment:
    """A piece of the speech chain: a token, or a character span of one."""

    surface: str
    position: int
    sub_span: tuple[int, int] | None = None

    def overlaps(self, other: "WordSegment") -> bool:
        if self.position != other.position:
            return False
        if self.sub_span is None or other.sub_span is None:
            return True
        (a, b), (c, d) = self.sub_span, other.sub_span
        return a < d and c < b

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.position, self.sub_span[0] if self.sub_span else 0)


@dataclass(frozen=True)
class Nucleus:
    id: int
    segments: tuple[WordSegment, ...]
    base_form: str = ""
    morph_tags: tuple[str, ...] = ()
    attributes: Mapping[str, str] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "morph_tags", tuple(self.morph_tags))
        object.__setattr__(self, "attributes", dict(self.attributes))

    @property
    def anchor(self) -> tuple[int, int]:
        """Linear position used for order comparisons (first segment)."""
        return min(s.sort_key for s in self.segments)

    @property
    def surface(self) -> str:
        return " ".join(s.surface for s in self.segments)

    def replace(self, **changes) -> "Nucleus":
        data = dict(id=self.id, segments=self.segments, base_form=self.base_form,
                    morph_tags=self.morph_tags, attributes=dict(self.attributes))
        data.update(changes)
        return Nucleus(**data)


@dataclass(frozen=True)
class Connexion:
    regent: int
    dependent: int
    function: str

    @property
    def is_root(self) -> bool:
        return self.regent == ROOT


@dataclass(frozen=True)
class Violation:
    kind: str
    ids: tuple = ()
    message: str = ""

    def to_error(self) -> TreeError:
        cls = _ERRORS.get(self.kind, TreeError)
        return cls(self.message or f"{self.kind}{self.ids}", self.ids)


_ERRORS = {
    "MultipleHeads": MultipleHeads,
    "MissingRegent": MissingRegent,
    "Cycle": Cycle,
    "NoRoot": NoRoot,
    "MultipleRoots": MultipleRoots,
    "IsolatedNode": IsolatedNode,
    "MultipleDependency": MultipleDependency,
    "SegmentOverlap": SegmentOverlap,
    "DanglingReference": DanglingReference,
    "InvalidNucleus": InvalidNucleus,
    "InvalidFunction": InvalidFunction,
}


class DependencyTree:
    """Nuclei + connexions over an ordered token list.

    Treated as an immutable value; transformations return new trees.
    """

    def __init__(self, sentence: Sequence[str], nuclei: Iterable[Nucleus] | Mapping[int, Nucleus],
                 connexions: Iterable[Connexion], inventory: FunctionInventory = DEFAULT_INVENTORY,
                 gap_frames: Iterable = (), flags: Iterable[str] = ()):
        if isinstance(nuclei, Mapping):
            nuclei = nuclei.values()
        self.sentence = tuple(sentence)
        self.nuclei = {n.id: n for n in sorted(nuclei, key=lambda n: n.id)}
        self.connexions = tuple(connexions)
        self.inventory = inventory
        self.gap_frames = tuple(gap_frames)
        self.flags = frozenset(flags)
        self._children = defaultdict(list)
        self._regents = defaultdict(list)
        for c in self.connexions:
            self._children[c.regent].append(c)
            self._regents[c.dependent].append(c)

    def __repr__(self):
        arcs = ", ".join(f"{c.regent}->{c.dependent}:{c.function}" for c in self.connexions)
        return f"DependencyTree({' '.join(self.sentence)!r}, [{arcs}])"

    def __eq__(self, other):
        if not isinstance(other, DependencyTree):
            return NotImplemented
        return (self.sentence == other.sentence and self.nuclei == other.nuclei
                and set(self.connexions) == set(other.connexions)
                and self.gap_frames == other.gap_frames)

    __hash__ = None

    def __len__(self):
        return len(self.nuclei)

    def __iter__(self) -> Iterator[Nucleus]:
        return iter(self.ordered())

    def ordered(self) -> list[Nucleus]:
        """Nuclei in linear (anchor) order."""
        return sorted(self.nuclei.values(), key=lambda n: (n.anchor, n.id))

    def _check(self, id: int):
        if id != ROOT and id not in self.nuclei:
            raise UnknownId(id)

    @property
    def root(self) -> int:
        """Id of the top nucleus (the dependent of the root connexion)."""
        tops = [c.dependent for c in self._children[ROOT]]
        if len(tops) != 1:
            raise NoRoot("no unique root") if not tops else MultipleRoots("several roots", tuple(tops))
        return tops[0]

    def connexion_to(self, id: int) -> Connexion:
        self._check(id)
        arcs = self._regents[id]
        if len(arcs) != 1:
            raise TreeError(f"nucleus {id} has {len(arcs)} regents", (id,))
        return arcs[0]

    def regent_of(self, id: int) -> int:
        return self.connexion_to(id).regent

    def function_of(self, id: int) -> str:
        return self.connexion_to(id).function

    def dependents(self, id: int) -> list[Nucleus]:
        """Dependents of ``id`` in linear order."""
        self._check(id)
        deps = [self.nuclei[c.dependent] for c in self._children[id] if c.dependent in self.nuclei]
        return sorted(deps, key=lambda n: (n.anchor, n.id))

    def outgoing(self, id: int) -> list[Connexion]:
        self._check(id)
        arcs = [c for c in self._children[id] if c.dependent in self.nuclei]
        return sorted(arcs, key=lambda c: (self.nuclei[c.dependent].anchor, c.dependent))

    def subtree(self, id: int) -> frozenset[int]:
        """Ids of ``id`` and everything it (transitively) governs."""
        self._check(id)
        seen = set() if id == ROOT else {id}
        stack = [id]
        while stack:
            for c in self._children[stack.pop()]:
                if c.dependent not in seen:
                    seen.add(c.dependent)
                    stack.append(c.dependent)
        return frozenset(seen)

    def restrict(self, id: int) -> "DependencyTree":
        """The subtree headed by ``id`` as a tree of its own."""
        keep = self.subtree(id)
        arcs = [Connexion(ROOT, id, "main")]
        arcs += [c for c in self.connexions if c.regent in keep and c.dependent in keep]
        return DependencyTree(self.sentence, [self.nuclei[i] for i in keep], arcs, self.inventory)

    def replace(self, **changes) -> "DependencyTree":
        data = dict(sentence=self.sentence, nuclei=self.nuclei, connexions=self.connexions,
                    inventory=self.inventory, gap_frames=self.gap_frames, flags=self.flags)
        data.update(changes)
        return DependencyTree(**data)


def validate_axioms(tree: DependencyTree) -> list[Violation]:
    """Diagnose every structural axiom violation; empty list means a valid tree."""
    report: list[Violation] = []
    ids = set(tree.nuclei)

    for n in tree.nuclei.values():
        if n.id <= 0:
            report.append(Violation("InvalidNucleus", (n.id,), f"id {n.id} must be positive"))
        if not n.segments:
            report.append(Violation("InvalidNucleus", (n.id,), f"nucleus {n.id} has no segments"))

    known = ids | {ROOT}
    arcs = []
    for c in tree.connexions:
        bad = [x for x in (c.regent, c.dependent) if x not in known]
        if c.dependent == ROOT:
            bad.append(ROOT)
        if bad:
            report.append(Violation("DanglingReference", tuple(bad), f"connexion {c} refers to {bad}"))
            continue
        if c.function not in tree.inventory:
            report.append(Violation("InvalidFunction", (c.dependent,), f"unknown function {c.function!r}"))
        elif (c.function == "main") != (c.regent == ROOT):
            report.append(Violation("InvalidFunction", (c.dependent,),
                                    f"function main must mark exactly the root connexion: {c}"))
        arcs.append(c)

    pairs = Counter((c.regent, c.dependent) for c in arcs)
    for (r, d), k in sorted(pairs.items()):
        if k > 1:
            report.append(Violation("MultipleDependency", (r, d), f"{k} connexions {r}->{d}"))

    regents = defaultdict(set)
    children = defaultdict(set)
    for c in arcs:
        regents[c.dependent].add(c.regent)
        children[c.regent].add(c.dependent)
    for cycle in _cycles(ids, children):
        report.append(Violation("Cycle", tuple(cycle), f"cyclic dependency {cycle}"))

    tops = sorted(children[ROOT])
    if not tops:
        report.append(Violation("NoRoot", (), "no nucleus depends on the virtual root"))
    elif len(tops) > 1:
        report.append(Violation("MultipleRoots", tuple(tops), f"several top nuclei {tops}"))

    for i in sorted(ids):
        if len(regents[i]) > 1:
            report.append(Violation("MultipleHeads", (i,), f"nucleus {i} has regents {sorted(regents[i])}"))
        elif not regents[i]:
            if children[i]:
                report.append(Violation("MissingRegent", (i,), f"nucleus {i} has no regent"))
            else:
                report.append(Violation("IsolatedNode", (i,), f"nucleus {i} is isolated"))

    seen: dict[int, list[tuple[WordSegment, int]]] = defaultdict(list)
    for n in tree.nuclei.values():
        for s in n.segments:
            for other, owner in seen[s.position]:
                if s.overlaps(other):
                    report.append(Violation("SegmentOverlap", (s.position,),
                                            f"position {s.position} covered by {owner} and {n.id}"))
            seen[s.position].append((s, n.id))
        if len(set(n.segments)) != len(n.segments):
            report.append(Violation("SegmentOverlap", (n.segments[0].position,),
                                    f"nucleus {n.id} repeats a segment"))
    return report


def _cycles(ids, children) -> list[list[int]]:
    """Elementary cycles found by DFS, each reported once (rotated to min id)."""
    found = []
    color = dict.fromkeys(ids, 0)

    def visit(start):
        stack = [(start, iter(sorted(children[start])))]
        path = [start]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                path.pop()
                color[node] = 2
                continue
            if nxt not in color:
                continue
            if color[nxt] == 1:
                cyc = path[path.index(nxt):]
                k = cyc.index(min(cyc))
                found.append(cyc[k:] + cyc[:k])
            elif color[nxt] == 0:
                color[nxt] = 1
                path.append(nxt)
                stack.append((nxt, iter(sorted(children[nxt]))))

    for i in sorted(ids):
        if color[i] == 0:
            visit(i)
    return found


def build_tree(sentence: Sequence[str], nuclei: Iterable[Nucleus], connexions: Iterable[Connexion],
               inventory: FunctionInventory = DEFAULT_INVENTORY) -> DependencyTree:
    """Build a tree and raise the first axiom violation, if any."""
    nuclei = list(nuclei)
    dup = [i for i, k in Counter(n.id for n in nuclei).items() if k > 1]
    if dup:
        raise InvalidNucleus(f"duplicate nucleus ids {sorted(dup)}", tuple(sorted(dup)))
    tree = DependencyTree(sentence, nuclei, connexions, inventory)
    report = validate_axioms(tree)
    if report:
        raise report[0].to_error()
    return tree


def simple_tree(words: Sequence[str], heads: Sequence[int], functions: Sequence[str] | None = None,
                inventory: FunctionInventory = DEFAULT_INVENTORY) -> DependencyTree:
    """One-nucleus-per-word tree from a CoNLL-style head vector (1-based, 0 = root).

    Not validated; pass the result to :func:`validate_axioms` or rebuild via
    :func:`build_tree` when validity matters.
    """
    nuclei = [Nucleus(i + 1, (WordSegment(w, i),), base_form=w.lower()) for i, w in enumerate(words)]
    if functions is None:
        functions = ["main" if h == ROOT else "dep:x" for h in heads]
    arcs = [Connexion(h, i + 1, f) for i, (h, f) in enumerate(zip(heads, functions))]
    return DependencyTree(words, nuclei, arcs, inventory)


def canonical_shape(tree: DependencyTree) -> tuple:
    """Structure up to renaming of ids and token positions.

    Each nucleus, in linear order, contributes its base form, the rank of
    its regent (0 for the virtual root) and its function.
    """
    order = tree.ordered()
    rank = {n.id: k + 1 for k, n in enumerate(order)}
    rank[ROOT] = 0
    return tuple((n.base_form, rank[tree.regent_of(n.id)], tree.function_of(n.id)) for n in order)


class Capped(list):
    """A result list that records whether more results were cut off by a cap."""

    def __init__(self, items: Iterable = (), cap_exceeded: bool = False):
        super().__init__(items)
        self.cap_exceeded = cap_exceeded

    def __repr__(self):
        return f"Capped({list.__repr__(self)}, cap_exceeded={self.cap_exceeded})"


def take(items: Iterable, cap: int | None) -> Capped:
    if cap is None:
        return Capped(items)
    if cap < 1:
        raise ValueError("cap must be positive")
    out = []
    for x in items:
        if len(out) == cap:
            return Capped(out, True)
        out.append(x)
    return Capped(out)
