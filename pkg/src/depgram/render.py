"""Text diagrams of dependency trees: ASCII arcs over a baseline, and DOT."""
from __future__ import annotations

from .projectivity import crossing_arcs
from .tree import ROOT, Connexion, DependencyTree

FORMATS = ("ascii", "dot")


def _columns(tree: DependencyTree) -> tuple[str, dict[int, int]]:
    starts, col = [], 0
    for tok in tree.sentence:
        starts.append(col)
        col += len(tok) + 1
    baseline = " ".join(tree.sentence)
    where = {}
    for n in tree.nuclei.values():
        pos, offset = n.anchor
        tok = tree.sentence[pos] if pos < len(tree.sentence) else ""
        # centre of the anchoring token, or the start of a sub-span
        where[n.id] = starts[pos] + (offset if offset else max(len(tok) - 1, 0) // 2)
    return baseline, where


def _arc_name(tree: DependencyTree, c: Connexion) -> str:
    regent = "ROOT" if c.regent == ROOT else tree.nuclei[c.regent].surface
    return f"{c.function}({regent}->{tree.nuclei[c.dependent].surface})"


def render_ascii(tree: DependencyTree) -> str:
    """Arcs drawn above the words, shortest lowest.

    Each arc is a horizontal bar carrying its label with legs down to its
    two nuclei; the dependent's leg ends in ``v``.  The root arc is a
    single leg topped by its label.  Where a leg passes through another
    arc's bar the cell shows ``#``, and every crossing pair is listed
    under the baseline.
    """
    baseline, col = _columns(tree)
    if len(tree) == 1:
        return baseline + "\n"
    width = len(baseline)
    arcs = [c for c in tree.connexions if c.regent != ROOT]
    arcs.sort(key=lambda c: (abs(col[c.regent] - col[c.dependent]), col[c.dependent]))

    rows: list[list[tuple[int, int]]] = []  # occupied bar intervals per row, bottom up
    placed = []
    for c in arcs:
        lo, hi = sorted((col[c.regent], col[c.dependent]))
        label = c.function
        hi_text = max(hi, lo + len(label) + 1)
        for r, taken in enumerate(rows):
            if all(hi_text < a - 1 or lo > b + 1 for a, b in taken):
                break
        else:
            rows.append([])
            r = len(rows) - 1
        rows[r].append((lo, hi_text))
        placed.append((r, lo, hi, c))
        width = max(width, hi_text + 1)

    root = tree.root
    # row 0 holds only legs and arrow heads; bars start at row 1, and the
    # top row carries the root label
    placed = [(r + 1, lo, hi, c) for r, lo, hi, c in placed]
    height = len(rows) + 2
    width = max(width, col[root] + len(tree.function_of(root)) + 1)
    grid = [[" "] * width for _ in range(height)]  # grid[0] is just above the baseline

    def put(r, x, ch):
        cur = grid[r][x]
        if ch == "|" and cur in "-" or ch == "-" and cur == "|":
            grid[r][x] = "#"
        elif cur == " ":
            grid[r][x] = ch

    for r, lo, hi, c in placed:
        for x in range(lo, hi + 1):
            put(r, x, "-")
        grid[r][lo] = grid[r][hi] = "+"
        text = c.function
        for k, ch in enumerate(text):
            x = lo + 1 + k
            if x < hi or lo + 1 + len(text) > hi:
                grid[r][x] = ch
    for r, lo, hi, c in placed:
        for x in (lo, hi):
            for below in range(r):
                put(below, x, "|")
        grid[0][col[c.dependent]] = "v"
    # root leg, from the top row down
    top = height - 1
    for k, ch in enumerate(tree.function_of(root)):
        grid[top][col[root] + k] = ch
    for r in range(top):
        put(r, col[root], "|")
    if grid[0][col[root]] == "|":
        grid[0][col[root]] = "v"

    lines = ["".join(row).rstrip() for row in reversed(grid)]
    lines.append(baseline)
    for pair in crossing_arcs(tree):
        lines.append(f"crossing: {_arc_name(tree, pair.arc1)} x {_arc_name(tree, pair.arc2)}")
    return "\n".join(lines) + "\n"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(tree: DependencyTree, name: str = "tree") -> str:
    """A DOT digraph; cc edges are dashed since they are not dependencies."""
    cc = tree.inventory.non_dependency
    out = [f"digraph {name} {{", "  node [shape=box];", "  n0 [label=\"ROOT\", shape=plaintext];"]
    for n in tree.ordered():
        out.append(f"  n{n.id} [label={_quote(n.surface)}];")
    arcs = sorted(tree.connexions, key=lambda c: (c.regent != ROOT, tree.nuclei[c.dependent].anchor))
    for c in arcs:
        style = ", style=dashed" if c.function == cc else ""
        out.append(f"  n{c.regent} -> n{c.dependent} [label={_quote(c.function)}{style}];")
    out.append("}")
    return "\n".join(out) + "\n"


def render(tree: DependencyTree, format: str = "ascii") -> str:
    if format == "ascii":
        return render_ascii(tree)
    if format == "dot":
        return render_dot(tree)
    raise ValueError(f"unknown render format {format!r}; expected one of {FORMATS}")
