"""Minimality bookkeeping for discovered dependencies.

All accepted DDs sharing one rhs differential function live in one prefix
tree: the root carries the rhs, every other node one single-attribute lhs
term, children sorted by attribute then interval.  A root-to-leaf path reads
as one dependency.  The tree answers two questions:

* is a new DD already implied by an accepted one (lhs extension, or an lhs
  whose intervals are contained in an accepted path's)?
* can sibling nodes with adjacent intervals and identical subtrees be merged
  into one node covering the combined interval?

Merging keeps the emitted set small: runs of base intervals that behave the
same collapse into a single wider lhs interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .datamodel import (
    DifferentialDependency,
    DifferentialFunction,
    Interval,
    df_subsumes,
    interval_adjacent,
    interval_combine,
)

# A path is the lhs of a DD flattened to ((attr, interval), ...), attr-sorted.
Path = tuple[tuple[int, Interval], ...]


@dataclass
class _Node:
    attr: int
    interval: Interval
    children: list["_Node"] = field(default_factory=list)

    def sort_key(self):
        return (self.attr, self.interval.lo, self.interval.hi)

    def signature(self) -> tuple:
        """Canonical form of the subtree rooted here, used for equality."""
        return (
            self.attr,
            self.interval.lo,
            self.interval.hi,
            tuple(c.signature() for c in sorted(self.children, key=_Node.sort_key)),
        )

    def child_signature(self) -> tuple:
        return tuple(c.signature() for c in sorted(self.children, key=_Node.sort_key))


@dataclass
class DDTree:
    """Prefix tree of lhs paths for one rhs differential function."""

    rhs_attr: int
    rhs_interval: Interval
    roots: list[_Node] = field(default_factory=list)

    def paths(self) -> list[Path]:
        """All root-to-leaf paths in canonical order."""
        out: list[Path] = []

        def walk(node: _Node, prefix: Path):
            prefix = prefix + ((node.attr, node.interval),)
            if not node.children:
                out.append(prefix)
                return
            for child in sorted(node.children, key=_Node.sort_key):
                walk(child, prefix)

        for root in sorted(self.roots, key=_Node.sort_key):
            walk(root, ())
        return out

    def dump(self, names: list[str] | None = None) -> str:
        """Indented text form, one node per line, for golden tests."""
        label = (
            f"{names[self.rhs_attr]}" if names else f"#{self.rhs_attr}"
        ) + str(self.rhs_interval)
        lines = [f"rhs {label}"]

        def walk(node: _Node, depth: int):
            name = names[node.attr] if names else f"#{node.attr}"
            lines.append("  " * depth + f"{name}{node.interval}")
            for child in sorted(node.children, key=_Node.sort_key):
                walk(child, depth + 1)

        for root in sorted(self.roots, key=_Node.sort_key):
            walk(root, 1)
        return "\n".join(lines)

    def is_redundant(self) -> bool:
        """True if some node has two children carrying the same DF."""

        def check(children: list[_Node]) -> bool:
            seen = set()
            for c in children:
                key = (c.attr, c.interval)
                if key in seen:
                    return True
                seen.add(key)
                if check(c.children):
                    return True
            return False

        return check(self.roots)

    # -- implication -------------------------------------------------------

    def implies(self, path: Path) -> bool:
        """True when some stored root-to-leaf path makes `path` redundant.

        A stored path q rejects p when q's terms embed order-preserving into
        p's terms, attribute by attribute, with each stored interval
        containing the candidate's.  A shorter q is an lhs that needs less to
        force the same rhs; an equal-length q with containing intervals covers
        the candidate outright.
        """
        return any(_embeds(q, path) for q in self.paths())

    # -- insertion ---------------------------------------------------------

    def insert(self, path: Path) -> None:
        nodes = self.roots
        inserted: list[_Node] = []
        for attr, interval in path:
            for node in nodes:
                if node.attr == attr and node.interval == interval:
                    break
            else:
                node = _Node(attr=attr, interval=interval)
                nodes.append(node)
            inserted.append(node)
            nodes = node.children
        # a path ending at a formerly interior node supersedes the longer
        # dependencies hanging below it
        inserted[-1].children.clear()
        self._combine_along(inserted)

    def _combine_along(self, path_nodes: list[_Node]) -> None:
        """Walk the inserted path bottom-up, merging each node with any
        sibling of the same attribute, adjacent interval, and identical
        subtree, until no level merges."""
        for depth in range(len(path_nodes) - 1, -1, -1):
            node = path_nodes[depth]
            siblings = self.roots if depth == 0 else path_nodes[depth - 1].children
            while True:
                merged = self._merge_one(node, siblings)
                if merged is None:
                    break
                node = merged
                path_nodes[depth] = merged

    @staticmethod
    def _merge_one(node: _Node, siblings: list[_Node]) -> _Node | None:
        for other in siblings:
            if other is node or other.attr != node.attr:
                continue
            if other.child_signature() != node.child_signature():
                continue
            if interval_adjacent(node.interval, other.interval):
                node.interval = interval_combine(node.interval, other.interval)
            elif interval_adjacent(other.interval, node.interval):
                node.interval = interval_combine(other.interval, node.interval)
            else:
                continue
            siblings.remove(other)
            return node
        return None


def _embeds(q: Path, p: Path) -> bool:
    """Order-preserving embedding of q into p with interval containment."""
    if len(q) > len(p):
        return False
    pos = 0
    for attr, interval in q:
        while pos < len(p) and p[pos][0] < attr:
            pos += 1
        if pos >= len(p) or p[pos][0] != attr or not interval.contains_interval(p[pos][1]):
            return False
        pos += 1
    return True


def combine(tree: DDTree, path: Path) -> None:
    """Re-run adjacent-sibling combination along an existing path.

    Walks from the path's last node upward, merging any sibling of the same
    attribute with an adjacent interval and an identical subtree; insertion
    already does this, so this entry point is for externally built trees.
    """
    nodes: list[_Node] = []
    level = tree.roots
    for attr, interval in path:
        for node in level:
            if node.attr == attr and node.interval == interval:
                break
        else:
            raise ValueError(f"path node ({attr}, {interval}) not in tree")
        nodes.append(node)
        level = node.children
    tree._combine_along(nodes)


def is_prefix(p: Path, q: Path) -> bool:
    """Strict path-prefix test: p is shorter than q and each p node subsumes
    the q node at the same position."""
    if len(p) >= len(q):
        return False
    for (pa, pv), (qa, qv) in zip(p, q):
        if not df_subsumes(
            DifferentialFunction.of({pa: pv}), DifferentialFunction.of({qa: qv})
        ):
            return False
    return True


class DDTreeIndex:
    """One DD-tree per distinct rhs differential function."""

    def __init__(self):
        self.trees: dict[tuple[int, Interval], DDTree] = {}

    def tree_for(self, rhs_attr: int, rhs_interval: Interval) -> DDTree:
        key = (rhs_attr, rhs_interval)
        tree = self.trees.get(key)
        if tree is None:
            tree = DDTree(rhs_attr=rhs_attr, rhs_interval=rhs_interval)
            self.trees[key] = tree
        return tree

    def chk_imply(self, dd: DifferentialDependency) -> bool:
        """Add the DD unless an accepted one already implies it.

        Returns True when the DD is new (now inserted and combined with any
        adjacent siblings), False when it is implied and the index unchanged.
        """
        tree = self.tree_for(dd.rhs_attr, dd.rhs_interval)
        path: Path = dd.lhs.terms
        if tree.implies(path):
            return False
        tree.insert(path)
        return True

    def all_paths(self) -> list[tuple[int, Interval, Path]]:
        """Every stored dependency as (rhs_attr, rhs_interval, lhs path), in
        canonical order."""
        out = []
        for key in sorted(self.trees, key=lambda k: (k[0], k[1].lo, k[1].hi)):
            tree = self.trees[key]
            for path in tree.paths():
                out.append((tree.rhs_attr, tree.rhs_interval, path))
        return out


def chk_imply(index: DDTreeIndex, dd: DifferentialDependency) -> bool:
    return index.chk_imply(dd)
