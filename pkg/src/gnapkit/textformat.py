"""Line-oriented text format for GNAP, MCKP and Penalty-Sum instances.

::

    gnap v1
    budget 3
    diversity 4
    tree (x1:3,x2:2)r;
    projects x1 0:0 2:1
    projects x2 0:0 1:1/2

    mckp v1
    budget 3
    value 4
    class 1:2 2:3
    class 1:1 3:4

    psum v1
    k 2
    Q 4
    D 2
    tuple 2:1/2
    tuple 1:1/2

Rationals are ``-?digits(/digits)?``. ``#`` starts a comment. Unnamed
internal vertices of a tree are named ``_n0, _n1, ...`` in preorder.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from .core import Edge, GnapInstance, PhyloTree, Project
from .mckp import MckpInstance
from .penaltysum import PenaltySumInstance

Instance = Union[GnapInstance, MckpInstance, PenaltySumInstance]

_RATIONAL = re.compile(r"-?\d+(?:/\d+)?")
_INT = re.compile(r"-?\d+")
_NAME = re.compile(r"[A-Za-z0-9_.*'+-]+")


class FormatError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def parse_rational(token: str, line: int = 0, column: int = 0) -> Fraction:
    if not _RATIONAL.fullmatch(token):
        raise FormatError(f"malformed rational {token!r}", line, column)
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise FormatError(f"zero denominator in {token!r}", line, column) from None


def parse_int(token: str, line: int = 0, column: int = 0) -> int:
    if not _INT.fullmatch(token):
        raise FormatError(f"malformed integer {token!r}", line, column)
    return int(token)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class _TreeParser:
    def __init__(self, text: str, line: int, offset: int):
        self.s = text
        self.pos = 0
        self.line = line
        self.offset = offset
        self.edges: list[Edge] = []
        self.names: set[str] = set()
        self.unnamed = 0

    def error(self, message: str):
        raise FormatError(message, self.line, self.offset + self.pos + 1)

    def peek(self) -> str:
        return self.s[self.pos] if self.pos < len(self.s) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of line"
            self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def name(self, required: bool) -> str | None:
        m = _NAME.match(self.s, self.pos)
        if not m:
            if required:
                self.error("expected a vertex name")
            return None
        self.pos = m.end()
        return m.group()

    def weight(self) -> Fraction:
        self.expect(":")
        m = _RATIONAL.match(self.s, self.pos)
        if not m:
            self.error("expected a branch length")
        start = self.pos
        self.pos = m.end()
        if self.peek() not in (",", ")", ";", ""):
            self.error(f"malformed branch length {self.s[start:self.pos + 1]!r}")
        return parse_rational(m.group(), self.line, self.offset + start + 1)

    def register(self, name: str | None) -> str:
        if name is None:
            name = f"_n{self.unnamed}"
            self.unnamed += 1
        if name in self.names:
            self.error(f"duplicate vertex name {name!r}")
        self.names.add(name)
        return name

    def subtree(self, is_root: bool) -> str:
        if self.peek() == "(":
            self.pos += 1
            kids = [self.subtree(False)]
            while self.peek() == ",":
                self.pos += 1
                kids.append(self.subtree(False))
            self.expect(")")
            # the vertex name follows its children, so edges are recorded afterwards
            name = self.register(self.name(required=False))
            for child, w in kids:
                self.edges.append(Edge(name, child, w))
            if is_root:
                return name
            return name, self.weight()
        name = self.register(self.name(required=True))
        if is_root:
            self.error("tree must have at least one edge")
        return name, self.weight()

    def parse(self) -> PhyloTree:
        root = self.subtree(True)
        self.expect(";")
        if self.pos != len(self.s):
            self.error("trailing text after ';'")
        # edges were appended child-subtrees-first; list each edge when its child
        # is first reached in a depth-first walk (the generator's order)
        children: dict[str, list[Edge]] = {}
        for e in self.edges:
            children.setdefault(e.parent, []).append(e)
        ordered = []
        stack = list(reversed(children.get(root, [])))
        while stack:
            e = stack.pop()
            ordered.append(e)
            stack.extend(reversed(children.get(e.child, [])))
        return PhyloTree(root, tuple(ordered))


def parse_tree(text: str, line: int = 1, offset: int = 0) -> PhyloTree:
    """Parse a newick-like tree ``(a:1,(b:1,c:2)u:1)r;``."""
    return _TreeParser(text.strip(), line, offset).parse()


def render_tree(tree: PhyloTree) -> str:
    def walk(v: str) -> str:
        cs = tree.children[v]
        label = v
        if cs:
            label = "(" + ",".join(walk(c) for c in cs) + ")" + v
        if v != tree.root:
            label += ":" + format_rational(tree.weight[v])
        return label

    return walk(tree.root) + ";"


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield no, raw, body.rstrip()


def _tokens(body: str):
    for m in re.finditer(r"\S+", body):
        yield m.start() + 1, m.group()


def _pair(token: str, col: int, line: int, left, right):
    if token.count(":") != 1:
        raise FormatError(f"expected <x>:<y>, found {token!r}", line, col)
    a, b = token.split(":")
    return left(a, line, col), right(b, line, col + len(a) + 1)


def parse_instance(text: str) -> Instance:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty input", 1, 1)
    no, _, header = lines[0]
    head = header.split()
    kinds = {"gnap": _parse_gnap, "mckp": _parse_mckp, "psum": _parse_psum}
    if len(head) != 2 or head[0] not in kinds or head[1] != "v1":
        raise FormatError(f"unknown header {header.strip()!r}", no, 1)
    return kinds[head[0]](lines[1:])


def _parse_gnap(lines) -> GnapInstance:
    budget = diversity = tree = None
    project_lines: dict[str, tuple] = {}
    last = 1
    for no, raw, body in lines:
        last = no
        toks = list(_tokens(body))
        col, key = toks[0]
        if key == "budget" and len(toks) == 2:
            budget = parse_int(toks[1][1], no, toks[1][0])
        elif key == "diversity" and len(toks) == 2:
            diversity = parse_rational(toks[1][1], no, toks[1][0])
        elif key == "tree":
            start = body.index("tree") + 4
            rest = body[start:]
            lead = len(rest) - len(rest.lstrip())
            tree = parse_tree(rest.strip(), no, start + lead)
        elif key == "projects" and len(toks) >= 2:
            leaf = toks[1][1]
            if leaf in project_lines:
                raise FormatError(f"second projects line for {leaf!r}", no, toks[1][0])
            projects = tuple(Project(*_pair(t, c, no, parse_int, parse_rational)) for c, t in toks[2:])
            project_lines[leaf] = (no, toks[1][0], projects)
        else:
            raise FormatError(f"unexpected line {body.strip()!r}", no, col)
    if tree is None:
        raise FormatError("missing 'tree' line", last, 1)
    if budget is None:
        raise FormatError("missing 'budget' line", last, 1)
    if diversity is None:
        raise FormatError("missing 'diversity' line", last, 1)
    for leaf, (no, col, _) in project_lines.items():
        if leaf not in tree.leaf_index:
            raise FormatError(f"projects given for {leaf!r}, which is not a leaf", no, col)
    lists = tuple(project_lines[x][2] if x in project_lines else () for x in tree.leaves)
    return GnapInstance(tree, lists, budget, diversity)


def _parse_mckp(lines) -> MckpInstance:
    budget = target = None
    classes = []
    last = 1
    for no, raw, body in lines:
        last = no
        toks = list(_tokens(body))
        col, key = toks[0]
        if key == "budget" and len(toks) == 2:
            budget = parse_int(toks[1][1], no, toks[1][0])
        elif key == "value" and len(toks) == 2:
            target = parse_int(toks[1][1], no, toks[1][0])
        elif key == "class":
            classes.append(tuple(_pair(t, c, no, parse_int, parse_int) for c, t in toks[1:]))
        else:
            raise FormatError(f"unexpected line {body.strip()!r}", no, col)
    if budget is None:
        raise FormatError("missing 'budget' line", last, 1)
    if target is None:
        raise FormatError("missing 'value' line", last, 1)
    return MckpInstance(tuple(classes), budget, target)


def _parse_psum(lines) -> PenaltySumInstance:
    k = Q = D = None
    tuples = []
    last = 1
    for no, raw, body in lines:
        last = no
        toks = list(_tokens(body))
        col, key = toks[0]
        if key == "k" and len(toks) == 2:
            k = parse_int(toks[1][1], no, toks[1][0])
        elif key == "Q" and len(toks) == 2:
            Q = parse_rational(toks[1][1], no, toks[1][0])
        elif key == "D" and len(toks) == 2:
            D = parse_rational(toks[1][1], no, toks[1][0])
        elif key == "tuple" and len(toks) == 2:
            tuples.append(_pair(toks[1][1], toks[1][0], no, parse_rational, parse_rational))
        else:
            raise FormatError(f"unexpected line {body.strip()!r}", no, col)
    for key, val in (("k", k), ("Q", Q), ("D", D)):
        if val is None:
            raise FormatError(f"missing '{key}' line", last, 1)
    return PenaltySumInstance(tuple(tuples), k, Q, D)


def render_instance(inst: Instance, header_comments: tuple[str, ...] = ()) -> str:
    out = [f"# {c}" for c in header_comments]
    if isinstance(inst, GnapInstance):
        out += ["gnap v1", f"budget {inst.budget}", f"diversity {format_rational(inst.diversity)}",
                f"tree {render_tree(inst.tree)}"]
        for leaf, plist in zip(inst.tree.leaves, inst.lists):
            projects = " ".join(f"{p.cost}:{format_rational(p.survival)}" for p in plist)
            out.append(f"projects {leaf} {projects}".rstrip())
    elif isinstance(inst, MckpInstance):
        out += ["mckp v1", f"budget {inst.budget}", f"value {inst.target}"]
        for cl in inst.classes:
            out.append(("class " + " ".join(f"{c}:{d}" for c, d in cl)).rstrip())
    elif isinstance(inst, PenaltySumInstance):
        out += ["psum v1", f"k {inst.k}", f"Q {format_rational(inst.Q)}", f"D {format_rational(inst.D)}"]
        for a, b in inst.tuples:
            out.append(f"tuple {format_rational(a)}:{format_rational(b)}")
    else:
        raise TypeError(f"cannot render {type(inst).__name__}")
    return "\n".join(out) + "\n"
