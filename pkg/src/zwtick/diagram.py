"""Diagram terms: generators, sequential and parallel composition.

A diagram with n input wires and m output wires is a finite term built from
the generator alphabet (Z and W spiders, the fermionic swap, the tick, plain
wires, swaps, cups and caps) under `Compose` and `Tensor`.  Terms are plain
immutable trees; nothing is quotiented here.  Semantic identification happens
in `semantics` / `normalform`, syntactic rewriting in `rules`.

Wire-order conventions: `Compose(after, before)` applies `before` first; wire
0 is the leftmost (most significant in the basis-index encoding used by the
interpreter).  The tick is a 1 -> 1 generator marking one wire; two ticks on
the same wire cancel semantically but not syntactically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .scalar import ONE, Scalar, ScalarParseError, conjugate, format_scalar, parse_scalar


class ArityError(ValueError):
    """Raised when composition arities disagree or a spider arity is negative."""


class DiagramParseError(ValueError):
    pass


@dataclass(frozen=True)
class Diagram:
    """Base class; every node carries its cached wire counts."""

    n_in: int = field(init=False, default=0)
    n_out: int = field(init=False, default=0)

    def __rshift__(self, other: "Diagram") -> "Diagram":
        """`a >> b` runs a first, then b."""
        return Compose(other, self)

    def __matmul__(self, other: "Diagram") -> "Diagram":
        return Tensor(self, other)


@dataclass(frozen=True)
class Generator(Diagram):
    pass


def _set_arity(obj: Diagram, n: int, m: int) -> None:
    object.__setattr__(obj, "n_in", n)
    object.__setattr__(obj, "n_out", m)


@dataclass(frozen=True)
class ZSpider(Generator):
    """White spider with parameter r: sends |0..0> to |0..0> and |1..1> to r|1..1>."""

    r: Scalar
    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.m < 0:
            raise ArityError(f"negative spider arity ({self.n}, {self.m})")
        _set_arity(self, self.n, self.m)


@dataclass(frozen=True)
class WSpider(Generator):
    """Black spider: one unit of excitation distributed over its legs.

    Maps every weight-1 input basis state to the all-zeros output and the
    all-zeros input to the sum of weight-1 outputs; all other basis states
    are annihilated.  The 1 -> 1 instance is the bit flip.
    """

    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.m < 0:
            raise ArityError(f"negative spider arity ({self.n}, {self.m})")
        _set_arity(self, self.n, self.m)


@dataclass(frozen=True)
class _Fswap(Generator):
    def __post_init__(self) -> None:
        _set_arity(self, 2, 2)


@dataclass(frozen=True)
class _Tick(Generator):
    def __post_init__(self) -> None:
        _set_arity(self, 1, 1)


@dataclass(frozen=True)
class _Id(Generator):
    def __post_init__(self) -> None:
        _set_arity(self, 1, 1)


@dataclass(frozen=True)
class _Swap(Generator):
    def __post_init__(self) -> None:
        _set_arity(self, 2, 2)


@dataclass(frozen=True)
class _Cup(Generator):
    def __post_init__(self) -> None:
        _set_arity(self, 2, 0)


@dataclass(frozen=True)
class _Cap(Generator):
    def __post_init__(self) -> None:
        _set_arity(self, 0, 2)


@dataclass(frozen=True)
class _Empty(Generator):
    """The 0 -> 0 unit diagram, written "(id 0)"."""

    def __post_init__(self) -> None:
        _set_arity(self, 0, 0)


Fswap = _Fswap()
Tick = _Tick()
Id = _Id()
Swap = _Swap()
Cup = _Cup()
Cap = _Cap()
Empty = _Empty()


@dataclass(frozen=True)
class Compose(Diagram):
    """`after . before`: feed the outputs of `before` into `after`."""

    after: Diagram
    before: Diagram

    def __post_init__(self) -> None:
        if self.before.n_out != self.after.n_in:
            raise ArityError(
                f"compose mismatch: before produces {self.before.n_out} wires "
                f"but after consumes {self.after.n_in}"
            )
        _set_arity(self, self.before.n_in, self.after.n_out)


@dataclass(frozen=True)
class Tensor(Diagram):
    left: Diagram
    right: Diagram

    def __post_init__(self) -> None:
        _set_arity(
            self,
            self.left.n_in + self.right.n_in,
            self.left.n_out + self.right.n_out,
        )


# -- bulk builders -------------------------------------------------------


def id_n(n: int) -> Diagram:
    """n parallel wires; the empty diagram when n = 0."""
    if n < 0:
        raise ArityError(f"negative wire count {n}")
    if n == 0:
        return Empty
    d: Diagram = Id
    for _ in range(n - 1):
        d = Tensor(Id, d)
    return d


def tensor_many(parts: list[Diagram]) -> Diagram:
    if not parts:
        return Empty
    d = parts[0]
    for p in parts[1:]:
        d = Tensor(d, p)
    return d


def compose_many(layers: list[Diagram]) -> Diagram:
    """Compose layers listed in application order (first layer applied first)."""
    if not layers:
        return Empty
    d = layers[0]
    for layer in layers[1:]:
        d = Compose(layer, d)
    return d


def permutation_diagram(perm: list[int]) -> Diagram:
    """A swap network routing input i to output position perm[i].

    Built from adjacent-transposition layers via odd-even sorting, so the
    result is a genuine term over Swap with at most len(perm) layers;
    identity permutations produce plain wires.
    """
    k = len(perm)
    if sorted(perm) != list(range(k)):
        raise ValueError(f"not a permutation: {perm}")
    cur = list(range(k))
    layers: list[Diagram] = []
    parity = 0
    for _ in range(k + 1):
        if all(perm[cur[j]] == j for j in range(k)):
            break
        swapped_at: list[int] = []
        for j in range(parity, k - 1, 2):
            if perm[cur[j]] > perm[cur[j + 1]]:
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                swapped_at.append(j)
        if swapped_at:
            parts: list[Diagram] = []
            pos = 0
            for j in swapped_at:
                if j > pos:
                    parts.append(id_n(j - pos))
                parts.append(Swap)
                pos = j + 2
            if pos < k:
                parts.append(id_n(k - pos))
            layers.append(tensor_many(parts))
        parity ^= 1
    if not layers:
        return id_n(k)
    return compose_many(layers)


def bend_cap(n: int) -> Diagram:
    """0 -> 2n state pairing output k with output n+k (blocked Bell layout)."""
    pairs = tensor_many([Cap] * n) if n else Empty
    # Cap^(x)n emits interleaved pairs (a1,b1,...,an,bn); route to blocks.
    perm = []
    for k in range(n):
        perm.extend([k, n + k])
    return Compose(permutation_diagram(perm), pairs)


def bend_cup(n: int) -> Diagram:
    """2n -> 0 effect pairing input k with input n+k."""
    return dagger(bend_cap(n))


# -- involutions ---------------------------------------------------------


def dagger(d: Diagram) -> Diagram:
    """Adjoint: reverses composition and conjugates Z parameters."""
    if isinstance(d, ZSpider):
        return ZSpider(conjugate(d.r), d.m, d.n)
    if isinstance(d, WSpider):
        return WSpider(d.m, d.n)
    if d is Cup:
        return Cap
    if d is Cap:
        return Cup
    if isinstance(d, Generator):
        return d
    if isinstance(d, Compose):
        return Compose(dagger(d.before), dagger(d.after))
    if isinstance(d, Tensor):
        return Tensor(dagger(d.left), dagger(d.right))
    raise TypeError(f"not a diagram: {d!r}")


def conjugate_term(d: Diagram) -> Diagram:
    """Entrywise complex conjugate: conjugates Z parameters, fixes the rest."""
    if isinstance(d, ZSpider):
        return ZSpider(conjugate(d.r), d.n, d.m)
    if isinstance(d, Generator):
        return d
    if isinstance(d, Compose):
        return Compose(conjugate_term(d.after), conjugate_term(d.before))
    if isinstance(d, Tensor):
        return Tensor(conjugate_term(d.left), conjugate_term(d.right))
    raise TypeError(f"not a diagram: {d!r}")


def transpose_term(d: Diagram) -> Diagram:
    """Matrix transpose as a term operation: dagger of the conjugate."""
    return dagger(conjugate_term(d))


def has_tick(d: Diagram) -> bool:
    if d is Tick:
        return True
    if isinstance(d, Compose):
        return has_tick(d.after) or has_tick(d.before)
    if isinstance(d, Tensor):
        return has_tick(d.left) or has_tick(d.right)
    return False


def generator_count(d: Diagram) -> int:
    """Number of generator leaves (plain wires and the unit included)."""
    if isinstance(d, Compose):
        return generator_count(d.after) + generator_count(d.before)
    if isinstance(d, Tensor):
        return generator_count(d.left) + generator_count(d.right)
    return 1


def subdiagrams(d: Diagram) -> Iterator[tuple[tuple[int, ...], Diagram]]:
    """Yield (path, node) pairs in preorder; path components are child indices."""
    stack: list[tuple[tuple[int, ...], Diagram]] = [((), d)]
    while stack:
        path, node = stack.pop()
        yield path, node
        if isinstance(node, Compose):
            stack.append((path + (1,), node.before))
            stack.append((path + (0,), node.after))
        elif isinstance(node, Tensor):
            stack.append((path + (1,), node.right))
            stack.append((path + (0,), node.left))


# -- derived constructors ------------------------------------------------

ket0 = ZSpider(Scalar(0), 0, 1)
ket1 = WSpider(0, 1)
bra0 = dagger(ket0)
bra1 = dagger(ket1)
not_gate = WSpider(1, 1)

#: Discard one wire: trace out the qubit.  The Z splitter feeds a plain and a
#: ticked copy of the wire into a cup, which contracts the diagonal.
ground = Compose(Compose(Cup, Tensor(Tick, Id)), ZSpider(ONE, 1, 2))

#: 2 -> 0 effect with a tick on its first leg; the building block of traces.
ticked_cup = Compose(Cup, Tensor(Tick, Id))

#: 0 -> 2 state, adjoint of the ticked cup.
ticked_cap = dagger(ticked_cup)


# -- text form -----------------------------------------------------------

_SUGAR: dict[str, Diagram] = {}


def _init_sugar() -> None:
    _SUGAR.update(
        {
            "fswap": Fswap,
            "swap": Swap,
            "cup": Cup,
            "cap": Cap,
            "tick": Tick,
            "ground": ground,
            "ket0": ket0,
            "ket1": ket1,
            "bra0": bra0,
            "bra1": bra1,
            "not": not_gate,
            "tcup": ticked_cup,
            "tcap": ticked_cap,
        }
    )


_init_sugar()


def _tokenize(text: str) -> list[str]:
    out: list[str] = []
    for line in text.splitlines():
        body = line.split(";", 1)[0]
        body = body.replace("(", " ( ").replace(")", " ) ")
        out.extend(body.split())
    return out


def parse_diagram(text: str) -> Diagram:
    """Parse the s-expression diagram syntax; sugar tokens expand to terms."""
    tokens = _tokenize(text)
    if not tokens:
        raise DiagramParseError("empty diagram text")
    pos = 0

    def need(tok: str) -> None:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            found = tokens[pos] if pos < len(tokens) else "<end>"
            raise DiagramParseError(f"expected {tok!r}, found {found!r}")
        pos += 1

    def next_token() -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise DiagramParseError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_nat() -> int:
        tok = next_token()
        if not tok.isdigit():
            raise DiagramParseError(f"expected a natural number, found {tok!r}")
        return int(tok)

    def parse_term() -> Diagram:
        tok = next_token()
        if tok != "(":
            if tok in _SUGAR:
                return _SUGAR[tok]
            raise DiagramParseError(f"unknown diagram token {tok!r}")
        head = next_token()
        if head == "compose":
            after = parse_term()
            before = parse_term()
            need(")")
            try:
                return Compose(after, before)
            except ArityError as exc:
                raise DiagramParseError(str(exc)) from None
        if head == "tensor":
            left = parse_term()
            right = parse_term()
            need(")")
            return Tensor(left, right)
        if head == "id":
            n = parse_nat()
            need(")")
            return id_n(n)
        if head == "z":
            raw = next_token()
            try:
                r = parse_scalar(raw)
            except ScalarParseError as exc:
                raise DiagramParseError(f"bad spider parameter: {exc}") from None
            n = parse_nat()
            m = parse_nat()
            need(")")
            return ZSpider(r, n, m)
        if head == "w":
            n = parse_nat()
            m = parse_nat()
            need(")")
            return WSpider(n, m)
        raise DiagramParseError(f"unknown form {head!r}")

    d = parse_term()
    if pos != len(tokens):
        raise DiagramParseError(f"trailing tokens starting at {tokens[pos]!r}")
    return d


def print_diagram(d: Diagram) -> str:
    """Core-syntax text for a term; `parse_diagram` inverts it exactly."""
    if isinstance(d, ZSpider):
        return f"(z {format_scalar(d.r)} {d.n} {d.m})"
    if isinstance(d, WSpider):
        return f"(w {d.n} {d.m})"
    if d is Fswap:
        return "fswap"
    if d is Tick:
        return "tick"
    if d is Id:
        return "(id 1)"
    if d is Swap:
        return "swap"
    if d is Cup:
        return "cup"
    if d is Cap:
        return "cap"
    if d is Empty:
        return "(id 0)"
    if isinstance(d, Compose):
        return f"(compose {print_diagram(d.after)} {print_diagram(d.before)})"
    if isinstance(d, Tensor):
        return f"(tensor {print_diagram(d.left)} {print_diagram(d.right)})"
    raise TypeError(f"not a diagram: {d!r}")


# -- graphviz rendering --------------------------------------------------


class _Wire:
    __slots__ = ("parent", "ticks", "ends")

    def __init__(self) -> None:
        self.parent: "_Wire | None" = None
        self.ticks = 0
        self.ends: list[str] = []

    def find(self) -> "_Wire":
        w = self
        while w.parent is not None:
            w = w.parent
        while self.parent is not None and self.parent is not w:
            nxt = self.parent
            self.parent = w
            self = nxt  # noqa: PLW0642 - path compression walk
        return w


def _union(a: _Wire, b: _Wire) -> None:
    ra, rb = a.find(), b.find()
    if ra is rb:
        return
    rb.parent = ra
    ra.ticks += rb.ticks
    ra.ends.extend(rb.ends)


def render_dot(d: Diagram) -> str:
    """Graphviz source: white Z nodes, black W nodes, dashed ticked edges."""
    counter = [0]
    nodes: list[str] = []
    registry: list[_Wire] = []

    def fresh_node(attrs: str) -> str:
        name = f"n{counter[0]}"
        counter[0] += 1
        nodes.append(f"  {name} [{attrs}];")
        return name

    def new_wire(end: str | None = None, ticks: int = 0) -> _Wire:
        w = _Wire()
        w.ticks = ticks
        if end is not None:
            w.ends.append(end)
        registry.append(w)
        return w

    def spider_ports(t: Diagram, name: str) -> tuple[list[_Wire], list[_Wire]]:
        return (
            [new_wire(name) for _ in range(t.n_in)],
            [new_wire(name) for _ in range(t.n_out)],
        )

    def walk(t: Diagram) -> tuple[list[_Wire], list[_Wire]]:
        if isinstance(t, ZSpider):
            name = fresh_node(
                f'label="Z({format_scalar(t.r)})" shape=ellipse style=filled fillcolor=white'
            )
            return spider_ports(t, name)
        if isinstance(t, WSpider):
            name = fresh_node(
                'label="W" shape=circle style=filled fillcolor=black fontcolor=white'
            )
            return spider_ports(t, name)
        if t is Fswap:
            name = fresh_node('label="fswap" shape=box')
            return spider_ports(t, name)
        if t is Id:
            w = new_wire()
            return [w], [w]
        if t is Tick:
            w = new_wire(ticks=1)
            return [w], [w]
        if t is Swap:
            w1, w2 = new_wire(), new_wire()
            return [w1, w2], [w2, w1]
        if t is Cup:
            w = new_wire()
            return [w, w], []
        if t is Cap:
            w = new_wire()
            return [], [w, w]
        if t is Empty:
            return [], []
        if isinstance(t, Compose):
            b_in, b_out = walk(t.before)
            a_in, a_out = walk(t.after)
            for wb, wa in zip(b_out, a_in):
                _union(wb, wa)
            return b_in, a_out
        if isinstance(t, Tensor):
            l_in, l_out = walk(t.left)
            r_in, r_out = walk(t.right)
            return l_in + r_in, l_out + r_out
        raise TypeError(f"not a diagram: {t!r}")

    ins, outs = walk(d)
    for k, w in enumerate(ins):
        name = f"in{k}"
        nodes.append(f'  {name} [label="in {k}" shape=plaintext];')
        # Boundary attachments go in front so edges read input -> output.
        w.find().ends.insert(0, name)
    for k, w in enumerate(outs):
        name = f"out{k}"
        nodes.append(f'  {name} [label="out {k}" shape=plaintext];')
        w.find().ends.append(name)

    seen: set[int] = set()
    edges: list[str] = []

    def edge_attrs(w: _Wire) -> str:
        if w.ticks == 0:
            return ""
        label = "∤" if w.ticks == 1 else f"∤x{w.ticks}"
        return f' [style=dashed label="{label}"]'

    for w in registry:
        root = w.find()
        if id(root) in seen:
            continue
        seen.add(id(root))
        ends = root.ends
        if len(ends) == 2:
            edges.append(f"  {ends[0]} -> {ends[1]}{edge_attrs(root)};")
        elif len(ends) == 1:
            # Both endpoints land on the same spider (a self-loop leg pair).
            edges.append(f"  {ends[0]} -> {ends[0]}{edge_attrs(root)};")
        else:
            # A closed loop touching no node at all; draw it on a point.
            name = fresh_node('label="" shape=point')
            edges.append(f"  {name} -> {name}{edge_attrs(root)};")
    return "digraph zw {\n  rankdir=BT;\n" + "\n".join(nodes + edges) + "\n}\n"
