"""Plain-text files for groups, orders and commensurations.

The format is INI-like.  A file is a sequence of blocks, each opened by a
``[group]``, ``[order]`` or ``[comm]`` header; keys are ``key = value``.
Several ``key=value`` pairs may share a line (and the header line) when the
values contain no spaces, so ``[order] group=Z^2 flag=(0,1) functionals=(0,1);(1,0)``
is one complete block.  ``#`` starts a comment.  See ``docs/format.md``.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .comm import Commensuration, NotACommensuration, from_images, tau, validate_comm
from .group import GroupSpec, from_presentation
from .order import OrderScheme, group_signature
from .registry import get_group

KINDS = ("group", "order", "comm")
GROUP_PARTS = ("generators", "relations", "mult")


class InputError(ValueError):
    """Syntax or validation error, with a 1-based position when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 details: tuple = ()):
        self.message, self.line, self.column, self.details = message, line, column, tuple(details)
        where = ""
        if line is not None:
            where = f"line {line}, column {column or 1}: "
        super().__init__(where + message)


@dataclass
class Entry:
    value: str
    line: int
    column: int


@dataclass
class Block:
    kind: str
    line: int
    keys: dict = field(default_factory=dict)
    relations: list = field(default_factory=list)  # (lhs_a, lhs_b, rhs, line, col)
    images: list = field(default_factory=list)     # (generator, word, line, col)
    tau: Entry | None = None
    gen_names: list = field(default_factory=list)  # from a [generators] section
    mult_lines: dict = field(default_factory=dict)  # generator -> Entry, from [mult]

    def get(self, key: str, required: bool = True) -> Entry | None:
        if key in self.keys:
            return self.keys[key]
        if required:
            raise InputError(f"[{self.kind}] block needs '{key}'", self.line, 1)
        return None


_HEADER = re.compile(r"\s*\[(\w+)\]")
_PAIR = re.compile(r"([A-Za-z_][\w.]*)\s*=\s*(\S+)")
_COMM = re.compile(r"\s*comm\s+(\w+)\s+(\w+)\s*=\s*(.*)$")
_IMAGE = re.compile(r"\s*image\s+(\w+)\s*=\s*(.*)$")
_TAU = re.compile(r"\s*tau\s+(\S+)\s*$")


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def _parse_pairs(text: str, offset: int, lineno: int, block: Block):
    text_stripped = text.strip()
    if not text_stripped:
        return
    if text_stripped.count("=") == 1:
        key, _, value = text.partition("=")
        key_col = offset + len(text) - len(text.lstrip()) + 1
        if not re.fullmatch(r"\s*[A-Za-z_][\w.]*\s*", key):
            raise InputError(f"bad key {key.strip()!r}", lineno, key_col)
        value_col = offset + len(key) + 1 + len(value) - len(value.lstrip()) + 1
        _store(block, key.strip(), Entry(value.strip(), lineno, value_col), lineno, key_col)
        return
    pos = 0
    for m in _PAIR.finditer(text):
        gap = text[pos:m.start()]
        if gap.strip():
            raise InputError(f"unexpected text {gap.strip()!r}", lineno, offset + pos + 1)
        _store(block, m.group(1), Entry(m.group(2), lineno, offset + m.start(2) + 1), lineno, offset + m.start() + 1)
        pos = m.end()
    if text[pos:].strip():
        raise InputError(f"unexpected text {text[pos:].strip()!r}", lineno, offset + pos + 1)


def _store(block: Block, key: str, entry: Entry, lineno: int, col: int):
    if key in block.keys:
        raise InputError(f"duplicate key '{key}'", lineno, col)
    block.keys[key] = entry


def parse_blocks(text: str) -> list[Block]:
    blocks: list[Block] = []
    part = None  # current [generators]/[relations]/[mult] sub-section of a group
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _HEADER.match(line)
        if m:
            kind = m.group(1)
            if kind in GROUP_PARTS:
                if not blocks or blocks[-1].kind != "group":
                    raise InputError(f"[{kind}] must follow a [group] header", lineno, m.start(1))
                part = kind
                if line[m.end():].strip():
                    raise InputError(f"unexpected text after [{kind}]", lineno, m.end() + 1)
                continue
            if kind not in KINDS:
                raise InputError(f"unknown section [{kind}]", lineno, m.start(1))
            part = None
            blocks.append(Block(kind, lineno))
            _parse_pairs(line[m.end():], m.end(), lineno, blocks[-1])
            continue
        if not blocks:
            raise InputError("expected a section header such as [group]", lineno, 1)
        block = blocks[-1]
        if part == "generators":
            for gm in re.finditer(r"[^\s,]+", line):
                if not re.fullmatch(r"[A-Za-z_]\w*", gm.group(0)):
                    raise InputError(f"bad generator name {gm.group(0)!r}", lineno, gm.start() + 1)
                block.gen_names.append(gm.group(0))
        elif part == "mult":
            key, eq, value = line.partition("=")
            if not eq or not re.fullmatch(r"\s*[A-Za-z_]\w*\s*", key):
                raise InputError("expected 'generator = polynomial'", lineno, 1)
            if key.strip() in block.mult_lines:
                raise InputError(f"duplicate mult line for {key.strip()!r}", lineno, 1)
            block.mult_lines[key.strip()] = Entry(value, lineno, len(key) + 2)
        elif (m := _COMM.match(line)):
            block.relations.append((m.group(1), m.group(2), m.group(3).strip(), lineno, m.start(3) + 1))
        elif part == "relations":
            raise InputError("relations look like 'comm x y = word'", lineno, 1)
        elif (m := _IMAGE.match(line)):
            block.images.append((m.group(1), m.group(2).strip(), lineno, m.start(2) + 1))
        elif (m := _TAU.match(line)):
            block.tau = Entry(m.group(1), lineno, m.start(1) + 1)
        elif "=" in line:
            _parse_pairs(line, 0, lineno, block)
        else:
            raise InputError(f"cannot parse {line.strip()!r}", lineno, len(line) - len(line.lstrip()) + 1)
    return blocks


# -- value syntax -----------------------------------------------------------------


def parse_rational_at(text: str, line: int | None = None, column: int | None = None) -> Fraction:
    try:
        return la.parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed rational {text!r} ({exc})", line, column) from None


def parse_vector(text: str, line: int | None = None, column: int | None = None) -> tuple:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body, column = body[1:-1], (column or 1) + 1
    out = []
    pos = 0
    for part in body.split(","):
        col = None if column is None else column + pos + len(part) - len(part.lstrip())
        if not part.strip():
            raise InputError(f"empty entry in vector {text!r}", line, col)
        out.append(parse_rational_at(part.strip(), line, col))
        pos += len(part) + 1
    return tuple(out)


def parse_vectors(text: str, line: int | None = None, column: int | None = None) -> list[tuple]:
    out, pos = [], 0
    for part in text.split(";"):
        out.append(parse_vector(part, line, None if column is None else column + pos))
        pos += len(part) + 1
    return out


_LETTER = re.compile(r"([A-Za-z_]\w*)(?:\^\(?(-?\d+)\)?)?")


def parse_word(group: GroupSpec, text: str, line: int | None = None, column: int | None = None) -> tuple:
    """``"x y^-1 z^2"`` (or ``e``) as ``((index, exponent), ...)``."""
    word = []
    for m in re.finditer(r"\S+", text):
        tok = m.group(0)
        if tok in ("e", "1"):
            continue
        lm = _LETTER.fullmatch(tok)
        col = None if column is None else column + m.start()
        if not lm or lm.group(1) not in group.generators:
            raise InputError(f"unknown generator or bad letter {tok!r}", line, col)
        word.append((group.index_of(lm.group(1)), int(lm.group(2) or 1)))
    return tuple(word)


def parse_element(group: GroupSpec, text: str) -> tuple:
    """Exponent vector ``"1,0,-2"`` or word ``"x y^-1"``; rational entries allowed in vectors."""
    text = text.strip()
    if re.search(r"[A-Za-z_]", text):
        return group.evaluate(parse_word(group, text))
    v = parse_vector(text)
    if len(v) != group.rank:
        raise InputError(f"expected {group.rank} coordinates, got {len(v)}")
    return tuple(int(c) if c.denominator == 1 else c for c in v)


def parse_element_list(group: GroupSpec, text: str) -> list[tuple]:
    """Words separated by commas, or vectors separated by semicolons."""
    if re.search(r"[A-Za-z_]", text):
        return [parse_element(group, p) for p in text.split(",") if p.strip()]
    return [parse_element(group, p) for p in text.split(";") if p.strip()]


# -- user multiplication polynomials ----------------------------------------------------

_ALLOWED = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Load,
            ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)


def compile_polynomial(text: str, n: int, line: int | None = None, column: int | None = None):
    """Arithmetic in ``a1..an`` (left factor) and ``b1..bn`` (right factor)."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise InputError(f"bad polynomial {text.strip()!r}", line, (column or 1) + (exc.offset or 1) - 1) from None
    names = {f"{p}{i + 1}" for p in "ab" for i in range(n)}
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise InputError(f"disallowed syntax {type(node).__name__} in {text.strip()!r}", line, column)
        if isinstance(node, ast.Name) and node.id not in names:
            raise InputError(f"unknown variable {node.id!r}", line, column)
        if isinstance(node, ast.Constant) and not isinstance(node.value, int):
            raise InputError(f"only integer constants allowed, got {node.value!r}", line, column)
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and node.right.value >= 0):
                raise InputError("exponents must be non-negative integer constants", line, column)

    ops = {ast.Add: lambda x, y: x + y, ast.Sub: lambda x, y: x - y, ast.Mult: lambda x, y: x * y,
           ast.Div: lambda x, y: Fraction(x) / y, ast.Pow: lambda x, y: x ** y}

    def ev(node, env):
        if isinstance(node, ast.Expression):
            return ev(node.body, env)
        if isinstance(node, ast.Constant):
            return node.value
        if isinstance(node, ast.Name):
            return env[node.id]
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand, env)
            return -v if isinstance(node.op, ast.USub) else v
        return ops[type(node.op)](ev(node.left, env), ev(node.right, env))

    return lambda env: ev(tree, env)


def make_mult(polys: list, n: int):
    def mult(g, h):
        env = {f"a{i + 1}": g[i] for i in range(n)}
        env.update({f"b{i + 1}": h[i] for i in range(n)})
        out = []
        for p in polys:
            v = p(env)
            if isinstance(v, Fraction) and v.denominator == 1:
                v = int(v)
            out.append(v)
        return tuple(out)
    return mult


# -- workspace ------------------------------------------------------------------------


@dataclass
class Workspace:
    """Named groups, orders and commensurations; every entry has been validated."""

    groups: dict = field(default_factory=dict)
    orders: dict = field(default_factory=dict)
    comms: dict = field(default_factory=dict)
    group_refs: dict = field(default_factory=dict)  # order/comm name -> group reference
    raw_comms: dict = field(default_factory=dict)   # name -> (group, matrix) before validation

    def group(self, ref: str, line: int | None = None, column: int | None = None) -> GroupSpec:
        if ref in self.groups:
            return self.groups[ref]
        try:
            return get_group(ref)
        except (KeyError, ValueError):
            raise InputError(f"unknown group {ref!r}", line, column) from None

    def _register(self, table: dict, kind: str, name: str, obj, line: int):
        if name in table:
            raise InputError(f"duplicate {kind} name {name!r}", line, 1)
        table[name] = obj

    def load(self, text: str, validate: bool = True) -> list[tuple[str, str]]:
        """Parse ``text`` and register its blocks; returns ``[(kind, name), ...]``."""
        added = []
        counters = {k: 0 for k in KINDS}
        for block in parse_blocks(text):
            counters[block.kind] += 1
            default = f"{block.kind}{counters[block.kind]}"
            if block.kind == "group":
                name, g = self._build_group(block)
                self._register(self.groups, "group", name, g, block.line)
            elif block.kind == "order":
                name, s = self._build_order(block, default, validate)
                self._register(self.orders, "order", name, s, block.line)
            else:
                name, a = self._build_comm(block, default, validate)
                self._register(self.comms, "comm", name, a, block.line)
            added.append((block.kind, name))
        return added

    def _build_group(self, block: Block) -> tuple[str, GroupSpec]:
        name = block.get("name")
        gens = block.get("generators", required=False)
        if gens is not None and block.gen_names:
            raise InputError("generators given twice", gens.line, gens.column)
        if gens is None and not block.gen_names:
            if block.relations or block.mult_lines:
                raise InputError("relations need a generator list", block.line, 1)
            return name.value, self.group(name.value, name.line, name.column)
        if gens is not None:
            names = tuple(p.strip() for p in gens.value.split(","))
            if any(not re.fullmatch(r"[A-Za-z_]\w*", p) for p in names):
                raise InputError(f"bad generator list {gens.value!r}", gens.line, gens.column)
        else:
            names = tuple(block.gen_names)
        if name.value in self.groups:
            raise InputError(f"duplicate group name {name.value!r}", name.line, name.column)
        probe = GroupSpec("_names", names)
        rels = {}
        for a, b, rhs, line, col in block.relations:
            for x in (a, b):
                if x not in names:
                    raise InputError(f"unknown generator {x!r}", line, 1)
            key = (names.index(a), names.index(b))
            if key in rels or key[::-1] in rels:
                raise InputError(f"relation for [{a},{b}] given twice", line, 1)
            rels[key] = parse_word(probe, rhs, line, col)
        mult, where = None, None
        if (m := block.get("mult", required=False)) is not None:
            if block.mult_lines:
                raise InputError("mult given twice", m.line, m.column)
            parts = m.value.split(";")
            if len(parts) != len(names):
                raise InputError(f"mult needs {len(names)} polynomials separated by ';'", m.line, m.column)
            polys, pos = [], 0
            for p in parts:
                polys.append(compile_polynomial(p, len(names), m.line, m.column + pos))
                pos += len(p) + 1
            mult, where = make_mult(polys, len(names)), (m.line, m.column)
        elif block.mult_lines:
            missing = [x for x in names if x not in block.mult_lines]
            extra = [x for x in block.mult_lines if x not in names]
            if missing or extra:
                raise InputError(f"[mult] needs one line per generator (missing {missing}, unknown {extra})",
                                 block.line, 1)
            polys = [compile_polynomial(e.value, len(names), e.line, e.column)
                     for e in (block.mult_lines[x] for x in names)]
            first = block.mult_lines[names[0]]
            mult, where = make_mult(polys, len(names)), (first.line, 1)
        try:
            g = from_presentation(name.value, names, rels)
        except ValueError as exc:
            raise InputError(f"invalid presentation: {exc}", block.line, 1) from None
        if mult is not None:
            g = GroupSpec(g.name, g.generators, g.brackets, mult=mult, relations=g.relations)
            problems = g.verify(samples=24)
            problems += [f"[{names[i]},{names[j]}] is not the relation word" for (i, j), w in rels.items()
                         if g.commutator(g.generator(i), g.generator(j)) != g.evaluate(w)]
            if problems:
                raise InputError("mult polynomials are inconsistent with the presentation",
                                 *where, problems)
        return name.value, g

    def _build_order(self, block: Block, default: str, validate: bool):
        gref = block.get("group")
        G = self.group(gref.value, gref.line, gref.column)
        name = (block.get("name", required=False) or Entry(default, 0, 0)).value
        flag = block.get("flag")
        funcs = block.get("functionals")
        rows = parse_vectors(flag.value, flag.line, flag.column)
        phis = parse_vectors(funcs.value, funcs.line, funcs.column)
        for entry, vs in ((flag, rows), (funcs, phis)):
            for v in vs:
                if len(v) != G.rank:
                    raise InputError(f"vector of length {len(v)} in a rank-{G.rank} group", entry.line, entry.column)
        if len(rows) not in (G.rank - 1, G.rank) or len(phis) != G.rank:
            raise InputError(f"need {G.rank - 1} or {G.rank} flag rows and {G.rank} functionals",
                             flag.line, flag.column)
        if la.rank(rows) != len(rows):
            raise InputError("flag rows are linearly dependent", flag.line, flag.column)
        s = OrderScheme.from_rows(G, rows, phis)
        if validate:
            bad = s.validate()
            if bad:
                raise InputError("invalid order", block.line, 1, tuple(str(v) for v in bad))
        self.group_refs[name] = gref.value
        return name, s

    def _build_comm(self, block: Block, default: str, validate: bool):
        gref = block.get("group")
        G = self.group(gref.value, gref.line, gref.column)
        name = (block.get("name", required=False) or Entry(default, 0, 0)).value
        rows = block.get("rows", required=False)
        sources = [x for x in (rows, block.tau, block.images or None) if x is not None]
        if len(sources) != 1:
            raise InputError("a [comm] block needs exactly one of 'rows', 'tau p/q' or 'image' lines", block.line, 1)
        self.group_refs[name] = gref.value
        try:
            if block.tau is not None:
                t = parse_rational_at(block.tau.value, block.tau.line, block.tau.column)
                return name, tau(G, t.numerator, t.denominator)
            if rows is not None:
                m = parse_vectors(rows.value, rows.line, rows.column)
                if len(m) != G.rank or any(len(r) != G.rank for r in m):
                    raise InputError(f"need {G.rank} rows of length {G.rank}", rows.line, rows.column)
                self.raw_comms[name] = (G, la.matrix(m))
                return name, validate_comm(m, G) if validate else Commensuration(G, la.matrix(m))
            images = {}
            for gen, word, line, col in block.images:
                if gen not in G.generators:
                    raise InputError(f"unknown generator {gen!r}", line, 1)
                images[G.index_of(gen)] = G.evaluate(parse_word(G, word, line, col))
            cols = [G.to_log(images.get(i, G.generator(i))) for i in range(G.rank)]
            m = la.transpose(cols)
            self.raw_comms[name] = (G, m)
            return name, from_images(G, images) if validate else Commensuration(G, m)
        except NotACommensuration as exc:
            raise InputError(f"invalid commensuration: {exc}", block.line, 1) from None
        except ValueError as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(str(exc), block.line, 1) from None


def parse_input(text: str, workspace: Workspace | None = None, validate: bool = True) -> Workspace:
    ws = workspace or Workspace()
    ws.load(text, validate=validate)
    return ws


# -- emitters ---------------------------------------------------------------------------


def _fmt_vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _fmt_vecs(vs) -> str:
    return ";".join(_fmt_vec(v) for v in vs)


def group_reference(group: GroupSpec) -> str | None:
    """Registry name that rebuilds ``group``, if there is one."""
    try:
        if group_signature(get_group(group.name)) == group_signature(group):
            return group.name
    except (KeyError, ValueError):
        pass
    return None


def emit_group(group: GroupSpec) -> str:
    if group_reference(group):
        return f"[group]\nname = {group.name}\n"
    if group.brackets and not group.relations:
        raise ValueError("only groups built from a presentation can be written out")
    lines = ["[group]", f"name = {group.name}", "[generators]", ", ".join(group.generators), "[relations]"]
    for (i, j), word in sorted(group.relations.items()):
        rhs = " ".join(group.generators[k] if e == 1 else f"{group.generators[k]}^{e}" for k, e in word) or "e"
        lines.append(f"comm {group.generators[i]} {group.generators[j]} = {rhs}")
    return "\n".join(lines) + "\n"


def emit_order(scheme: OrderScheme, group_ref: str | None = None, name: str | None = None,
               inline: bool = False) -> str:
    ref = group_ref or scheme.group.name
    pairs = [("name", name)] if name else []
    pairs += [("group", ref), ("flag", _fmt_vecs(scheme.adapted_basis)),
              ("functionals", _fmt_vecs(scheme.functionals))]
    if inline:
        return "[order] " + " ".join(f"{k}={v}" for k, v in pairs)
    return "[order]\n" + "".join(f"{k} = {v}\n" for k, v in pairs)


def emit_comm(alpha: Commensuration, group_ref: str | None = None, name: str | None = None,
              inline: bool = False) -> str:
    ref = group_ref or alpha.group.name
    pairs = [("name", name)] if name else []
    pairs += [("group", ref), ("rows", _fmt_vecs(alpha.matrix))]
    if inline:
        return "[comm] " + " ".join(f"{k}={v}" for k, v in pairs)
    return "[comm]\n" + "".join(f"{k} = {v}\n" for k, v in pairs)


__all__ = [
    "InputError", "Workspace", "parse_input", "parse_blocks", "parse_element", "parse_element_list",
    "parse_vector", "parse_vectors", "parse_word", "emit_group", "emit_order", "emit_comm",
    "group_reference",
]
