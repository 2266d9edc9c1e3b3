"""Line-oriented text format for every domain object.

A file is a sequence of sections.  Each section starts with a header line
``kind NAME key value ...`` and continues with data lines up to the next
header.  ``#`` starts a comment.  Sections refer to each other by name, in
any order.  Bit vectors are strings of ``0``/``1`` (``-`` is the empty
vector); character i is the coefficient of basis vector i.

Kinds and their data lines::

    complex NAME dim n            d <bits>            (n lines, image of e_1..e_n)
    snake NAME base C l 3         (no data)
    chainmap NAME source S target T
                                  f <bits>            (one line per source basis vector)
    category NAME objects (X,Y)   hom (X,Y) n
                                  mu k (i0,..,ik) (b1,..,bk) -> <bits>
    map NAME source A target B    obj X Y
                                  f k (i0,..,ik) (b1,..,bk) -> <bits>
    module NAME over A            space X n
                                  mu k (i0,..,ik-1) (b1,..,bk) -> <bits>
    morphism NAME source M target N
                                  nu k (i0,..,ik-1) (b1,..,bk) -> <bits>
    conedecomp NAME pieces (X1,X2)
                                  u i <bits>          (one line per basis vector of X_i)
    tsmorphism NAME source (x,..) target (y,..)
                                  triple PHI ETA
    cobordism NAME category A tests (N1,..) ends (L1,..) positive L
                                  phi j k (..) (..) -> <bits>
                                  cmp k (..) (..) -> <bits>
    presentation NAME generators (a,b)
                                  rel (a,b)
    k0 NAME objects (X,Y,Z)       tri (X,Y,Z)
    profile NAME entries (1,0) exit 0

Only the raw data is validated at parse time (syntax, references, widths,
index ranges); algebraic conditions are left to the checkers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParseError

MAX_DIM = 4096
MAX_ARITY = 16
_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.'+]*\Z")
_BITS = re.compile(r"[01]+\Z")


@dataclass
class Token:
    text: str
    line: int
    col: int

    def error(self, msg: str, cls=ParseError) -> ParseError:
        return cls(msg, self.line, self.col)


@dataclass
class Line:
    tag: str
    values: tuple
    tok: Token
    value_toks: tuple = ()

    def at(self, i: int) -> Token:
        """Token of value i (falls back to the tag)."""
        try:
            return self.value_toks[i]
        except IndexError:
            return self.tok

    def text(self) -> str:
        return " ".join([self.tag] + [_fmt(v) for v in self.values])


@dataclass
class Section:
    kind: str
    name: str
    params: dict
    lines: list = field(default_factory=list)
    tok: Token | None = None

    def header(self) -> str:
        parts = [self.kind, self.name]
        for key, _ in HEADERS[self.kind]:
            parts += [key, _fmt(self.params[key])]
        return " ".join(parts)

    def tagged(self, tag: str) -> list:
        return [ln for ln in self.lines if ln.tag == tag]


class Bits(str):
    """A bit string value (kept distinct from names when formatting)."""


class Arrow(str):
    pass


def _fmt(v) -> str:
    if isinstance(v, Bits):
        return str(v) if v else "-"
    if isinstance(v, tuple):
        return "(" + ",".join(_fmt(x) for x in v) + ")"
    return str(v)


# ---------------------------------------------------------------------------
# tokens


def _int(tok: Token, limit: int = MAX_DIM) -> int:
    t = tok.text
    if not t.isdigit() or not t.isascii() or len(t) > 6:
        raise tok.error(f"expected a non-negative integer, got {t!r}")
    v = int(t)
    if v > limit:
        raise tok.error(f"value {v} exceeds limit {limit}")
    return v


def _name(tok: Token) -> str:
    if not _NAME.match(tok.text):
        raise tok.error(f"invalid name {tok.text!r}")
    return tok.text


def _opt_name(tok: Token) -> str:
    return "-" if tok.text == "-" else _name(tok)


def _tuple(tok: Token, item) -> tuple:
    t = tok.text
    if len(t) < 2 or t[0] != "(" or t[-1] != ")":
        raise tok.error(f"expected a parenthesized tuple, got {t!r}")
    inner = t[1:-1]
    if not inner:
        return ()
    out, col = [], tok.col + 1
    for part in inner.split(","):
        out.append(item(Token(part, tok.line, col)))
        col += len(part) + 1
    return tuple(out)


def _names(tok: Token) -> tuple:
    return _tuple(tok, _name)


def _ints(tok: Token) -> tuple:
    return _tuple(tok, _int)


def _bits(tok: Token) -> Bits:
    t = tok.text
    if t == "-":
        return Bits("")
    if not _BITS.match(t):
        raise tok.error(f"expected a bit string, got {t!r}")
    if len(t) > MAX_DIM:
        raise tok.error("bit string too long")
    return Bits(t)


def _arrow(tok: Token) -> Arrow:
    if tok.text != "->":
        raise tok.error(f"expected '->', got {tok.text!r}")
    return Arrow("->")


def tokenize(text: str):
    """Yield (line number, [tokens]) for non-empty lines with comments removed."""
    for n, raw in enumerate(text.split("\n"), start=1):
        cut = raw.find("#")
        body = raw if cut < 0 else raw[:cut]
        toks = []
        for m in re.finditer(r"\S+", body):
            toks.append(Token(m.group(), n, m.start() + 1))
        if toks:
            yield n, toks


# ---------------------------------------------------------------------------
# grammar

HEADERS = {
    "complex": [("dim", _int)],
    "snake": [("base", _name), ("l", _int)],
    "chainmap": [("source", _name), ("target", _name)],
    "category": [("objects", _names)],
    "map": [("source", _name), ("target", _name)],
    "module": [("over", _name)],
    "morphism": [("source", _name), ("target", _name)],
    "conedecomp": [("pieces", _names)],
    "tsmorphism": [("source", _names), ("target", _names)],
    "cobordism": [("category", _name), ("tests", _names), ("ends", _names), ("positive", _opt_name)],
    "presentation": [("generators", _names)],
    "k0": [("objects", _names)],
    "profile": [("entries", _ints), ("exit", _int)],
}

_TABLE = [lambda t: _int(t, MAX_ARITY), _names, _ints, _arrow, _bits]
LINES = {
    "complex": {"d": ([_bits], False)},
    "snake": {},
    "chainmap": {"f": ([_bits], False)},
    "category": {"hom": ([_names, _int], True), "mu": (_TABLE, True)},
    "map": {"obj": ([_name, _name], True), "f": (_TABLE, True)},
    "module": {"space": ([_name, _int], True), "mu": (_TABLE, True)},
    "morphism": {"nu": (_TABLE, True)},
    "conedecomp": {"u": ([lambda t: _int(t, MAX_DIM), _bits], False)},
    "tsmorphism": {"triple": ([_name, _name], False)},
    "cobordism": {"phi": ([lambda t: _int(t, MAX_ARITY)] + _TABLE, True), "cmp": (_TABLE, True)},
    "presentation": {"rel": ([_names], True)},
    "k0": {"tri": ([_names], True)},
    "profile": {},
}


@dataclass
class Document:
    sections: dict  # name -> Section, in file order

    def of_kind(self, kind: str) -> list:
        return [s for s in self.sections.values() if s.kind == kind]

    def get(self, name: str, kinds, tok: Token) -> Section:
        s = self.sections.get(name)
        if s is None or s.kind not in kinds:
            want = "/".join(kinds)
            raise tok.error(f"no {want} section named {name!r}")
        return s


def _parse_header(toks: list) -> Section:
    kind = toks[0].text
    if kind not in HEADERS:
        raise toks[0].error(f"unknown section kind {kind!r}")
    if len(toks) < 2:
        raise toks[0].error("missing section name")
    name = _name(toks[1])
    spec = HEADERS[kind]
    rest = toks[2:]
    if len(rest) != 2 * len(spec):
        raise toks[0].error(f"{kind} header needs: " + " ".join(k + " <value>" for k, _ in spec))
    params = {}
    for (key, conv), ktok, vtok in zip(spec, rest[0::2], rest[1::2]):
        if ktok.text != key:
            raise ktok.error(f"expected key {key!r}, got {ktok.text!r}")
        params[key] = conv(vtok)
    return Section(kind, name, params, [], toks[0])


def _parse_line(sec: Section, toks: list) -> Line:
    spec = LINES[sec.kind].get(toks[0].text)
    if spec is None:
        raise toks[0].error(f"unexpected line {toks[0].text!r} in {sec.kind} section")
    convs, _ = spec
    if len(toks) - 1 != len(convs):
        raise toks[0].error(f"{toks[0].text} line needs {len(convs)} fields, got {len(toks) - 1}")
    return Line(toks[0].text, tuple(c(t) for c, t in zip(convs, toks[1:])), toks[0], tuple(toks[1:]))


def parse(text: str) -> Document:
    """Parse and validate a document; raises ParseError with line and column."""
    if not isinstance(text, str):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc.reason}", 1, 1) from None
    sections: dict = {}
    cur = None
    for _, toks in tokenize(text):
        head = toks[0].text
        if head in HEADERS:
            cur = _parse_header(toks)
            if cur.name in sections:
                raise toks[1].error(f"duplicate section name {cur.name!r}")
            sections[cur.name] = cur
        elif cur is None:
            raise toks[0].error(f"data line before any section header: {head!r}")
        else:
            cur.lines.append(_parse_line(cur, toks))
    doc = Document(sections)
    for sec in sections.values():
        _VALIDATE[sec.kind](doc, sec)
    return doc


# ---------------------------------------------------------------------------
# validation


def _need_width(tok: Token, b: Bits, n: int, what: str) -> None:
    if len(b) != n:
        raise tok.error(f"{what}: expected width {n}, got {len(b)}", DimensionError)


def _ordered(sec: Section, tag: str, count: int, width: int) -> None:
    rows = sec.tagged(tag)
    if len(rows) != count:
        raise sec.tok.error(f"{sec.kind} {sec.name}: expected {count} '{tag}' lines, got {len(rows)}", DimensionError)
    for ln in rows:
        _need_width(ln.at(0), ln.values[0], width, f"'{tag}' row")


def complex_dim(doc: Document, name: str, tok: Token, kinds=("complex", "snake", "conedecomp")) -> int:
    s = doc.get(name, kinds, tok)
    if s.kind == "complex":
        return s.params["dim"]
    if s.kind == "snake":
        return s.params["l"] * complex_dim(doc, s.params["base"], s.tok, ("complex",))
    return sum(complex_dim(doc, p, s.tok, ("complex", "snake")) for p in s.params["pieces"])


def _v_complex(doc, sec):
    n = sec.params["dim"]
    _ordered(sec, "d", n, n)


def _v_snake(doc, sec):
    complex_dim(doc, sec.params["base"], sec.tok, ("complex",))


def _v_chainmap(doc, sec):
    a = complex_dim(doc, sec.params["source"], sec.tok)
    b = complex_dim(doc, sec.params["target"], sec.tok)
    _ordered(sec, "f", a, b)


def _unique(sec, keyfn):
    seen = set()
    for ln in sec.lines:
        k = keyfn(ln)
        if k is None:
            continue
        if k in seen:
            raise ln.tok.error(f"duplicate entry {ln.text()!r}")
        seen.add(k)


def _cat_dims(doc, sec) -> dict:
    objs = sec.params["objects"]
    if len(set(objs)) != len(objs):
        raise sec.tok.error("repeated object")
    dims = {}
    for ln in sec.tagged("hom"):
        key, n = ln.values
        if len(key) != 2 or not all(o in objs for o in key):
            raise ln.tok.error(f"hom needs two declared objects, got {_fmt(key)}")
        if key in dims:
            raise ln.tok.error(f"duplicate hom {_fmt(key)}")
        dims[key] = n
    return dims


def _dim(dims: dict, key) -> int:
    return dims.get(key, 0)


def _check_entry(ln: Line, objs_ok, in_dims: list, out: int, n_objs: int, k_offset: int = 0) -> None:
    """Validate a table line ``k (objs) (basis) -> bits``."""
    vals = ln.values[k_offset:]
    k, objs, basis, _, bits_ = vals

    def t(i):
        return ln.at(k_offset + i)

    if k < 1:
        raise t(0).error("arity must be at least 1")
    if len(objs) != n_objs(k):
        raise t(1).error(f"arity {k} needs {n_objs(k)} objects, got {len(objs)}")
    if len(basis) != k:
        raise t(2).error(f"arity {k} needs {k} basis indices, got {len(basis)}")
    for o in objs:
        if not objs_ok(o):
            raise t(1).error(f"unknown object {o!r}")
    dims = in_dims(objs)
    for b, n in zip(basis, dims):
        if b >= n:
            raise t(2).error(f"basis index {b} out of range for dimension {n}", DimensionError)
    _need_width(t(4), bits_, out(objs), "table value")


def _table_key(ln: Line, tag: str, offset: int = 0):
    if ln.tag != tag:
        return None
    v = ln.values
    return v[:offset] + (v[offset + 1], v[offset + 2])


def _v_category(doc, sec):
    objs = sec.params["objects"]
    dims = _cat_dims(doc, sec)
    ok = objs.__contains__
    for ln in sec.tagged("mu"):
        _check_entry(ln, ok, lambda o: [_dim(dims, (o[i], o[i + 1])) for i in range(len(o) - 1)],
                     lambda o: _dim(dims, (o[0], o[-1])), lambda k: k + 1)
    _unique(sec, lambda ln: _table_key(ln, "mu"))


def _category_of(doc, name, tok):
    s = doc.get(name, ("category",), tok)
    return s, _cat_dims(doc, s)


def _v_map(doc, sec):
    a, da = _category_of(doc, sec.params["source"], sec.tok)
    b, db = _category_of(doc, sec.params["target"], sec.tok)
    omap = {}
    for ln in sec.tagged("obj"):
        x, y = ln.values
        if x not in a.params["objects"] or y not in b.params["objects"]:
            raise ln.tok.error(f"object map {x} -> {y} uses undeclared objects")
        if x in omap:
            raise ln.tok.error(f"object {x} mapped twice")
        omap[x] = y
    missing = [x for x in a.params["objects"] if x not in omap]
    if missing:
        raise sec.tok.error(f"object map misses {missing[0]!r}")
    for ln in sec.tagged("f"):
        _check_entry(ln, omap.__contains__,
                     lambda o: [_dim(da, (o[i], o[i + 1])) for i in range(len(o) - 1)],
                     lambda o: _dim(db, (omap[o[0]], omap[o[-1]])), lambda k: k + 1)
    _unique(sec, lambda ln: _table_key(ln, "f"))


def _module_dims(doc, sec) -> dict:
    cat, _ = _category_of(doc, sec.params["over"], sec.tok)
    dims = {}
    for ln in sec.tagged("space"):
        x, n = ln.values
        if x not in cat.params["objects"]:
            raise ln.tok.error(f"unknown object {x!r}")
        if x in dims:
            raise ln.tok.error(f"duplicate space {x!r}")
        dims[x] = n
    return dims


def _mixed_check(ln, objs, cdims, in_space, out_space, offset=0):
    _check_entry(ln, objs.__contains__,
                 lambda o: [_dim(cdims, (o[i], o[i + 1])) for i in range(len(o) - 1)] + [in_space(o[-1])],
                 lambda o: out_space(o[0]), lambda k: k, offset)


def _v_module(doc, sec):
    cat, cdims = _category_of(doc, sec.params["over"], sec.tok)
    dims = _module_dims(doc, sec)
    for ln in sec.tagged("mu"):
        _mixed_check(ln, cat.params["objects"], cdims, lambda x: dims.get(x, 0), lambda x: dims.get(x, 0))
    _unique(sec, lambda ln: _table_key(ln, "mu"))


def _v_morphism(doc, sec):
    ms = doc.get(sec.params["source"], ("module",), sec.tok)
    mt = doc.get(sec.params["target"], ("module",), sec.tok)
    if ms.params["over"] != mt.params["over"]:
        raise sec.tok.error("source and target modules are over different categories")
    cat, cdims = _category_of(doc, ms.params["over"], ms.tok)
    ds, dt = _module_dims(doc, ms), _module_dims(doc, mt)
    for ln in sec.lines:
        _mixed_check(ln, cat.params["objects"], cdims, lambda x: ds.get(x, 0), lambda x: dt.get(x, 0))
    _unique(sec, lambda ln: _table_key(ln, "nu"))


def _v_conedecomp(doc, sec):
    pieces = sec.params["pieces"]
    if not pieces:
        raise sec.tok.error("a cone decomposition needs at least one piece")
    dims = [complex_dim(doc, p, sec.tok, ("complex", "snake")) for p in pieces]
    rows: dict = {}
    for ln in sec.lines:
        i, b = ln.values
        if not 1 <= i <= len(pieces):
            raise ln.at(0).error(f"piece index {i} out of range")
        _need_width(ln.at(1), b, sum(dims[: i - 1]), f"u {i} row")
        rows[i] = rows.get(i, 0) + 1
    for i, c in rows.items():
        if c != dims[i - 1]:
            raise sec.tok.error(f"u {i} needs {dims[i - 1]} rows, got {c}", DimensionError)


def _v_tsmorphism(doc, sec):
    trips = sec.tagged("triple")
    if len(trips) != len(sec.params["source"]):
        raise sec.tok.error("one triple per source object")
    for ln in trips:
        doc.get(ln.values[0], ("chainmap",), ln.tok)
        doc.get(ln.values[1], ("conedecomp",), ln.tok)
    for n in sec.params["source"] + sec.params["target"]:
        complex_dim(doc, n, sec.tok, ("complex", "snake"))


def _v_cobordism(doc, sec):
    cat, cdims = _category_of(doc, sec.params["category"], sec.tok)
    objs = cat.params["objects"]
    tests, ends, pos = sec.params["tests"], sec.params["ends"], sec.params["positive"]
    if not tests or not ends:
        raise sec.tok.error("need at least one test object and one end")
    for o in tests + ends + (() if pos == "-" else (pos,)):
        if o not in objs:
            raise sec.tok.error(f"unknown object {o!r}")
    if len(set(tests)) != len(tests):
        raise sec.tok.error("repeated test object")
    m = len(ends)

    def tail(x, j):
        return sum(_dim(cdims, (x, ends[t])) for t in range(j))

    for ln in sec.tagged("phi"):
        j = ln.values[0]
        if not 2 <= j <= m:
            raise ln.tok.error(f"connecting index {j} out of range 2..{m}")
        _mixed_check(ln, tests, cdims, lambda x: _dim(cdims, (x, ends[j - 1])), lambda x: tail(x, j - 1), 1)
    cmp = sec.tagged("cmp")
    if cmp and pos == "-":
        raise cmp[0].tok.error("comparison given without a positive end")
    for ln in cmp:
        _mixed_check(ln, tests, cdims, lambda x: _dim(cdims, (x, pos)), lambda x: tail(x, m))
    _unique(sec, lambda ln: _table_key(ln, "phi", 1) if ln.tag == "phi" else _table_key(ln, "cmp"))


def _v_presentation(doc, sec):
    gens = sec.params["generators"]
    if len(set(gens)) != len(gens):
        raise sec.tok.error("repeated generator")
    for ln in sec.lines:
        for g in ln.values[0]:
            if g not in gens:
                raise ln.tok.error(f"unknown generator {g!r}")


def _v_k0(doc, sec):
    objs = sec.params["objects"]
    if len(set(objs)) != len(objs):
        raise sec.tok.error("repeated object")
    for ln in sec.lines:
        tri = ln.values[0]
        if len(tri) != 3:
            raise ln.tok.error("a triangle has three objects")
        for o in tri:
            if o != "0" and o not in objs:
                raise ln.at(0).error(f"unknown object {o!r}")


def _v_profile(doc, sec):
    e = sec.params["entries"]
    if not e or any(v > 1 for v in e) or sec.params["exit"] > 1:
        raise sec.tok.error("profile entries and exit must be 0 or 1, with at least one entry")


_VALIDATE = {
    "complex": _v_complex,
    "snake": _v_snake,
    "chainmap": _v_chainmap,
    "category": _v_category,
    "map": _v_map,
    "module": _v_module,
    "morphism": _v_morphism,
    "conedecomp": _v_conedecomp,
    "tsmorphism": _v_tsmorphism,
    "cobordism": _v_cobordism,
    "presentation": _v_presentation,
    "k0": _v_k0,
    "profile": _v_profile,
}


# ---------------------------------------------------------------------------
# canonical form


def serialize(doc: Document) -> str:
    """Sections sorted by (kind, name); table lines sorted, ordered lines kept."""
    out = []
    for sec in sorted(doc.sections.values(), key=lambda s: (s.kind, s.name)):
        block = [sec.header()]
        spec = LINES[sec.kind]
        ordered = [ln.text() for ln in sec.lines if not spec[ln.tag][1]]
        if sec.kind == "conedecomp":  # rows keep their order inside each piece
            ordered = [ln.text() for ln in sorted((x for x in sec.lines), key=lambda ln: ln.values[0])]
        table = sorted(ln.text() for ln in sec.lines if spec[ln.tag][1] and not _zero_entry(ln))
        block += ordered + table
        out.append("\n".join(block))
    return "\n\n".join(out) + "\n" if out else ""


def _zero_entry(ln: Line) -> bool:
    v = ln.values
    return len(v) >= 2 and isinstance(v[-2], Arrow) and "1" not in v[-1]


def canonicalize(text: str) -> str:
    return serialize(parse(text))


# ---------------------------------------------------------------------------
# building domain objects


class Builder:
    """Resolves sections into domain objects, caching by name."""

    def __init__(self, doc: Document, cap: int = 4):
        self.doc = doc
        self.cap = cap
        self.cache: dict = {}

    def __call__(self, name: str):
        if name not in self.cache:
            sec = self.doc.sections[name]
            self.cache[name] = getattr(self, "_b_" + sec.kind)(sec)
        return self.cache[name]

    def complex(self, name: str):
        """Chain complex named ``name`` (snake and cone decomposition sections give their totals)."""
        obj = self(name)
        return getattr(obj, "total", obj)

    def _b_complex(self, sec):
        from .chain import ChainComplex
        from .f2 import vec_from_str

        return ChainComplex.from_images([vec_from_str(ln.values[0]) for ln in sec.lines], sec.params["dim"])

    def _b_snake(self, sec):
        from .cobordism import build_snake

        return build_snake(self(sec.params["base"]), sec.params["l"])

    def _b_chainmap(self, sec):
        from .chain import ChainMap
        from .f2 import BitMatrix, vec_from_str

        s, t = self.complex(sec.params["source"]), self.complex(sec.params["target"])
        return ChainMap(s, t, BitMatrix.from_columns([vec_from_str(ln.values[0]) for ln in sec.lines], t.dim))

    def _table(self, lines, in_shape, out_dim, offset=0) -> dict:
        comps: dict = {}
        for ln in lines:
            k, objs, basis, _, b = ln.values[offset:]
            if k > self.cap:
                raise ln.at(offset).error(f"arity {k} exceeds the arity cap {self.cap} (raise --arity-cap)",
                                          DimensionError)
            if objs not in comps:
                comps[objs] = np.zeros(tuple(in_shape(objs)) + (out_dim(objs),), dtype=np.uint8)
            comps[objs][basis] = np.frombuffer(b.encode(), dtype=np.uint8) - ord("0")
        return comps

    def _b_category(self, sec):
        from .category import AInfCategory

        dims = _cat_dims(self.doc, sec)
        objs = sec.params["objects"]
        full = {(x, y): dims.get((x, y), 0) for x in objs for y in objs}
        comps = self._table(sec.tagged("mu"), lambda o: [full[(o[i], o[i + 1])] for i in range(len(o) - 1)],
                            lambda o: full[(o[0], o[-1])])
        return AInfCategory(sec.name, objs, full, comps, self.cap)

    def _b_map(self, sec):
        from .multilinear import ExtendedMap

        A, B = self(sec.params["source"]), self(sec.params["target"])
        omap = {ln.values[0]: ln.values[1] for ln in sec.tagged("obj")}
        comps = self._table(sec.tagged("f"), lambda o: [A.dim(o[i], o[i + 1]) for i in range(len(o) - 1)],
                            lambda o: B.dim(omap[o[0]], omap[o[-1]]))
        return ExtendedMap(A.hom, B.hom, omap, comps, self.cap)

    def _b_module(self, sec):
        from .modules import AInfModule

        A = self(sec.params["over"])
        dims = {x: 0 for x in A.objects}
        dims.update({ln.values[0]: ln.values[1] for ln in sec.tagged("space")})
        comps = self._table(sec.tagged("mu"),
                            lambda o: [A.dim(o[i], o[i + 1]) for i in range(len(o) - 1)] + [dims[o[-1]]],
                            lambda o: dims[o[0]])
        return AInfModule.build(A, sec.name, dims, comps)

    def _b_morphism(self, sec):
        from .modules import ModuleMorphism

        M, N = self(sec.params["source"]), self(sec.params["target"])
        A = M.base
        comps = self._table(sec.lines, lambda o: [A.dim(o[i], o[i + 1]) for i in range(len(o) - 1)] + [M.dim(o[-1])],
                            lambda o: N.dim(o[0]))
        return ModuleMorphism.build(M, N, comps)

    def _b_conedecomp(self, sec):
        from .cones import strict_decomposition
        from .f2 import BitMatrix, vec_from_str

        pieces = [self.complex(p) for p in sec.params["pieces"]]
        cols: dict = {i: [] for i in range(1, len(pieces) + 1)}
        for ln in sec.lines:
            cols[ln.values[0]].append(vec_from_str(ln.values[1]))
        attach, ydim = [], 0
        for i, x in enumerate(pieces, start=1):
            c = cols[i] or [0] * x.dim
            attach.append(BitMatrix.from_columns(c, ydim))
            ydim += x.dim
        return strict_decomposition(pieces, attach)

    def _b_tsmorphism(self, sec):
        from .cones import TSMorphism, TSTriple

        trips = tuple(TSTriple(self(ln.values[0]), self(ln.values[1])) for ln in sec.lines)
        src = tuple(self.complex(n) for n in sec.params["source"])
        tgt = tuple(self.complex(n) for n in sec.params["target"])
        return TSMorphism(src, tgt, trips)

    def _b_cobordism(self, sec):
        from .cobordism import CobordismDatum

        A = self(sec.params["category"])
        tests, ends = sec.params["tests"], sec.params["ends"]
        pos = sec.params["positive"]

        def cat_shape(o):
            return [A.dim(o[i], o[i + 1]) for i in range(len(o) - 1)]

        def tail(x, j):
            return sum(A.dim(x, ends[t]) for t in range(j))

        connecting = []
        for j in range(2, len(ends) + 1):
            lines = [ln for ln in sec.tagged("phi") if ln.values[0] == j]
            connecting.append(self._table(lines, lambda o: cat_shape(o) + [A.dim(o[-1], ends[j - 1])],
                                          lambda o: tail(o[0], j - 1), 1))
        cmp = None
        if pos != "-":
            cmp = self._table(sec.tagged("cmp"), lambda o: cat_shape(o) + [A.dim(o[-1], pos)],
                              lambda o: tail(o[0], len(ends)))
        return CobordismDatum(A, tests, ends, connecting, None if pos == "-" else pos, cmp, sec.name)

    def _b_presentation(self, sec):
        from .ktheory import GroupPresentation

        p = GroupPresentation(sec.params["generators"])
        return p.with_relations([p.vector(ln.values[0]) for ln in sec.lines])

    def _b_k0(self, sec):
        from .ktheory import k0_from_triangles

        return k0_from_triangles(sec.params["objects"], [ln.values[0] for ln in sec.lines])

    def _b_profile(self, sec):
        from .cones import MorseIndexProfile

        return MorseIndexProfile(tuple(sec.params["entries"]), sec.params["exit"])


def load(text: str, cap: int = 4) -> dict:
    """Parse and build every section: {name: domain object}."""
    doc = parse(text)
    b = Builder(doc, cap)
    return {name: b(name) for name in doc.sections}


# ---------------------------------------------------------------------------
# emitting domain objects


class Emitter:
    """Collects sections for domain objects, naming complexes on first sight."""

    def __init__(self, prefix: str = "X"):
        self.sections: dict = {}
        self.names: dict = {}
        self.prefix = prefix

    def _add(self, kind: str, name: str, params: dict, lines: list) -> str:
        if name in self.sections:
            raise ValueError(f"duplicate name {name}")
        tok = Token(kind, 0, 0)
        self.sections[name] = Section(kind, name, params, [Line(t, v, tok) for t, v in lines], tok)
        return name

    def complex(self, c, name: str | None = None) -> str:
        from .f2 import vec_to_str

        if c in self.names:
            return self.names[c]
        name = name or f"{self.prefix}{len(self.names)}"
        lines = [("d", (Bits(vec_to_str(col, c.dim)),)) for col in c.d.columns]
        self.names[c] = self._add("complex", name, {"dim": c.dim}, lines)
        return name

    def chainmap(self, f, name: str, source: str | None = None, target: str | None = None) -> str:
        from .f2 import vec_to_str

        s = source or self.complex(f.source)
        t = target or self.complex(f.target)
        lines = [("f", (Bits(vec_to_str(col, f.target.dim)),)) for col in f.f.columns]
        return self._add("chainmap", name, {"source": s, "target": t}, lines)

    def conedecomp(self, eta, name: str) -> str:
        from .cones import strictify
        from .f2 import vec_to_str

        if not eta.is_strict():
            eta = strictify(eta)[0]
        pieces = tuple(self.complex(p) for p in eta.linearization)
        lines = []
        for i, u in enumerate(eta.attaching_maps(), start=1):
            if u.is_zero():
                continue
            lines += [("u", (i, Bits(vec_to_str(col, u.rows)))) for col in u.columns]
        return self._add("conedecomp", name, {"pieces": pieces}, lines)

    def tsmorphism(self, Phi, name: str) -> str:
        from .cones import strictify
        from .chain import ChainMap

        src = tuple(self.complex(x) for x in Phi.source)
        tgt = tuple(self.complex(y) for y in Phi.target)
        lines = []
        for n, trip in enumerate(Phi.summands):
            eta, phi = trip.eta, trip.phi
            if not eta.is_strict():
                eta, J = strictify(eta)
                phi = ChainMap(phi.source, eta.total, J.f @ phi.f)
            e = self.conedecomp(eta, f"{name}.eta{n}")
            p = self.chainmap(phi, f"{name}.phi{n}", target=e)
            lines.append(("triple", (p, e)))
        return self._add("tsmorphism", name, {"source": src, "target": tgt}, lines)

    @staticmethod
    def _rows(tag: str, comps: dict, lead: tuple = ()) -> list:
        out = []
        for key, arr in comps.items():
            k = arr.ndim - 1
            for idx in np.ndindex(*arr.shape[:-1]):
                v = arr[idx] & 1
                if v.any():
                    bits_ = Bits("".join("1" if x else "0" for x in v))
                    out.append((tag, lead + (k, tuple(key), tuple(int(i) for i in idx), Arrow("->"), bits_)))
        return out

    def category(self, A, name: str | None = None) -> str:
        name = name or A.name
        lines = [("hom", ((x, y), n)) for (x, y), n in A.dims.items() if n]
        lines += self._rows("mu", A.mu.components)
        return self._add("category", name, {"objects": tuple(A.objects)}, lines)

    def functor(self, F, name: str, source: str, target: str) -> str:
        lines = [("obj", (x, y)) for x, y in F.index_map.items()]
        lines += self._rows("f", F.components)
        return self._add("map", name, {"source": source, "target": target}, lines)

    def module(self, M, name: str, over: str) -> str:
        lines = [("space", (x, M.dim(x))) for x in M.base.objects if M.dim(x)]
        lines += self._rows("mu", M.action.components)
        return self._add("module", name, {"over": over}, lines)

    def morphism(self, nu, name: str, source: str, target: str) -> str:
        return self._add("morphism", name, {"source": source, "target": target}, self._rows("nu", nu.nu.components))

    def cobordism(self, V, name: str, category: str) -> str:
        lines = []
        for j, comps in enumerate(V.connecting, start=2):
            lines += self._rows("phi", comps, (j,))
        if V.comparison is not None:
            lines += self._rows("cmp", V.comparison)
        params = {"category": category, "tests": tuple(V.tests), "ends": tuple(V.ends),
                  "positive": "-" if V.positive is None else V.positive}
        return self._add("cobordism", name, params, lines)

    def presentation(self, P, name: str) -> str:
        lines = [("rel", (tuple(g for i, g in enumerate(P.generators) if rel >> i & 1),)) for rel in P.relations]
        return self._add("presentation", name, {"generators": tuple(P.generators)}, lines)

    def k0(self, K, name: str) -> str:
        lines = [("tri", (tuple(t),)) for t in K.triangles]
        return self._add("k0", name, {"objects": tuple(K.generators)}, lines)

    def profile(self, p, name: str) -> str:
        return self._add("profile", name, {"entries": tuple(p.entries), "exit": p.exit}, [])

    def snake(self, base_name: str, l: int, name: str) -> str:
        return self._add("snake", name, {"base": base_name, "l": l}, [])

    def document(self) -> Document:
        return Document(dict(self.sections))

    def text(self) -> str:
        return serialize(self.document())
