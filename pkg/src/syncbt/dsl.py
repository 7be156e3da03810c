"""Text format for tree definitions and experiment configurations.

Grammar (line comments with '#'):

    node      := composite | leaf
    composite := ("sequence" | "fallback" | "parallel"
                  | "parallel_abs" "barriers" "=" "[" num ("," num)* "]"
                  | "parallel_rel" "delta" "=" num) "{" node+ "}"
    leaf      := ("action" | "condition") ident (param "=" value)*

An optional "[experiment]" section follows the tree as plain key = value
lines, plus any number of "sweep <path> = v1, v2, ..." lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

COMPOSITE_KINDS = ("sequence", "fallback", "parallel", "parallel_abs", "parallel_rel")
LEAF_KINDS = ("action", "condition")

# model name -> (required params, optional params)
MODELS = {
    "noisy_linear": (("alpha",), ("omega",)),
    "profile_straight": (("increment",), ()),
    "profile_sigmoid": (("midpoint", "steepness"), ()),
    "perpetual": (("bound", "drift", "correction"), ("initial_error",)),
}
PROGRESS_MODELS = frozenset(MODELS)

EXPERIMENT_KEYS = {
    "trials": int,
    "base_seed": int,
    "dt": float,
    "max_ticks": int,
    "metric": str,
    "window": str,
    "p_bar": float,
    "t_expected": float,
    "child": str,
}
METRICS = ("progress_distance", "predictability_distance")


class ParseError(Exception):
    def __init__(self, message, line, col, token=""):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.token = token


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" | "warning"
    message: str
    line: int
    col: int


@dataclass
class NodeSpec:
    kind: str
    id: str
    params: dict
    children: list
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @property
    def is_leaf(self):
        return self.kind in LEAF_KINDS


@dataclass
class TreeDocument:
    source: str = field(compare=False)
    root: NodeSpec
    experiment: dict | None


_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r]+)
      | (?P<comment>\#[^\n]*)
      | (?P<nl>\n)
      | (?P<number>[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<sym>[{}\[\],=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number" | "ident" | "sym" | "eof"
    text: str
    line: int
    col: int


def _tokenize(text, line_offset=0):
    tokens = []
    line, col = 1 + line_offset, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, text[pos])
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            col = 1
        else:
            if kind not in ("ws", "comment"):
                tokens.append(_Token(kind, value, line, col))
            col += len(value)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead=0):
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self):
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col, tok.text)

    def expect_sym(self, sym):
        tok = self.next()
        if tok.kind != "sym" or tok.text != sym:
            self.fail(f"expected {sym!r}, found {tok.text!r}", tok)
        return tok

    def expect_ident(self, what):
        tok = self.next()
        if tok.kind != "ident":
            self.fail(f"expected {what}, found {tok.text!r}", tok)
        return tok

    def parse_number(self):
        tok = self.next()
        if tok.kind != "number":
            self.fail(f"expected a number, found {tok.text!r}", tok)
        return float(tok.text), tok

    def parse_value(self):
        tok = self.peek()
        if tok.kind == "number":
            return self.parse_number()[0]
        if tok.kind == "ident":
            self.next()
            if tok.text == "true":
                return True
            if tok.text == "false":
                return False
            return tok.text
        if tok.kind == "sym" and tok.text == "[":
            return self.parse_numlist()
        self.fail(f"expected a value, found {tok.text!r}", tok)

    def parse_numlist(self):
        self.expect_sym("[")
        values = []
        if self.peek().text != "]":
            values.append(self.parse_number()[0])
            while self.peek().text == ",":
                self.next()
                values.append(self.parse_number()[0])
        self.expect_sym("]")
        return tuple(values)

    def parse_node(self):
        tok = self.peek()
        if tok.kind != "ident":
            self.fail(f"expected a node keyword, found {tok.text!r}", tok)
        if tok.text in COMPOSITE_KINDS:
            return self.parse_composite()
        if tok.text in LEAF_KINDS:
            return self.parse_leaf()
        self.fail(f"unknown keyword {tok.text!r}", tok)

    def parse_composite(self):
        kw = self.next()
        params = {}
        if kw.text == "parallel_abs":
            name = self.expect_ident("'barriers'")
            if name.text != "barriers":
                self.fail("parallel_abs requires 'barriers = [...]'", name)
            self.expect_sym("=")
            barriers = self.parse_numlist()
            for value in barriers:
                if not 0.0 < value <= 1.0:
                    self.fail(f"barrier {value} outside (0, 1]", name)
            for a, b in zip(barriers, barriers[1:]):
                if not a < b:
                    self.fail("barriers must be strictly increasing", name)
            params["barriers"] = barriers
        elif kw.text == "parallel_rel":
            name = self.expect_ident("'delta'")
            if name.text != "delta":
                self.fail("parallel_rel requires 'delta = <num>'", name)
            self.expect_sym("=")
            delta, tok = self.parse_number()
            if not 0.0 <= delta <= 1.0:
                self.fail(f"delta {delta} outside [0, 1]", tok)
            params["delta"] = delta
        self.expect_sym("{")
        children = []
        while not (self.peek().kind == "sym" and self.peek().text == "}"):
            if self.peek().kind == "eof":
                self.fail("unterminated composite: expected '}'")
            children.append(self.parse_node())
        close = self.expect_sym("}")
        if not children:
            self.fail("composite must have at least one child", close)
        return NodeSpec(kw.text, "", params, children, kw.line, kw.col)

    def parse_leaf(self):
        kw = self.next()
        name = self.expect_ident("a leaf name")
        params = {}
        while (self.peek().kind == "ident"
               and self.peek(1).kind == "sym" and self.peek(1).text == "="):
            key = self.next()
            if key.text in COMPOSITE_KINDS or key.text in LEAF_KINDS:
                self.fail(f"{key.text!r} cannot be used as a parameter name", key)
            self.next()  # '='
            if key.text in params:
                self.fail(f"duplicate parameter {key.text!r}", key)
            params[key.text] = self.parse_value()
        leaf = NodeSpec(kw.text, name.text, params, [], kw.line, kw.col)
        _check_leaf_params(self, leaf, kw)
        return leaf


def _check_leaf_params(parser, leaf, tok):
    if leaf.kind == "condition":
        extra = set(leaf.params) - {"value"}
        if extra:
            parser.fail(f"unknown condition parameter {sorted(extra)[0]!r}", tok)
        value = leaf.params.get("value", True)
        if not isinstance(value, bool):
            parser.fail("condition 'value' must be true or false", tok)
        return
    model = leaf.params.get("model", "noisy_linear")
    if model not in MODELS:
        parser.fail(f"unknown progress model {model!r}", tok)
    required, optional = MODELS[model]
    allowed = set(required) | set(optional) | {"model"}
    for key, value in leaf.params.items():
        if key not in allowed:
            parser.fail(f"unknown parameter {key!r} for model {model!r}", tok)
        if key != "model" and not isinstance(value, float):
            parser.fail(f"parameter {key!r} must be a number", tok)
    for key in required:
        if key not in leaf.params:
            parser.fail(f"model {model!r} requires parameter {key!r}", tok)


def _assign_ids(root):
    """Composites get stable preorder ids: 'root', then n1, n2, ..."""
    counter = 0

    def walk(node, is_root):
        nonlocal counter
        if not node.is_leaf:
            if is_root:
                node.id = "root"
            else:
                counter += 1
                node.id = f"n{counter}"
            for child in node.children:
                walk(child, False)

    walk(root, True)


def _check_unique_ids(root):
    seen = {}
    stack = [root]
    while stack:
        node = stack.pop()
        if node.id in seen:
            raise ParseError(f"duplicate node id {node.id!r}", node.line, node.col)
        seen[node.id] = node
        stack.extend(node.children)


_SWEEP_RE = re.compile(r"^sweep\s+([A-Za-z0-9_*][A-Za-z0-9_.*]*)\s*=\s*(.+)$")
_KV_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$")


def _parse_experiment(lines, line_offset):
    config = {"sweep": []}
    for i, raw in enumerate(lines):
        lineno = line_offset + i + 1
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        m = _SWEEP_RE.match(text)
        if m:
            path, values_text = m.groups()
            try:
                values = tuple(float(v) for v in values_text.split(","))
            except ValueError:
                raise ParseError("sweep values must be numbers", lineno, 1, text)
            if not values:
                raise ParseError("empty sweep grid", lineno, 1, text)
            config["sweep"].append((path, values))
            continue
        m = _KV_RE.match(text)
        if not m:
            raise ParseError("expected 'key = value'", lineno, 1, text)
        key, value_text = m.groups()
        if key not in EXPERIMENT_KEYS:
            raise ParseError(f"unknown experiment key {key!r}", lineno, 1, key)
        caster = EXPERIMENT_KEYS[key]
        try:
            value = caster(value_text.strip()) if caster is not str else value_text.strip()
        except ValueError:
            raise ParseError(f"bad value for {key!r}", lineno, 1, value_text)
        config[key] = value
    metric = config.get("metric")
    if metric is not None and metric not in METRICS:
        raise ParseError(f"unknown metric {metric!r}", line_offset + 1, 1, metric)
    return config


_SECTION_RE = re.compile(r"^\s*\[experiment\]\s*$", re.MULTILINE)


def parse_tree(text):
    """Parse a document; raises ParseError with source position on failure."""
    if not isinstance(text, str):
        raise ParseError("input must be text", 1, 1)
    m = _SECTION_RE.search(text)
    if m:
        tree_text = text[:m.start()]
        header_line = text[:m.start()].count("\n") + 1
        exp_lines = text[m.end():].splitlines()
        experiment = _parse_experiment(exp_lines, header_line)
    else:
        tree_text = text
        experiment = None
    tokens = _tokenize(tree_text)
    parser = _Parser(tokens)
    if parser.peek().kind == "eof":
        parser.fail("empty document: expected a tree")
    root = parser.parse_node()
    trailing = parser.peek()
    if trailing.kind != "eof":
        parser.fail(f"unexpected trailing input {trailing.text!r}", trailing)
    _assign_ids(root)
    _check_unique_ids(root)
    return TreeDocument(source=text, root=root, experiment=experiment)


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return "[" + ", ".join(repr(v) for v in value) + "]"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _print_node(node, indent, out):
    pad = "  " * indent
    if node.is_leaf:
        parts = [node.kind, node.id]
        parts += [f"{k}={_format_value(v)}" for k, v in node.params.items()]
        out.append(pad + " ".join(parts))
        return
    head = node.kind
    for key, value in node.params.items():
        head += f" {key}={_format_value(value)}"
    out.append(pad + head + " {")
    for child in node.children:
        _print_node(child, indent + 1, out)
    out.append(pad + "}")


def print_tree(doc):
    """Canonical text rendering; parse(print(doc)) is structurally equal."""
    out = []
    _print_node(doc.root, 0, out)
    if doc.experiment is not None:
        out.append("")
        out.append("[experiment]")
        for key in EXPERIMENT_KEYS:
            if key in doc.experiment:
                out.append(f"{key} = {doc.experiment[key]}")
        for path, values in doc.experiment.get("sweep", []):
            out.append(f"sweep {path} = " + ", ".join(repr(v) for v in values))
    return "\n".join(out) + "\n"


def _is_progress_leaf(node):
    return node.kind == "action" and node.params.get("model", "noisy_linear") in PROGRESS_MODELS


def validate_semantics(doc):
    """Semantic diagnostics beyond the grammar; returns, never raises."""
    diagnostics = []
    stack = [doc.root]
    while stack:
        node = stack.pop()
        stack.extend(node.children)
        if node.kind in ("parallel_abs", "parallel_rel"):
            for child in node.children:
                if not child.is_leaf:
                    diagnostics.append(Diagnostic(
                        "error",
                        f"composite {child.kind!r} under synchronized parallel "
                        f"{node.id!r} exposes no progress",
                        child.line, child.col))
                elif not _is_progress_leaf(child):
                    diagnostics.append(Diagnostic(
                        "error",
                        f"leaf {child.id!r} under synchronized parallel "
                        f"{node.id!r} has no progress model",
                        child.line, child.col))
        if node.kind == "parallel_abs":
            barriers = node.params["barriers"]
            if barriers and barriers[-1] != 1.0:
                diagnostics.append(Diagnostic(
                    "warning",
                    f"barrier set of {node.id!r} does not contain 1.0; "
                    "completion relies on the open final segment",
                    node.line, node.col))
        if node.kind == "parallel_rel" and node.params["delta"] == 0.0:
            if any(c.params.get("omega", 0.0) for c in node.children if c.is_leaf):
                diagnostics.append(Diagnostic(
                    "warning",
                    f"delta = 0 on {node.id!r} with noisy children can cause "
                    "highly intermittent ticking",
                    node.line, node.col))
    return diagnostics
