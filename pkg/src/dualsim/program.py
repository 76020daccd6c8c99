"""Text format for duality programs.

One directive per line, ``#`` starts a comment::

    DUBITS 2
    H 0
    H 1
    DIVIDE 1/2 1/2
    PATH 1
    END
    PATH 2
    ORACLE marked=2 conv=unmarked
    END
    COMBINE

Gate lines: ``H i``, ``X i``, ``Z i``, ``R i theta``, ``P i lam``,
``CNOT c t`` and ``ORACLE marked=i[,j...] conv={unmarked|marked}``.
``DIVIDE a1[:tag1] a2[:tag2] ...`` opens a divider whose branches are
filled by ``PATH k ... END`` blocks (k counts from 1; omitted paths are
identity) and closed by ``COMBINE``.  ``PHASE-PATH k phi`` inside a divider
sets branch k's spatial phase.  Dividers nest inside PATH blocks.

Numeric fields accept arithmetic on literals with ``pi`` and ``sqrt``,
e.g. ``pi/2`` or ``sqrt(1/3)``.
"""
from __future__ import annotations

import ast
import math
import operator

from .engine import DEFAULT_TAG, Block, Divider, DividerSpec, DualityProgram
from .errors import DualityError, ParseError
from .gates import FLIP_MARKED, FLIP_UNMARKED, Circuit, Oracle, standard_gate

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt, "cos": math.cos, "sin": math.sin}


def eval_number(text: str) -> float:
    """Evaluate a numeric literal expression without ``eval``."""

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
            and not node.keywords
        ):
            return _FUNCS[node.func.id](walk(node.args[0]))
        raise ValueError(f"unsupported numeric expression {text!r}")

    try:
        value = walk(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ValueError(f"bad number {text!r}: {exc}") from None
    if not math.isfinite(value):
        raise ValueError(f"non-finite number {text!r}")
    return value


class _DividerFrame:
    def __init__(self, spec, lineno):
        self.spec = spec
        self.lineno = lineno
        self.paths: dict = {}
        self.phases = [0.0] * len(spec)


class _Parser:
    def __init__(self):
        self.n = None
        self.stack: list = []  # alternating item lists and divider frames
        self.top: list = []

    def current_items(self, lineno):
        if not self.stack:
            return self.top
        frame = self.stack[-1]
        if isinstance(frame, _DividerFrame):
            raise ParseError("gate or DIVIDE outside a PATH block of the open divider", lineno)
        return frame[1]

    def add_step(self, step, lineno):
        items = self.current_items(lineno)
        if items and isinstance(items[-1], Circuit):
            items[-1] = Circuit(self.n, items[-1].steps + (step,))
        else:
            items.append(Circuit(self.n, (step,)))

    def need_n(self, lineno):
        if self.n is None:
            raise ParseError("DUBITS must come before any gate", lineno)

    def int_arg(self, tok, lineno, what="index"):
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer {what}, got {tok!r}", lineno) from None

    def num_arg(self, tok, lineno):
        try:
            return eval_number(tok)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None

    def line(self, lineno, words):
        op, args = words[0].upper(), words[1:]
        if op == "DUBITS":
            if self.n is not None:
                raise ParseError("DUBITS given twice", lineno)
            if len(args) != 1:
                raise ParseError("DUBITS takes one argument", lineno)
            self.n = self.int_arg(args[0], lineno, "dubit count")
            if self.n < 1:
                raise ParseError("DUBITS must be at least 1", lineno)
            return
        if op in ("H", "X", "Z", "R", "P", "CNOT"):
            self.need_n(lineno)
            arity = 2 if op == "CNOT" else 1
            nparams = 1 if op in ("R", "P") else 0
            if len(args) != arity + nparams:
                raise ParseError(f"{op} takes {arity + nparams} argument(s)", lineno)
            targets = [self.int_arg(a, lineno) for a in args[:arity]]
            params = [self.num_arg(a, lineno) for a in args[arity:]]
            for t in targets:
                if not 0 <= t < self.n:
                    raise ParseError(f"{op} target {t} outside DUBITS {self.n}", lineno)
            try:
                step = standard_gate(op, params).on(*targets)
            except DualityError as exc:
                raise ParseError(str(exc), lineno) from None
            self.add_step(step, lineno)
            return
        if op == "ORACLE":
            self.need_n(lineno)
            self.add_step(self.oracle(args, lineno), lineno)
            return
        if op == "DIVIDE":
            self.need_n(lineno)
            self.current_items(lineno)
            self.stack.append(_DividerFrame(self.divider_spec(args, lineno), lineno))
            return
        if op == "PATH":
            frame = self.open_divider("PATH", lineno)
            k = self.path_index(args, frame, lineno)
            if k in frame.paths:
                raise ParseError(f"PATH {k + 1} given twice", lineno)
            items: list = []
            frame.paths[k] = items
            self.stack.append((k, items))
            return
        if op == "END":
            if not self.stack or isinstance(self.stack[-1], _DividerFrame):
                raise ParseError("END without an open PATH", lineno)
            self.stack.pop()
            return
        if op == "PHASE-PATH":
            frame = self.open_divider("PHASE-PATH", lineno)
            if len(args) != 2:
                raise ParseError("PHASE-PATH takes a path number and a phase", lineno)
            k = self.path_index(args[:1], frame, lineno)
            frame.phases[k] = self.num_arg(args[1], lineno)
            return
        if op == "COMBINE":
            frame = self.open_divider("COMBINE", lineno)
            self.stack.pop()
            paths = [Block(tuple(frame.paths.get(k, ()))) for k in range(len(frame.spec))]
            node = Divider(frame.spec, tuple(paths), tuple(frame.phases))
            self.current_items(lineno).append(node)
            return
        raise ParseError(f"unknown directive {words[0]!r}", lineno)

    def open_divider(self, op, lineno):
        if not self.stack or not isinstance(self.stack[-1], _DividerFrame):
            raise ParseError(f"{op} outside a DIVIDE block (or inside an unclosed PATH)", lineno)
        return self.stack[-1]

    def path_index(self, args, frame, lineno):
        if len(args) != 1:
            raise ParseError("PATH takes one path number", lineno)
        k = self.int_arg(args[0], lineno, "path number")
        if not 1 <= k <= len(frame.spec):
            raise ParseError(f"path {k} outside 1..{len(frame.spec)}", lineno)
        return k - 1

    def divider_spec(self, args, lineno):
        if len(args) < 2:
            raise ParseError("DIVIDE needs at least two branch coefficients", lineno)
        branches = []
        for tok in args:
            coeff, _, tag = tok.partition(":")
            branches.append((self.num_arg(coeff, lineno), tag or DEFAULT_TAG))
        try:
            return DividerSpec(tuple(branches))
        except (ValueError, DualityError) as exc:
            raise ParseError(str(exc), lineno) from None

    def oracle(self, args, lineno):
        fields = {}
        for tok in args:
            key, sep, value = tok.partition("=")
            if not sep or key not in ("marked", "conv"):
                raise ParseError(f"bad ORACLE field {tok!r}", lineno)
            fields[key] = value
        if "marked" not in fields:
            raise ParseError("ORACLE needs marked=...", lineno)
        marked = [self.int_arg(t, lineno, "marked index") for t in fields["marked"].split(",") if t]
        conv = {"unmarked": FLIP_UNMARKED, "marked": FLIP_MARKED}.get(fields.get("conv", "unmarked"))
        if conv is None:
            raise ParseError("conv must be 'unmarked' or 'marked'", lineno)
        try:
            return Oracle.from_marked(self.n, marked, conv)
        except DualityError as exc:
            raise ParseError(str(exc), lineno) from None

    def finish(self):
        if self.n is None:
            raise ParseError("missing DUBITS line")
        if self.stack:
            frame = next(f for f in reversed(self.stack) if isinstance(f, _DividerFrame))
            raise ParseError("unbalanced DIVIDE/PATH block (missing END or COMBINE)", frame.lineno)
        return DualityProgram(self.n, Block(tuple(self.top)))


def parse_program(text: str) -> DualityProgram:
    parser = _Parser()
    for lineno, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if words:
            parser.line(lineno, words)
    return parser.finish()
