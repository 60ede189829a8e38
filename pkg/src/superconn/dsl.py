"""Declarative spec files for charts, bundles, and connection data.

A spec is line-based.  Sections are introduced by [name]; entries inside
tensor sections look like `omegaE[1][1] = 1 x dx(2)`.  Form expressions are
flat signed sums of `rational coordinate-powers dx(i,...)` terms, so the
canonical printer's output is itself valid input.  All indices are 1-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .bundles import EndForm, SuperRank
from .cartan import DEFAULT_THETA_CAP, GradedConnection, K0Tensor, K1Tensor
from .coeffs import Poly
from .errors import SuperconnError
from .exterior import Christoffel, Form, sort_indices

TENSOR_KEYS = {"Gamma": 3, "omegaE": 2, "K0": 3, "K1": 3, "P": 2, "N": 2}
SECTIONS = {"chart", "bundle", "options", "run"} | set(TENSOR_KEYS)


@dataclass
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int

    def __str__(self):
        return f"{self.severity}: line {self.line}, col {self.column}: {self.message}"


@dataclass
class SpecModel:
    m: int
    coord_names: list
    p: int
    q: int
    theta_cap: int = DEFAULT_THETA_CAP
    gamma: Christoffel = None
    omegaE: EndForm = None
    K0: list = None
    K1: list = None
    P: EndForm = None
    N: EndForm = None
    commands: list = field(default_factory=list)

    @property
    def rank(self):
        return SuperRank(self.p, self.q)

    def graded_connection(self):
        return GradedConnection(self.gamma, self.omegaE,
                                K0Tensor(self.K0), K1Tensor(self.K1),
                                theta_cap=self.theta_cap)

    def superconnection(self):
        """D = d + omegaE + P (+ N folded into P when present)."""
        from .quillen import SuperconnectionD
        P = self.P if self.P is not None else EndForm.zero(self.rank, self.m)
        if self.N is not None:
            P = P + self.N
        return SuperconnectionD(self.rank, self.omegaE, P)

    def __eq__(self, other):
        if not isinstance(other, SpecModel):
            return NotImplemented
        return (self.m == other.m and self.coord_names == other.coord_names
                and (self.p, self.q) == (other.p, other.q)
                and self.theta_cap == other.theta_cap
                and self.gamma.gamma == other.gamma.gamma
                and self.omegaE == other.omegaE
                and self.K0 == other.K0 and self.K1 == other.K1
                and self.P == other.P and self.N == other.N
                and self.commands == other.commands)


TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\()|(\))"
                      r"|(,)|(\+)|(-)|(\*)|(/)|(.))")


def _tokenize(text, base_col):
    tokens = []
    pos = 0
    while pos < len(text):
        mt = TOKEN_RE.match(text, pos)
        if not mt or mt.end() == pos:
            break
        col = base_col + mt.start(mt.lastindex)
        kinds = ["int", "name", "caret", "lparen", "rparen", "comma",
                 "plus", "minus", "star", "slash", "junk"]
        kind = kinds[mt.lastindex - 1]
        tokens.append((kind, mt.group(mt.lastindex), col))
        pos = mt.end()
    return tokens


class _ExprError(Exception):
    def __init__(self, message, column):
        super().__init__(message)
        self.message = message
        self.column = column


def parse_form_expr(text, m, names, line_no, base_col=1):
    """Parse a flat signed sum of monomial terms into a Form."""
    tokens = _tokenize(text, base_col)
    name_to_idx = {n: i + 1 for i, n in enumerate(names)}
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, "", base_col + len(text))

    out = Form.zero(m)
    first = True
    while pos < len(tokens):
        sign = 1
        kind, text_, col = peek()
        if kind == "plus":
            pos += 1
            if first:
                raise _ExprError("leading '+' not allowed", col)
        elif kind == "minus":
            sign = -1
            pos += 1
        elif not first:
            raise _ExprError(f"expected '+' or '-', found {text_!r}", col)
        first = False
        # one term: product of factors
        poly = Poly.const(m, sign)
        indices = []
        saw_factor = False
        while pos < len(tokens):
            kind, text_, col = peek()
            if kind in ("plus", "minus"):
                break
            if kind == "star":
                pos += 1
                continue
            if kind == "int":
                num = int(text_)
                pos += 1
                if peek()[0] == "slash":
                    pos += 1
                    dk, dt, dc = peek()
                    if dk != "int":
                        raise _ExprError("expected denominator", dc)
                    if int(dt) == 0:
                        raise _ExprError("zero denominator", dc)
                    pos += 1
                    poly = poly.scale(Fraction(num, int(dt)))
                else:
                    poly = poly.scale(num)
                saw_factor = True
                continue
            if kind == "name":
                if text_ == "dx":
                    pos += 1
                    if peek()[0] != "lparen":
                        raise _ExprError("expected '(' after dx", peek()[2])
                    pos += 1
                    group = []
                    while True:
                        ik, it, ic = peek()
                        if ik != "int":
                            raise _ExprError("expected index in dx(...)", ic)
                        idx = int(it)
                        if not 1 <= idx <= m:
                            raise _ExprError(f"coordinate index {idx} out of "
                                             f"range 1..{m}", ic)
                        group.append(idx)
                        pos += 1
                        nk, nt, nc = peek()
                        if nk == "comma":
                            pos += 1
                            continue
                        if nk == "rparen":
                            pos += 1
                            break
                        raise _ExprError("expected ',' or ')' in dx(...)", nc)
                    indices.extend(group)
                    saw_factor = True
                    continue
                if text_ not in name_to_idx:
                    raise _ExprError(f"undeclared coordinate {text_!r}", col)
                ci = name_to_idx[text_]
                pos += 1
                power = 1
                if peek()[0] == "caret":
                    pos += 1
                    pk, pt, pc = peek()
                    if pk != "int":
                        raise _ExprError("expected integer exponent", pc)
                    power = int(pt)
                    pos += 1
                poly = poly * Poly.coord(m, ci, power)
                saw_factor = True
                continue
            raise _ExprError(f"unexpected {text_!r}", col)
        if not saw_factor:
            raise _ExprError("empty term", peek()[2])
        wsign, widx = sort_indices(tuple(indices))
        if wsign == 0:
            continue
        out = out + Form(m, {widx: poly.scale(wsign)})
    return out


# ---------------------------------------------------------------------------
# canonical printing


def poly_signed_terms(p, names):
    """Yield (sign, text) monomial pieces in the canonical key order."""
    def sort_key(exps):
        return (sum(exps), tuple(-e for e in exps))
    for exps in sorted(p.terms, key=sort_key):
        c = p.terms[exps]
        sign = "-" if c < 0 else "+"
        factors = [str(abs(c))]
        for i, e in enumerate(exps[:-1]):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        if exps[-1]:
            factors.append("t" if exps[-1] == 1 else f"t^{exps[-1]}")
        yield sign, " ".join(factors)


def form_to_expr(f, names):
    """Flat signed-sum text for a Form; parseable back by parse_form_expr."""
    if f.is_zero():
        return "0"
    pieces = []
    for idx in sorted(f.terms, key=lambda i: (len(i), i)):
        tail = f" dx({','.join(map(str, idx))})" if idx else ""
        for sign, text in poly_signed_terms(f.terms[idx], names):
            pieces.append((sign, text + tail))
    head_sign, head = pieces[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


def print_spec(model):
    """Canonical text for a SpecModel; parse(print(model)) == model."""
    names = model.coord_names
    lines = [f"[chart] m={model.m} coords={' '.join(names)} "
             f"theta_cap={model.theta_cap}",
             f"[bundle] p={model.p} q={model.q}"]
    lines.append("[Gamma]")
    for r in range(1, model.m + 1):
        for p_ in range(1, model.m + 1):
            for q_ in range(1, model.m + 1):
                poly = model.gamma.symbol(r, p_, q_)
                if not poly.is_zero():
                    lines.append(f"Gamma[{r}][{p_}][{q_}] = "
                                 f"{form_to_expr(Form.from_poly(poly), names)}")
    n = model.p + model.q

    def emit_matrix(name, mat):
        lines.append(f"[{name}]")
        if mat is None:
            return
        for i in range(n):
            for j in range(n):
                f = mat.entries[i][j]
                if not f.is_zero():
                    lines.append(f"{name}[{i + 1}][{j + 1}] = {form_to_expr(f, names)}")

    emit_matrix("omegaE", model.omegaE)
    for name, tensor in (("K0", model.K0), ("K1", model.K1)):
        lines.append(f"[{name}]")
        for k in range(1, model.m + 1):
            mat = tensor[k - 1]
            for i in range(n):
                for j in range(n):
                    f = mat.entries[i][j]
                    if not f.is_zero():
                        lines.append(f"{name}[{k}][{i + 1}][{j + 1}] = "
                                     f"{form_to_expr(f, names)}")
    if model.P is not None:
        emit_matrix("P", model.P)
    if model.N is not None:
        emit_matrix("N", model.N)
    if model.commands:
        lines.append("[run]")
        lines.extend(model.commands)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing


_SCALAR_RE = re.compile(r"([A-Za-z_][A-Za-z_0-9]*)\s*=")
_ENTRY_RE = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*)\s*((?:\[\s*\d+\s*\])+)\s*=\s*")
_IDX_RE = re.compile(r"\[\s*(\d+)\s*\]")


def parse_spec(text):
    """Parse spec text.  Returns (SpecModel or None, [Diagnostic]).

    The model is None whenever any error-severity diagnostic was produced.
    """
    diags = []
    scalars = {}
    scalar_locs = {}
    coord_names = None
    raw_entries = []
    commands = []
    section = None

    def err(message, line, col):
        diags.append(Diagnostic("error", message, line, col))

    lines = text.split("\n")
    for line_no, raw in enumerate(lines, start=1):
        hash_pos = raw.find("#")
        line = raw[:hash_pos] if hash_pos >= 0 else raw
        rest = line
        col0 = 1
        stripped = rest.lstrip()
        if not stripped:
            continue
        if stripped.startswith("["):
            mt = re.match(r"\s*\[\s*([A-Za-z_0-9]+)\s*\]", rest)
            if mt and mt.group(1) in SECTIONS:
                section = mt.group(1)
                col0 = mt.end() + 1
                rest = rest[mt.end():]
                if not rest.strip():
                    continue
            elif mt:
                err(f"unknown section [{mt.group(1)}]", line_no, rest.find("[") + 1)
                section = None
                continue
            # otherwise fall through: may be an indexed entry continuation
        if section == "run":
            commands.append(rest.strip())
            continue
        if section in ("chart", "bundle", "options"):
            pos = 0
            while pos < len(rest):
                mt = _SCALAR_RE.search(rest, pos)
                if not mt:
                    leftover = rest[pos:].strip()
                    if leftover:
                        err(f"expected key=value, found {leftover!r}",
                            line_no, col0 + pos + rest[pos:].find(leftover[0]))
                    break
                key = mt.group(1)
                vstart = mt.end()
                nxt = _SCALAR_RE.search(rest, vstart)
                value = rest[vstart:nxt.start()] if nxt else rest[vstart:]
                value = value.strip()
                pos = nxt.start() if nxt else len(rest)
                scalars[key] = value
                scalar_locs[key] = (line_no, col0 + mt.start(1))
                if key == "coords":
                    coord_names = value.split()
            continue
        mt = _ENTRY_RE.match(rest)
        if not mt:
            err(f"expected an entry, found {rest.strip()!r}", line_no,
                col0 + (len(rest) - len(rest.lstrip())))
            continue
        key = mt.group(1)
        if key not in TENSOR_KEYS:
            err(f"unknown key {key!r}", line_no, col0 + mt.start(1))
            continue
        indices = [int(g) for g in _IDX_RE.findall(mt.group(2))]
        if len(indices) != TENSOR_KEYS[key]:
            err(f"{key} takes {TENSOR_KEYS[key]} indices, got {len(indices)}",
                line_no, col0 + mt.start(2))
            continue
        expr = rest[mt.end():]
        raw_entries.append((key, indices, expr, line_no, col0 + mt.end()))

    # scalar validation
    def get_int(key, default=None, minimum=0):
        if key not in scalars:
            if default is None:
                err(f"missing required {key}", 1, 1)
                return None
            return default
        line_no, col = scalar_locs[key]
        try:
            v = int(scalars[key])
        except ValueError:
            err(f"{key} must be an integer", line_no, col)
            return None
        if v < minimum:
            err(f"{key} must be >= {minimum}", line_no, col)
            return None
        return v

    m = get_int("m", minimum=1)
    p = get_int("p", minimum=0)
    q = get_int("q", minimum=0)
    theta_cap = get_int("theta_cap", default=DEFAULT_THETA_CAP, minimum=2)
    known = {"m", "p", "q", "theta_cap", "coords"}
    for key in scalars:
        if key not in known:
            line_no, col = scalar_locs[key]
            err(f"unknown key {key!r}", line_no, col)
    if m is not None:
        if coord_names is None:
            coord_names = [f"x{i}" for i in range(1, m + 1)]
        elif len(coord_names) != m:
            line_no, col = scalar_locs["coords"]
            err(f"expected {m} coordinate names, got {len(coord_names)}",
                line_no, col)
        elif len(set(coord_names)) != m or "dx" in coord_names or "t" in coord_names:
            line_no, col = scalar_locs["coords"]
            err("coordinate names must be distinct and not 'dx' or 't'",
                line_no, col)
    if p is not None and q is not None and p + q < 1:
        err("bundle rank p+q must be positive", *scalar_locs.get("p", (1, 1)))
    if any(d.severity == "error" for d in diags):
        return None, diags

    n = p + q
    gamma_entries = {}
    mats = {"omegaE": EndForm.zero(SuperRank(p, q), m)}
    k_tensors = {"K0": [EndForm.zero(SuperRank(p, q), m) for _ in range(m)],
                 "K1": [EndForm.zero(SuperRank(p, q), m) for _ in range(m)]}
    seen_pn = {"P": False, "N": False}
    for key, indices, expr, line_no, col in raw_entries:
        try:
            f = parse_form_expr(expr, m, coord_names, line_no, col)
        except _ExprError as e:
            err(e.message, line_no, e.column)
            continue
        if key == "Gamma":
            r, p_, q_ = indices
            if not all(1 <= i <= m for i in indices):
                err(f"Gamma index out of range 1..{m}", line_no, col)
                continue
            if f.degrees() not in ([], [0]):
                err("Gamma entries must be functions", line_no, col)
                continue
            prev = gamma_entries.get((r, p_, q_), Poly.zero(m))
            gamma_entries[(r, p_, q_)] = prev + f.function_part()
            continue
        if key in ("P", "N", "omegaE"):
            i, j = indices
            if not (1 <= i <= n and 1 <= j <= n):
                err(f"{key} slot index out of range 1..{n}", line_no, col)
                continue
            if key == "omegaE":
                mats["omegaE"].entries[i - 1][j - 1] = \
                    mats["omegaE"].entries[i - 1][j - 1] + f
            else:
                if key not in mats:
                    mats[key] = EndForm.zero(SuperRank(p, q), m)
                seen_pn[key] = True
                mats[key].entries[i - 1][j - 1] = mats[key].entries[i - 1][j - 1] + f
            continue
        # K0 / K1
        k, i, j = indices
        if not 1 <= k <= m:
            err(f"{key} coordinate index out of range 1..{m}", line_no, col)
            continue
        if not (1 <= i <= n and 1 <= j <= n):
            err(f"{key} slot index out of range 1..{n}", line_no, col)
            continue
        k_tensors[key][k - 1].entries[i - 1][j - 1] = \
            k_tensors[key][k - 1].entries[i - 1][j - 1] + f

    if any(d.severity == "error" for d in diags):
        return None, diags

    model = SpecModel(
        m=m, coord_names=coord_names, p=p, q=q, theta_cap=theta_cap,
        gamma=Christoffel.from_entries(m, gamma_entries),
        omegaE=mats["omegaE"],
        K0=k_tensors["K0"], K1=k_tensors["K1"],
        P=mats.get("P") if seen_pn["P"] else None,
        N=mats.get("N") if seen_pn["N"] else None,
        commands=commands)

    # structural validation through the module constructors
    try:
        model.graded_connection()
        model.superconnection()
        if model.N is not None:
            from .correspondence import NTensor
            NTensor(model.N)
    except SuperconnError as e:
        err(str(e), 1, 1)
        return None, diags
    return model, diags


# ---------------------------------------------------------------------------
# JSON serialization


def form_to_json(f, names):
    out = []
    for idx in sorted(f.terms, key=lambda i: (len(i), i)):
        out.append({"indices": list(idx), "poly": f.terms[idx].to_str(names)})
    return out


def superform_to_json(s, names):
    out = []
    for (xi, th) in sorted(s.terms, key=lambda k: (len(k[0]) + sum(k[1]), k)):
        f = s.terms[(xi, th)]
        for idx in sorted(f.terms, key=lambda i: (len(i), i)):
            out.append({"xi": list(xi), "theta": list(th),
                        "indices": list(idx), "poly": f.terms[idx].to_str(names)})
    return out


def endform_to_json(W, names):
    return [[form_to_json(f, names) for f in row] for row in W.entries]
