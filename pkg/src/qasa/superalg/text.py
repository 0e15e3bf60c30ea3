"""Canonical printing and a recursive-descent parser for algebra elements.

Grammar (whitespace insensitive)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := '-' factor | atom ['^' exponent]
    atom    := INT | 'i' | 'q' | 't' | generator | '(' expr ')'
             | '[' expr ',' expr ']' ['_' atom]
             | 'Ad' '(' head ';' expr ')'
             | 'sym' '(' NAME '=' index (',' NAME '=' index)* ';' expr ')'
    generator := e[i] f[i] k[i] k-[i] xi+[i,r] xi-[i,r] kap[i,r]
               | g[i] g-[i] g^(1/2) g^(-1/2) sigma[i] c_g

Indices are small integer expressions and may use names bound by ``sym``.
Parsing builds closures over an environment so that ``sym`` can re-evaluate
its body for every permutation.
"""

from __future__ import annotations

import re
from fractions import Fraction

from qasa.scalars.field import Scalar, UnitMonomial, format_scalar
from qasa.superalg.core import Algebra, Element, Gen, ad_e, ad_f, format_gen, gen_key, super_bracket, sym_over


class ExprSyntaxError(SyntaxError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos}: {text[:pos]}<!>{text[pos:]}")
        self.pos = pos


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def format_monomial(sig: int, word: tuple) -> str:
    parts = [f"sigma[{i}]" for i in range(sig.bit_length()) if sig >> i & 1]
    parts += [format_gen(g) for g in word]
    return "*".join(parts)


def _term_key(item):
    (sig, word), _ = item
    return (len(word), tuple(gen_key(g) for g in word), sig)


def format_element(x: Element) -> str:
    if not x.terms:
        return "0"
    out = []
    for (sig, word), c in sorted(x.terms.items(), key=_term_key):
        mono = format_monomial(sig, word)
        if c.is_one():
            out.append(mono or "1")
        elif mono:
            out.append(f"({format_scalar(c)})*{mono}")
        else:
            out.append(f"({format_scalar(c)})")
    return " + ".join(out)


# ---------------------------------------------------------------------------
# lexer
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<gen>xi\+\[|xi-\[|kap\[|k-\[|k\[|g-\[|g\[|sigma\[|e\[|f\[)
  | (?P<ghalf>g\^\(\s*(?P<gsign>-?)\s*1\s*/\s*2\s*\))
  | (?P<cg>c_g)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()\[\],;_=])
    """,
    re.VERBOSE,
)


def _lex(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup if m.lastgroup != "gsign" else "ghalf"
        if m.group("ghalf") is not None:
            kind = "ghalf"
        if kind != "ws":
            val = m.group(0)
            if kind == "ghalf":
                val = "gh-" if m.group("gsign") else "gh"
            elif kind == "gen":
                val = val[:-1]
            toks.append((kind, val, pos))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, alg: Algebra):
        self.text = text
        self.alg = alg
        self.toks = _lex(text)
        self.i = 0

    # token helpers
    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, val: str) -> bool:
        t = self.peek()
        if t[0] in ("op", "name") and t[1] == val:
            self.i += 1
            return True
        return False

    def expect(self, val: str):
        t = self.peek()
        if not self.accept(val):
            raise ExprSyntaxError(f"expected {val!r}, found {t[1]!r}", self.text, t[2])

    def fail(self, msg: str):
        raise ExprSyntaxError(msg, self.text, self.peek()[2])

    # grammar
    def parse(self):
        f = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return f

    def expr(self):
        parts = []
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        parts.append((sign, self.term()))
        while True:
            if self.accept("+"):
                parts.append((1, self.term()))
            elif self.accept("-"):
                parts.append((-1, self.term()))
            else:
                break

        def ev(env):
            total = None
            for s, f in parts:
                v = f(env)
                if s < 0:
                    v = -v
                total = v if total is None else total + v
            return total

        return ev if len(parts) > 1 or parts[0][0] < 0 else parts[0][1]

    def term(self):
        first = self.factor()
        rest = []
        while True:
            t = self.peek()
            if self.accept("*"):
                rest.append(("*", self.factor(), t[2]))
            elif self.accept("/"):
                rest.append(("/", self.factor(), t[2]))
            else:
                break
        if not rest:
            return first
        text = self.text

        def ev(env):
            v = first(env)
            for op, f, pos in rest:
                w = f(env)
                if op == "*":
                    v = v * w
                else:
                    c = _as_scalar(w)
                    if c is None:
                        raise ExprSyntaxError("division by a non-scalar", text, pos)
                    v = v.scale(Scalar.coerce(1) / c)
            return v

        return ev

    def factor(self):
        if self.accept("-"):
            inner = self.factor()
            return lambda env: -inner(env)
        base = self.atom()
        if self.accept("^"):
            pos = self.peek()[2]
            num, den = self.exponent()
            text = self.text

            def ev(env):
                v = base(env)
                c = _as_scalar(v)
                if c is not None and not (den == 1 and num >= 0):
                    if den != 1:
                        raise ExprSyntaxError("fractional power of a non-parameter scalar", text, pos)
                    return v.alg.scalar(c ** num)
                if den != 1 or num < 0:
                    raise ExprSyntaxError("elements only take non-negative integer powers", text, pos)
                return v ** num

            if getattr(base, "_param", None) is not None:
                unit = base._param
                e = Fraction(num, den)
                alg = self.alg

                def evp(env):
                    u, h = unit.unit * e, unit.half * e
                    if u.denominator != 1 or h.denominator != 1:
                        raise ExprSyntaxError(f"exponent {e} not allowed here", text, pos)
                    return alg.scalar(UnitMonomial(int(u), int(h)))

                return evp
            return ev
        return base

    def exponent(self):
        if self.accept("("):
            sign = -1 if self.accept("-") else 1
            num = self.integer()
            den = 1
            if self.accept("/"):
                den = self.integer()
            self.expect(")")
            return sign * num, den
        sign = -1 if self.accept("-") else 1
        return sign * self.integer(), 1

    def integer(self) -> int:
        t = self.next()
        if t[0] != "int":
            raise ExprSyntaxError(f"expected integer, found {t[1]!r}", self.text, t[2])
        return int(t[1])

    def atom(self):
        alg = self.alg
        t = self.peek()
        kind, val, pos = t
        if kind == "int":
            self.next()
            v = int(val)
            return lambda env: alg.scalar(v)
        if kind == "gen":
            self.next()
            return self.generator(val, pos)
        if kind == "ghalf":
            self.next()
            g = Gen(val, 0, 0)
            alg.validate(g)
            return lambda env: alg.monomial([g])
        if kind == "cg":
            self.next()
            return lambda env: alg.monomial([Gen("c", 0, 0)])
        if kind == "name":
            if val == "Ad":
                self.next()
                return self.ad()
            if val == "sym":
                self.next()
                return self.sym()
            if val in ("q", "t", "i"):
                self.next()
                unit = {"q": UnitMonomial(0, 2), "t": UnitMonomial(2, 2), "i": UnitMonomial(1, 0)}[val]

                def ev(env):
                    return alg.scalar(unit)

                ev._param = unit
                return ev
            self.fail(f"unknown name {val!r}")
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        if self.accept("["):
            x = self.expr()
            self.expect(",")
            y = self.expr()
            self.expect("]")
            a = None
            apos = self.peek()[2]
            if self.accept("_"):
                a = self.factor()
            text = self.text

            def ev(env):
                c = Scalar.coerce(1)
                if a is not None:
                    c = _as_scalar(a(env))
                    if c is None:
                        raise ExprSyntaxError("bracket parameter must be a scalar", text, apos)
                return super_bracket(x(env), y(env), c)

            return ev
        self.fail(f"unexpected {val!r}")

    def index_list(self):
        idx = [self.index()]
        while self.accept(","):
            idx.append(self.index())
        self.expect("]")
        return idx

    def index(self):
        terms = []
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        terms.append((sign, self.index_term()))
        while True:
            if self.accept("+"):
                terms.append((1, self.index_term()))
            elif self.accept("-"):
                terms.append((-1, self.index_term()))
            else:
                break
        return lambda env: sum(s * f(env) for s, f in terms)

    def index_term(self):
        first = self.index_atom()
        factors = [first]
        while self.accept("*"):
            factors.append(self.index_atom())

        def ev(env):
            v = 1
            for f in factors:
                v *= f(env)
            return v

        return ev

    def index_atom(self):
        t = self.next()
        if t[0] == "int":
            v = int(t[1])
            return lambda env: v
        if t[0] == "name":
            name, pos, text = t[1], t[2], self.text

            def ev(env):
                if name not in env:
                    raise ExprSyntaxError(f"unbound index {name!r}", text, pos)
                return env[name]

            return ev
        if t[1] == "(":
            inner = self.index()
            self.expect(")")
            return inner
        raise ExprSyntaxError(f"bad index token {t[1]!r}", self.text, t[2])

    def generator(self, kind: str, pos: int):
        idx = self.index_list()
        alg = self.alg
        text = self.text
        two = kind in ("xi+", "xi-", "kap")
        if len(idx) != (2 if two else 1):
            raise ExprSyntaxError(f"{kind} takes {2 if two else 1} indices", text, pos)

        def ev(env):
            vals = [f(env) for f in idx]
            if kind == "sigma":
                return alg.sigma(vals[0])
            return alg.gen(kind, vals[0], vals[1] if two else 0)

        return ev

    def ad(self):
        self.expect("(")
        t = self.next()
        if t[0] != "gen" or t[1] not in ("e", "f", "xi+", "xi-"):
            raise ExprSyntaxError("Ad expects e[i], f[i], xi+[i,0] or xi-[i,0]", self.text, t[2])
        kind = t[1]
        idx = self.index_list()
        self.expect(";")
        body = self.expr()
        self.expect(")")
        raising = kind in ("e", "xi+")
        text, pos = self.text, t[2]

        def ev(env):
            vals = [f(env) for f in idx]
            if kind.startswith("xi") and (len(vals) != 2 or vals[1] != 0):
                raise ExprSyntaxError("Ad acts through loop-zero generators only", text, pos)
            x = body(env)
            return ad_e(vals[0], x) if raising else ad_f(vals[0], x)

        return ev

    def sym(self):
        self.expect("(")
        names, vals = [], []
        while True:
            t = self.next()
            if t[0] != "name":
                raise ExprSyntaxError("expected index name", self.text, t[2])
            names.append(t[1])
            self.expect("=")
            vals.append(self.index())
            if self.accept(";"):
                break
            self.expect(",")
        body = self.expr()
        self.expect(")")

        def ev(env):
            values = [f(env) for f in vals]

            def template(**assign):
                inner = dict(env)
                inner.update(assign)
                return body(inner)

            return sym_over(names, values, template)

        return ev


def _as_scalar(x: Element):
    if not x.terms:
        return Scalar.coerce(0)
    if len(x.terms) == 1:
        (key, c), = x.terms.items()
        if key == (0, ()):
            return c
    return None


def parse_element(text: str, alg: Algebra, env: dict | None = None) -> Element:
    return _Parser(text, alg).parse()(dict(env or {}))
