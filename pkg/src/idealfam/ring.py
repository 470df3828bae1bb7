"""Exact sparse multivariate polynomial arithmetic.

Coefficients live in a prime field or in QQ, monomials are exponent tuples
over a fixed ordered variable table, and every value is immutable after
construction, so objects can be shared freely across threads.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import (
    ArithmeticOverflowError,
    DomainMismatchError,
    NotDivisibleError,
    ParseError,
    ValidationError,
)

# Exponents are kept below this bound so sums always fit a machine word.
EXPONENT_CAP = 1 << 62

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n):
    # Deterministic Miller-Rabin for word-sized integers.
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field of integers modulo an odd word-sized prime.

    Elements are plain ints in ``[0, p)``.
    """

    __slots__ = ("p",)

    is_prime_field = True
    zero = 0
    one = 1

    def __init__(self, p: int):
        if not isinstance(p, int) or p <= 2 or p >= EXPONENT_CAP or not _is_prime(p):
            raise ValidationError(f"modulus must be an odd prime below 2^62, got {p!r}")
        self.p = p

    def convert(self, value):
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {value} vanishes mod {self.p}")
            return value.numerator * pow(den, self.p - 2, self.p) % self.p
        raise DomainMismatchError(f"cannot coerce {value!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class RationalField:
    """Exact rationals; elements are ``fractions.Fraction`` values.

    ``Fraction`` keeps values in lowest terms with positive denominator.
    """

    __slots__ = ()

    is_prime_field = False
    zero = Fraction(0)
    one = Fraction(1)

    def convert(self, value):
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise DomainMismatchError(f"cannot coerce {value!r} into QQ")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / Fraction(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


def _matrix_rows(rows):
    out = []
    for row in rows:
        row = tuple(int(e) for e in row)
        if any(e < 0 for e in row):
            raise ValidationError("matrix-indexed variables need nonnegative entries")
        out.append(row)
    rows = tuple(out)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValidationError("matrix-indexed variables need rectangular matrices")
    return rows


def _colmajor(rows):
    # Column-major flattening; also the deterministic sort key for y-variables.
    if not rows:
        return ()
    return tuple(rows[j][k] for k in range(len(rows[0])) for j in range(len(rows)))


class VariableTable:
    """Fixed, totally ordered list of ring variables.

    Three descriptor kinds exist:

    * ``("x", j, k)`` -- grid variable displayed ``x[j,k]``;
    * ``("y", rows)`` -- variable indexed by an integer matrix (a tuple of
      row tuples), displayed ``y[[...],[...]]``;
    * ``("v", name)`` -- free-form named variable.

    Grid tables put every x before every y, x's sorted by ``(k, j)`` and
    y's sorted by the column-major flattening of their matrices.  Named
    variables cannot be mixed with the grid kinds.
    """

    __slots__ = ("descriptors", "names", "_index")

    def __init__(self, descriptors):
        descs = []
        for d in descriptors:
            kind = d[0]
            if kind == "x":
                _, j, k = d
                descs.append(("x", int(j), int(k)))
            elif kind == "y":
                descs.append(("y", _matrix_rows(d[1])))
            elif kind == "v":
                descs.append(("v", str(d[1])))
            else:
                raise ValidationError(f"unknown variable descriptor {d!r}")
        self.descriptors = tuple(descs)
        self.names = tuple(self._name(d) for d in self.descriptors)
        if len(set(self.names)) != len(self.names):
            raise ValidationError("variable names must be unique")
        kinds = {d[0] for d in self.descriptors}
        if "v" in kinds and kinds != {"v"}:
            raise ValidationError("named variables cannot be mixed with grid variables")
        if "x" in kinds or "y" in kinds:
            xs = [d for d in self.descriptors if d[0] == "x"]
            ys = [d for d in self.descriptors if d[0] == "y"]
            if self.descriptors != tuple(xs) + tuple(ys):
                raise ValidationError("x variables must precede y variables")
            if xs != sorted(xs, key=lambda d: (d[2], d[1])):
                raise ValidationError("x variables must be sorted by (k, j)")
            ykeys = [_colmajor(d[1]) for d in ys]
            if ykeys != sorted(ykeys):
                raise ValidationError("y variables must be sorted by their entry list")
        self._index = {name: i for i, name in enumerate(self.names)}

    @staticmethod
    def _name(desc):
        if desc[0] == "x":
            return f"x[{desc[1]},{desc[2]}]"
        if desc[0] == "y":
            rows = ",".join("[" + ",".join(str(e) for e in row) + "]" for row in desc[1])
            return f"y[{rows}]"
        return desc[1]

    @classmethod
    def named(cls, names):
        return cls(("v", n) for n in names)

    def __len__(self):
        return len(self.descriptors)

    def __iter__(self):
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValidationError(f"unknown variable {name!r}") from None

    def x_index(self, j: int, k: int) -> int:
        return self.index(f"x[{j},{k}]")

    def y_index(self, rows) -> int:
        return self.index(self._name(("y", _matrix_rows(rows))))

    def __eq__(self, other):
        return isinstance(other, VariableTable) and other.descriptors == self.descriptors

    def __hash__(self):
        return hash(self.descriptors)

    def __repr__(self):
        return f"VariableTable({', '.join(self.names)})"


_ORDER_KINDS = ("grevlex", "grlex", "lex")


class MonomialOrder:
    """Multiplicative total order on exponent tuples.

    ``grevlex`` and ``grlex`` refine total degree; ``lex`` does not.  An
    optional permutation reorders variables before comparison: entry ``i``
    of the permutation is the table index compared at position ``i``.
    """

    __slots__ = ("kind", "perm")

    def __init__(self, kind: str = "grevlex", perm=None):
        if kind not in _ORDER_KINDS:
            raise ValidationError(f"unknown monomial order {kind!r}")
        self.kind = kind
        if perm is not None:
            perm = tuple(int(i) for i in perm)
            if sorted(perm) != list(range(len(perm))):
                raise ValidationError("order permutation must permute 0..n-1")
        self.perm = perm

    def _arrange(self, exps):
        if self.perm is None:
            return exps
        return tuple(exps[i] for i in self.perm)

    def key(self, exps):
        """Sort key; larger key means larger monomial."""
        e = self._arrange(exps)
        if self.kind == "lex":
            return e
        if self.kind == "grlex":
            return (sum(e), e)
        return (sum(e), tuple(-x for x in reversed(e)))

    def heapkey(self, exps):
        """Inverted key for min-heaps; smaller key means larger monomial."""
        e = self._arrange(exps)
        if self.kind == "lex":
            return tuple(-x for x in e)
        if self.kind == "grlex":
            return (-sum(e), tuple(-x for x in e))
        return (-sum(e), e[::-1] if type(e) is tuple else tuple(reversed(e)))

    def heapkey_fn(self):
        """Specialized heapkey closure for kernel loops."""
        if self.perm is None:
            if self.kind == "grevlex":
                return lambda e: (-sum(e), e[::-1])
            if self.kind == "grlex":
                return lambda e: (-sum(e), tuple(-x for x in e))
            return lambda e: tuple(-x for x in e)
        return self.heapkey

    def greater(self, a, b) -> bool:
        return self.key(a) > self.key(b)

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and other.kind == self.kind
            and other.perm == self.perm
        )

    def __hash__(self):
        return hash((self.kind, self.perm))

    def __repr__(self):
        if self.perm is None:
            return f"MonomialOrder({self.kind!r})"
        return f"MonomialOrder({self.kind!r}, perm={self.perm})"


class Monomial:
    """A product of variable powers over a fixed table."""

    __slots__ = ("table", "exps", "degree")

    def __init__(self, table: VariableTable, exps):
        exps = tuple(int(e) for e in exps)
        if len(exps) != len(table):
            raise ValidationError(
                f"expected {len(table)} exponents, got {len(exps)}"
            )
        if any(e < 0 for e in exps):
            raise ValidationError("exponents must be nonnegative")
        if any(e >= EXPONENT_CAP for e in exps):
            raise ArithmeticOverflowError("exponent exceeds the machine-word guard")
        self.table = table
        self.exps = exps
        self.degree = sum(exps)

    @classmethod
    def one(cls, table):
        return cls(table, (0,) * len(table))

    def _check(self, other):
        if not isinstance(other, Monomial):
            raise DomainMismatchError(f"expected a Monomial, got {other!r}")
        if other.table != self.table:
            raise DomainMismatchError("monomials live over different variable tables")

    def __mul__(self, other):
        self._check(other)
        exps = tuple(a + b for a, b in zip(self.exps, other.exps))
        if any(e >= EXPONENT_CAP for e in exps):
            raise ArithmeticOverflowError("exponent overflow in monomial product")
        return Monomial(self.table, exps)

    def divides(self, other) -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.exps, other.exps))

    def __truediv__(self, other):
        """Exact quotient self / other; raises when not divisible."""
        self._check(other)
        if not other.divides(self):
            raise NotDivisibleError(f"{other} does not divide {self}")
        return Monomial(self.table, (a - b for a, b in zip(self.exps, other.exps)))

    @property
    def is_one(self) -> bool:
        return self.degree == 0

    def support(self):
        return tuple(i for i, e in enumerate(self.exps) if e)

    def __eq__(self, other):
        return (
            isinstance(other, Monomial)
            and other.table == self.table
            and other.exps == self.exps
        )

    def __hash__(self):
        return hash(self.exps)

    def __str__(self):
        return format_monomial(self.table, self.exps)

    def __repr__(self):
        return f"Monomial({self})"


def format_monomial(table, exps) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(table.names[i])
        elif e:
            parts.append(f"{table.names[i]}^{e}")
    return "*".join(parts) if parts else "1"


class PolynomialRing:
    """A variable table, a coefficient field, and a monomial order."""

    __slots__ = ("table", "field", "order")

    def __init__(self, table: VariableTable, field, order: MonomialOrder | None = None):
        if order is None:
            order = MonomialOrder("grevlex")
        if order.perm is not None and len(order.perm) != len(table):
            raise ValidationError("order permutation length must match the table")
        self.table = table
        self.field = field
        self.order = order

    @property
    def nvars(self) -> int:
        return len(self.table)

    def with_order(self, order) -> "PolynomialRing":
        if isinstance(order, str):
            order = MonomialOrder(order)
        return PolynomialRing(self.table, self.field, order)

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.constant(self.field.one)

    def constant(self, c) -> "Polynomial":
        c = self.field.convert(c)
        if c == self.field.zero:
            return self.zero()
        return Polynomial(self, (((0,) * self.nvars, c),))

    def variable(self, ref) -> "Polynomial":
        i = ref if isinstance(ref, int) else self.table.index(ref)
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, ((tuple(exps), self.field.one),))

    def monomial(self, exps) -> Monomial:
        if isinstance(exps, Monomial):
            if exps.table != self.table:
                raise DomainMismatchError("monomial from a different table")
            return exps
        return Monomial(self.table, exps)

    def from_monomial(self, mono, coeff=1) -> "Polynomial":
        mono = self.monomial(mono)
        return self.poly({mono.exps: coeff})

    def poly(self, terms) -> "Polynomial":
        """Build a polynomial from ``{exps: coeff}`` or an iterable of pairs."""
        items = terms.items() if hasattr(terms, "items") else terms
        acc = {}
        for exps, c in items:
            if isinstance(exps, Monomial):
                exps = exps.exps
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ValidationError("exponent tuple length does not match the ring")
            if any(e < 0 for e in exps):
                raise ValidationError("exponents must be nonnegative")
            if any(e >= EXPONENT_CAP for e in exps):
                raise ArithmeticOverflowError("exponent exceeds the machine-word guard")
            c = self.field.convert(c) if exps not in acc else self.field.add(
                acc[exps], self.field.convert(c)
            )
            acc[exps] = c
        zero = self.field.zero
        cleaned = {e: c for e, c in acc.items() if c != zero}
        ordered = sorted(cleaned, key=self.order.key, reverse=True)
        return Polynomial(self, tuple((e, cleaned[e]) for e in ordered))

    def parse(self, text: str) -> "Polynomial":
        return Polynomial(self, _parse_terms(text, self))

    def __eq__(self, other):
        return (
            isinstance(other, PolynomialRing)
            and other.table == self.table
            and other.field == self.field
            and other.order == self.order
        )

    def __hash__(self):
        return hash((self.table, self.field, self.order))

    def __repr__(self):
        return f"PolynomialRing({self.field!r}, {len(self.table)} vars, {self.order.kind})"


class Polynomial:
    """Immutable sparse polynomial; terms sorted descending in the ring order.

    The zero polynomial is the empty term tuple.  Construct through
    :meth:`PolynomialRing.poly` or ring arithmetic; the raw constructor
    trusts its input.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolynomialRing, terms):
        self.ring = ring
        self.terms = tuple(terms)

    def _check(self, other):
        if not isinstance(other, Polynomial):
            raise DomainMismatchError(f"expected a Polynomial, got {other!r}")
        if other.ring != self.ring:
            raise DomainMismatchError("polynomials live in different rings")

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        add = self.ring.field.add
        zero = self.ring.field.zero
        for e, c in other.terms:
            v = add(acc.get(e, zero), c)
            if v == zero:
                acc.pop(e, None)
            else:
                acc[e] = v
        return self._from_dict(acc)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, tuple((e, neg(c)) for e, c in self.terms))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        field = self.ring.field
        zero = field.zero
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                v = field.add(acc.get(e, zero), field.mul(c1, c2))
                if v == zero:
                    acc.pop(e, None)
                else:
                    acc[e] = v
        for e in acc:
            if any(x >= EXPONENT_CAP for x in e):
                raise ArithmeticOverflowError("exponent overflow in product")
        return self._from_dict(acc)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValidationError("negative powers are not defined")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "Polynomial":
        field = self.ring.field
        c = field.convert(c)
        if c == field.zero:
            return self.ring.zero()
        return Polynomial(self.ring, tuple((e, field.mul(cc, c)) for e, cc in self.terms))

    def _from_dict(self, acc):
        ordered = sorted(acc, key=self.ring.order.key, reverse=True)
        return Polynomial(self.ring, tuple((e, acc[e]) for e in ordered))

    @property
    def lm(self) -> Monomial | None:
        """Leading monomial, or None for the zero polynomial."""
        if not self.terms:
            return None
        return Monomial(self.ring.table, self.terms[0][0])

    @property
    def lc(self):
        if not self.terms:
            return self.ring.field.zero
        return self.terms[0][1]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lc))

    def degree(self) -> int | None:
        if not self.terms:
            return None
        return max(sum(e) for e, _ in self.terms)

    def homogeneous_degree(self):
        """Common total degree of all terms; ``"any"`` for 0; None otherwise."""
        if not self.terms:
            return "any"
        degs = {sum(e) for e, _ in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def coefficient(self, mono):
        exps = mono.exps if isinstance(mono, Monomial) else tuple(mono)
        for e, c in self.terms:
            if e == exps:
                return c
        return self.ring.field.zero

    def monomials(self):
        return tuple(Monomial(self.ring.table, e) for e, _ in self.terms)

    def substitute_signs(self, signs) -> "Polynomial":
        """Replace each variable v by ``signs[v] * v``; signs must cover the support."""
        table = self.ring.table
        sign_by_index = {}
        for key, s in signs.items():
            i = key if isinstance(key, int) else table.index(key)
            if s not in (1, -1):
                raise ValidationError("signs must be +1 or -1")
            sign_by_index[i] = s
        support = set()
        for e, _ in self.terms:
            support.update(i for i, x in enumerate(e) if x)
        missing = support - set(sign_by_index)
        if missing:
            names = ", ".join(table.names[i] for i in sorted(missing))
            raise ValidationError(f"signs missing for variables in support: {names}")
        field = self.ring.field
        out = []
        for e, c in self.terms:
            flip = sum(e[i] for i, s in sign_by_index.items() if s == -1 and e[i])
            out.append((e, field.neg(c) if flip % 2 else c))
        return Polynomial(self.ring, tuple(out))

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and other.ring == self.ring
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for e, c in self.terms:
            mono = format_monomial(self.ring.table, e)
            negative = isinstance(c, Fraction) and c < 0
            body = -c if negative else c
            if mono == "1":
                text = str(body)
            elif body == 1:
                text = mono
            else:
                text = f"{body}*{mono}"
            if not chunks:
                chunks.append(f"-{text}" if negative else text)
            else:
                chunks.append(f" - {text}" if negative else f" + {text}")
        return "".join(chunks)

    def __repr__(self):
        return f"Polynomial({self})"


_NAME_PATTERN = r"[A-Za-z_][A-Za-z_0-9]*(?:\[[0-9,\[\]]*\])?"
_TOKEN_RE = re.compile(
    rf"(?P<name>{_NAME_PATTERN})|(?P<num>\d+)|(?P<op>[-+*/^])|(?P<ws>\s+)|(?P<bad>.)"
)


def _tokenize(text):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r} in {text!r}")
        tokens.append((kind, m.group()))
    return tokens


def _parse_terms(text, ring):
    """Parse the term grammar and return canonical sorted terms."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")
    field = ring.field
    zero = field.zero
    acc = {}
    pos = 0
    n = len(tokens)
    first = True
    while pos < n:
        sign = 1
        if tokens[pos][0] == "op" and tokens[pos][1] in "+-":
            if tokens[pos][1] == "-":
                sign = -1
            pos += 1
        elif not first:
            raise ParseError(f"expected + or - at token {tokens[pos][1]!r}")
        first = False
        coeff = field.one
        exps = [0] * ring.nvars
        saw_factor = False
        while True:
            if pos >= n:
                break
            kind, val = tokens[pos]
            if kind == "num":
                num = int(val)
                pos += 1
                if pos + 1 < n and tokens[pos] == ("op", "/") and tokens[pos + 1][0] == "num":
                    den = int(tokens[pos + 1][1])
                    pos += 2
                    coeff = field.mul(coeff, field.convert(Fraction(num, den)))
                else:
                    coeff = field.mul(coeff, field.convert(num))
            elif kind == "name":
                try:
                    idx = ring.table.index(val)
                except ValidationError:
                    raise ParseError(f"unknown variable {val!r}") from None
                power = 1
                pos += 1
                if pos < n and tokens[pos] == ("op", "^"):
                    if pos + 1 >= n or tokens[pos + 1][0] != "num":
                        raise ParseError("expected an integer exponent after ^")
                    power = int(tokens[pos + 1][1])
                    pos += 2
                exps[idx] += power
            else:
                raise ParseError(f"unexpected token {val!r}")
            saw_factor = True
            if pos < n and tokens[pos] == ("op", "*"):
                pos += 1
                continue
            break
        if not saw_factor:
            raise ParseError("empty term")
        if sign < 0:
            coeff = field.neg(coeff)
        key = tuple(exps)
        v = field.add(acc.get(key, zero), coeff)
        if v == zero:
            acc.pop(key, None)
        else:
            acc[key] = v
    ordered = sorted(acc, key=ring.order.key, reverse=True)
    return tuple((e, acc[e]) for e in ordered)
