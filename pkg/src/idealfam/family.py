"""Construction of the parametrized ideal families and their verification.

A parameter choice ``g:(m_1,...,m_n)`` fixes a grid of variables x[j,k],
a set of admissible exponent matrices per stage, one dense generator
built from those matrices, and the pure powers x[j,1]^d.  The quotient
has depth zero, certified here by an explicit socle witness, so its
projective dimension equals the number of ring variables, for which a
closed product formula is also provided.  The classical three-generator
and m+n-generator special families are exposed as separate constructors
together with a recognizer mapping parameters onto them.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .errors import ValidationError
from .groebner import GroebnerBasis, IdealPresentation, buchberger
from .ring import (
    Monomial,
    MonomialOrder,
    Polynomial,
    PolynomialRing,
    PrimeField,
    VariableTable,
)

DEFAULT_PRIME = 32003

_PARAMS_RE = re.compile(r"^\s*(\d+)\s*:\s*\(\s*(\d+(?:\s*,\s*\d+)*)\s*,?\s*\)\s*$")


def default_field():
    return PrimeField(DEFAULT_PRIME)


@dataclass(frozen=True)
class FamilyParams:
    """Family parameters g and (m_1, ..., m_n).

    Constraints: g >= 2; m_n >= 0; m_{n-1} >= 1 when n >= 2; and
    m_i >= 2 for 1 <= i <= n-2.  n = 1 is allowed with just m_1 >= 0.
    """

    g: int
    m: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.g, int) or self.g < 2:
            raise ValidationError(f"g must be an integer >= 2, got {self.g!r}")
        m = tuple(int(x) for x in self.m)
        object.__setattr__(self, "m", m)
        n = len(m)
        if n < 1:
            raise ValidationError("at least one m value is required")
        if m[-1] < 0:
            raise ValidationError(f"m_n must be >= 0, got {m[-1]}")
        if n >= 2 and m[-2] < 1:
            raise ValidationError(f"m_(n-1) must be >= 1, got {m[-2]}")
        for i in range(n - 2):
            if m[i] < 2:
                raise ValidationError(
                    f"m_{i + 1} must be >= 2 for positions 1..n-2, got {m[i]}"
                )

    @property
    def n(self) -> int:
        return len(self.m)

    @classmethod
    def parse(cls, text: str) -> "FamilyParams":
        got = _PARAMS_RE.match(text)
        if not got:
            raise ValidationError(
                f"expected parameters like '2:(2,2,2)', got {text!r}"
            )
        g = int(got.group(1))
        m = tuple(int(x) for x in got.group(2).split(","))
        return cls(g, m)

    def __str__(self):
        return f"{self.g}:({','.join(str(x) for x in self.m)})"


@dataclass(frozen=True)
class DerivedConstants:
    """Stage bounds M_k and stage degrees d_k derived from the parameters."""

    params: FamilyParams
    M: tuple[int, ...]
    d: tuple[int, ...]

    @property
    def degree(self) -> int:
        return self.d[0]


def derived_constants(params: FamilyParams) -> DerivedConstants:
    m = params.m
    n = len(m)
    M = tuple(m[k] - 1 if k < n - 1 else m[k] for k in range(n))
    d = tuple(sum(m[k:]) + 1 for k in range(n))
    return DerivedConstants(params, M, d)


@dataclass(frozen=True)
class ExponentMatrix:
    """A g x n matrix of nonnegative integers, stored as row tuples."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(e) for e in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValidationError("matrix rows must have equal length")
        if any(e < 0 for r in rows for e in r):
            raise ValidationError("matrix entries must be nonnegative")

    @property
    def g(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def column(self, k: int) -> tuple[int, ...]:
        return tuple(r[k] for r in self.rows)

    def column_sum(self, k: int) -> int:
        return sum(r[k] for r in self.rows)

    def colmajor(self) -> tuple[int, ...]:
        return tuple(self.rows[j][k] for k in range(self.n) for j in range(self.g))

    def in_stage(self, params: FamilyParams, k: int) -> bool:
        """Membership in the stage-k admissible set."""
        cs = derived_constants(params)
        if self.g != params.g or self.n != params.n:
            return False
        for kk in range(params.n):
            col = self.column(kk)
            if kk < k:
                if any(e > cs.M[kk] for e in col) or sum(col) != params.m[kk]:
                    return False
            else:
                if any(col):
                    return False
        return True

    def x_exponents(self, table: VariableTable) -> tuple[int, ...]:
        """Exponent tuple of the monomial prod x[j,k]^(entry j,k)."""
        exps = [0] * len(table)
        for j in range(self.g):
            for k in range(self.n):
                e = self.rows[j][k]
                if e:
                    exps[table.x_index(j + 1, k + 1)] = e
        return tuple(exps)

    def __str__(self):
        return "[" + ",".join(
            "[" + ",".join(str(e) for e in r) + "]" for r in self.rows
        ) + "]"


@lru_cache(maxsize=None)
def _column_choices(g: int, total: int, bound: int):
    """All (a_1..a_g) with sum == total and 0 <= a_i <= bound, in lex order."""
    if total < 0:
        return ()
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            if 0 <= remaining <= bound:
                out.append(prefix + (remaining,))
            return
        for a in range(min(bound, remaining) + 1):
            rec(prefix + (a,), remaining - a, slots - 1)

    rec((), total, g)
    return tuple(out)


def _fast_matrix(rows):
    # Constructor bypass for enumeration output that is canonical already.
    mat = object.__new__(ExponentMatrix)
    object.__setattr__(mat, "rows", rows)
    return mat


def enumerate_A(params: FamilyParams, k: int) -> list[ExponentMatrix]:
    """Stage-k admissible matrices, ordered by their column-major entry list.

    Columns 1..k carry bounded nonnegative entries with the prescribed
    column sums, columns beyond k vanish; stage 0 holds only the zero
    matrix.  The empty list is a legal result.
    """
    if not 0 <= k <= params.n:
        raise ValidationError(f"stage must lie in 0..{params.n}, got {k}")
    cs = derived_constants(params)
    g, n = params.g, params.n
    per_column = [
        _column_choices(g, params.m[kk], cs.M[kk]) for kk in range(k)
    ]
    pad = (0,) * (n - k)
    matrices = []
    for cols in itertools.product(*per_column):
        rows = tuple(
            tuple(col[j] for col in cols) + pad for j in range(g)
        )
        matrices.append(_fast_matrix(rows))
    return matrices


def family_table(params: FamilyParams) -> VariableTable:
    """Variable table for the family ring: the x grid plus one y per matrix."""
    descriptors = [
        ("x", j, k)
        for k in range(1, params.n + 1)
        for j in range(1, params.g + 1)
    ]
    descriptors += [("y", mat.rows) for mat in enumerate_A(params, params.n)]
    return VariableTable(descriptors)


def build_ideal(params: FamilyParams, field=None, order=None) -> IdealPresentation:
    """The g+1 generators x[j,1]^d and the dense stage-sum generator.

    Every generator is homogeneous of the top stage degree d_1.
    """
    if field is None:
        field = default_field()
    cs = derived_constants(params)
    g, n = params.g, params.n
    table = family_table(params)
    ring = PolynomialRing(table, field, order if isinstance(order, MonomialOrder) else (MonomialOrder(order) if order else None))
    d = cs.d
    gens = []
    for j in range(1, g + 1):
        exps = [0] * len(table)
        exps[table.x_index(j, 1)] = d[0]
        gens.append(ring.poly({tuple(exps): 1}))
    terms = []
    for k in range(1, n):
        for mat in enumerate_A(params, k - 1):
            base = mat.x_exponents(table)
            for j in range(1, g + 1):
                exps = list(base)
                exps[table.x_index(j, k)] += params.m[k - 1]
                exps[table.x_index(j, k + 1)] += d[k]
                terms.append((tuple(exps), 1))
    for mat in enumerate_A(params, n):
        exps = list(mat.x_exponents(table))
        exps[table.y_index(mat.rows)] += 1
        terms.append((tuple(exps), 1))
    gens.append(ring.poly(terms))
    return IdealPresentation(ring, gens)


def socle_witness(params: FamilyParams, table: VariableTable | None = None) -> Monomial:
    """The witness monomial prod x[j,k]^(d_k - 1); no y variables occur."""
    if table is None:
        table = family_table(params)
    cs = derived_constants(params)
    exps = [0] * len(table)
    for j in range(1, params.g + 1):
        for k in range(1, params.n + 1):
            exps[table.x_index(j, k)] = cs.d[k - 1] - 1
    return Monomial(table, exps)


def lemma_targets(params: FamilyParams, table: VariableTable | None = None) -> list[Monomial]:
    """The stage monomials prod_{k' <= k} x[.,k']^(d_k'-1) * x[j,k+1]^(d_{k+1}).

    Listed for every stage k in 0..n-1 and row j; stage 0 gives the pure
    powers x[j,1]^d.
    """
    if table is None:
        table = family_table(params)
    cs = derived_constants(params)
    out = []
    for k in range(params.n):
        base = [0] * len(table)
        for kk in range(1, k + 1):
            for j in range(1, params.g + 1):
                base[table.x_index(j, kk)] = cs.d[kk - 1] - 1
        for j in range(1, params.g + 1):
            exps = list(base)
            exps[table.x_index(j, k + 1)] += cs.d[k]
            out.append(Monomial(table, exps))
    return out


def pd_formula(params: FamilyParams) -> int:
    """Closed product formula for the projective dimension of the quotient."""
    g, m = params.g, params.m
    n = len(m)
    value = 1
    for i in range(n - 1):
        value *= comb(m[i] + g - 1, g - 1) - g
    value *= comb(m[-1] + g - 1, g - 1)
    return value + g * n


def variable_count(params: FamilyParams) -> int:
    """Ring size by direct count: the x grid plus the enumerated matrices."""
    return params.g * params.n + len(enumerate_A(params, params.n))


@dataclass(frozen=True)
class SocleReport:
    """Outcome of the depth-zero verification for one parameter choice."""

    params: FamilyParams
    witness: Monomial
    not_in_ideal: bool
    killed_by: tuple[tuple[str, bool], ...]
    conclusion: bool
    implied_pd: int

    def as_dict(self):
        return {
            "params": str(self.params),
            "witness": str(self.witness),
            "not_in_ideal": self.not_in_ideal,
            "killed_by": {name: ok for name, ok in self.killed_by},
            "conclusion": self.conclusion,
            "implied_pd": self.implied_pd,
        }


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of the stage-monomial membership check."""

    params: FamilyParams
    ok: bool
    failures: tuple[Monomial, ...]

    def as_dict(self):
        return {
            "params": str(self.params),
            "ok": self.ok,
            "failures": [str(m) for m in self.failures],
        }


def verification_degree(params: FamilyParams) -> int:
    """Largest degree any socle or stage-monomial membership test reaches."""
    table = family_table(params)
    top = socle_witness(params, table).degree + 1
    for mono in lemma_targets(params, table):
        top = max(top, mono.degree)
    return top


def verification_basis(params: FamilyParams, field=None) -> GroebnerBasis:
    """Groebner basis truncated just above the largest membership degree.

    Homogeneous reduction never raises degree, so membership of elements
    at or below the truncation degree is exact while the computation
    stays far cheaper than a full basis.  Tails are kept as raw division
    remainders and the final interreduction is skipped: both choices keep
    this family's bases much sparser and change no membership answer.
    """
    return buchberger(
        build_ideal(params, field),
        degree_limit=verification_degree(params),
        tail_reduce=False,
        interreduce=False,
    )


def verify_socle(
    params: FamilyParams,
    basis: GroebnerBasis | None = None,
    field=None,
) -> SocleReport:
    """Check the witness lies outside the ideal while every variable kills it.

    A true conclusion verifies depth zero for this instance, so the
    projective dimension equals the number of ring variables.
    """
    if basis is None:
        basis = verification_basis(params, field)
    ring = basis.ring
    witness = socle_witness(params, ring.table)
    return _socle_report_for(params, basis, ring.from_monomial(witness), witness)


def _socle_report_for(params, basis, witness_poly, witness_mono):
    ring = basis.ring
    not_in = not basis.contains(witness_poly)
    killed = []
    for i, name in enumerate(ring.table.names):
        v = ring.variable(i)
        killed.append((name, basis.contains(v * witness_poly)))
    conclusion = not_in and all(ok for _, ok in killed)
    return SocleReport(
        params=params,
        witness=witness_mono,
        not_in_ideal=not_in,
        killed_by=tuple(killed),
        conclusion=conclusion,
        implied_pd=ring.nvars,
    )


def verify_socle_ideal(ideal: IdealPresentation, witness: Monomial, basis=None, params=None) -> SocleReport:
    """Socle verification for an explicit ideal and witness monomial."""
    if basis is None:
        basis = buchberger(
            ideal,
            degree_limit=witness.degree + 1,
            tail_reduce=False,
            interreduce=False,
        )
    ring = basis.ring
    return _socle_report_for(params, basis, ring.from_monomial(witness), witness)


def verify_lemma(
    params: FamilyParams,
    basis: GroebnerBasis | None = None,
    field=None,
) -> LemmaReport:
    """Check that every stage monomial is an ideal member."""
    if basis is None:
        basis = verification_basis(params, field)
    ring = basis.ring
    failures = []
    for mono in lemma_targets(params, ring.table):
        if not basis.contains(ring.from_monomial(mono)):
            failures.append(mono)
    return LemmaReport(params=params, ok=not failures, failures=tuple(failures))


def _monomials_of_degree(nvars: int, degree: int):
    """Exponent tuples of total degree ``degree``, descending in grevlex."""
    order = MonomialOrder("grevlex")
    combos = []
    for bars in itertools.combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for i in bars:
            exps[i] += 1
        combos.append(tuple(exps))
    combos.sort(key=order.heapkey)
    return combos


def mccullough_ideal(m: int, n: int, d: int, field=None, order=None) -> IdealPresentation:
    """Pure powers x_i^d plus one bilinear-in-y generator per column.

    The ring has m + p*n variables where p counts the degree d-1
    monomials Z_1 > Z_2 > ... in x_1..x_m; column k contributes the
    generator sum_j Z_j * y[j,k].
    """
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    if d < 2:
        raise ValidationError(f"d must be >= 2, got {d}")
    if field is None:
        field = default_field()
    zs = _monomials_of_degree(m, d - 1)
    p = len(zs)
    names = [f"x[{i}]" for i in range(1, m + 1)]
    names += [f"y[{j},{k}]" for k in range(1, n + 1) for j in range(1, p + 1)]
    table = VariableTable.named(names)
    ring = PolynomialRing(table, field, order if isinstance(order, MonomialOrder) else (MonomialOrder(order) if order else None))
    nv = len(table)
    gens = []
    for i in range(m):
        exps = [0] * nv
        exps[i] = d
        gens.append(ring.poly({tuple(exps): 1}))
    for k in range(1, n + 1):
        terms = []
        for j, z in enumerate(zs, start=1):
            exps = [0] * nv
            exps[: m] = z
            exps[table.index(f"y[{j},{k}]")] = 1
            terms.append((tuple(exps), 1))
        gens.append(ring.poly(terms))
    return IdealPresentation(ring, gens)


def mccullough_witness(m: int, n: int, d: int, table: VariableTable) -> Monomial:
    """Witness prod x_i^(d-1) for the m + p*n variable special family."""
    exps = [0] * len(table)
    for i in range(m):
        exps[i] = d - 1
    return Monomial(table, exps)


def caviglia_ideal(d: int, field=None, order=None) -> IdealPresentation:
    """The three generators x^d, y^d, x*w^(d-1) - y*z^(d-1) in K[w,x,y,z]."""
    if d < 2:
        raise ValidationError(f"d must be >= 2, got {d}")
    if field is None:
        field = default_field()
    table = VariableTable.named(["w", "x", "y", "z"])
    ring = PolynomialRing(table, field, order if isinstance(order, MonomialOrder) else (MonomialOrder(order) if order else None))
    w, x, y, z = (ring.variable(i) for i in range(4))
    gens = [x**d, y**d, x * w ** (d - 1) - y * z ** (d - 1)]
    return IdealPresentation(ring, gens)


@dataclass(frozen=True)
class SubfamilyMatch:
    """A recognized special form of a parameter choice."""

    label: str
    constructor: str
    arguments: tuple[int, ...]
    variable_map: tuple[tuple[str, str], ...]
    sign_map: tuple[tuple[str, int], ...] | None
    verification: str

    def as_dict(self):
        return {
            "label": self.label,
            "constructor": self.constructor,
            "arguments": list(self.arguments),
            "variable_map": {a: b for a, b in self.variable_map},
            "sign_map": None if self.sign_map is None else {a: s for a, s in self.sign_map},
            "verification": self.verification,
        }


def _transplant(poly: Polynomial, target_ring: PolynomialRing, index_map) -> Polynomial:
    """Rebuild a polynomial over another ring along a variable index map."""
    terms = []
    for e, c in poly.terms:
        exps = [0] * target_ring.nvars
        for i, x in enumerate(e):
            if x:
                exps[index_map[i]] += x
        terms.append((tuple(exps), c))
    return target_ring.poly(terms)


def _gb_equal_after_signs(family_ideal, target_ideal, index_map, signs):
    ring = target_ideal.ring
    mapped = []
    for gen in family_ideal.generators:
        q = _transplant(gen, ring, index_map)
        q = q.substitute_signs({i: signs[i] for i in range(ring.nvars)})
        mapped.append(q)
    left = buchberger(IdealPresentation(ring, mapped))
    right = buchberger(target_ideal)
    return left.elements == right.elements


def identify_subfamily(params: FamilyParams, field=None) -> SubfamilyMatch | None:
    """Recognize parameter choices matching a special constructor.

    ``g:(1,q)`` matches the four-variable three-generator family of
    degree q+2; ``g:(q)`` matches the m + p*n family with one column and
    degree q+1.  Equality of ideals is proved by reduced-basis comparison
    after renaming (and, for the first family, a searched sign flip);
    when no unit substitution works the match falls back to comparing
    Betti tables.
    """
    if field is None:
        field = default_field()
    g, m = params.g, params.m

    if g == 2 and params.n == 2 and m[0] == 1:
        d = m[1] + 2
        family = build_ideal(params, field)
        target = caviglia_ideal(d, field)
        ftab, ttab = family.ring.table, target.ring.table
        pairs = [("x[1,1]", "x"), ("x[2,1]", "y"), ("x[1,2]", "w"), ("x[2,2]", "z")]
        index_map = {ftab.index(a): ttab.index(b) for a, b in pairs}
        for signs in itertools.product((1, -1), repeat=4):
            if _gb_equal_after_signs(family, target, index_map, signs):
                return SubfamilyMatch(
                    label=f"caviglia d={d}",
                    constructor="caviglia",
                    arguments=(d,),
                    variable_map=tuple(pairs),
                    sign_map=tuple(zip(ttab.names, signs)),
                    verification="groebner",
                )
        from .resolution import resolve

        if resolve(family) == resolve(target):
            return SubfamilyMatch(
                label=f"caviglia d={d}",
                constructor="caviglia",
                arguments=(d,),
                variable_map=tuple(pairs),
                sign_map=None,
                verification="betti",
            )
        return None

    if params.n == 1:
        d = m[0] + 1
        family = build_ideal(params, field)
        target = mccullough_ideal(g, 1, d, field)
        ftab, ttab = family.ring.table, target.ring.table
        pairs = [(f"x[{j},1]", f"x[{j}]") for j in range(1, g + 1)]
        zs = _monomials_of_degree(g, d - 1)
        z_pos = {z: j for j, z in enumerate(zs, start=1)}
        for mat in enumerate_A(params, 1):
            col = mat.column(0)
            pairs.append((f"y{mat}", f"y[{z_pos[col]},1]"))
        index_map = {ftab.index(a): ttab.index(b) for a, b in pairs}
        if _gb_equal_after_signs(family, target, index_map, (1,) * target.ring.nvars):
            return SubfamilyMatch(
                label=f"mccullough m={g} n=1 d={d}",
                constructor="mccullough",
                arguments=(g, 1, d),
                variable_map=tuple(pairs),
                sign_map=tuple((nm, 1) for nm in ttab.names),
                verification="groebner",
            )
        return None

    return None


def preset_three_generators(p: int) -> FamilyParams:
    """Parameters with three generators of degree p^2 (for p >= 2)."""
    if p < 2:
        raise ValidationError(f"p must be >= 2, got {p}")
    return FamilyParams(2, (p + 1,) * (p - 1) + (0,))


def preset_many_generators(p: int) -> FamilyParams:
    """Parameters with 2p+1 generators of degree 2p+1 (for p >= 1)."""
    if p < 1:
        raise ValidationError(f"p must be >= 1, got {p}")
    return FamilyParams(2 * p, (2,) * p)
