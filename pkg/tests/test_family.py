import itertools

import pytest

from idealfam import (
    ExponentMatrix,
    FamilyParams,
    ValidationError,
    build_ideal,
    buchberger,
    caviglia_ideal,
    derived_constants,
    enumerate_A,
    identify_subfamily,
    lemma_targets,
    mccullough_ideal,
    mccullough_witness,
    pd_formula,
    preset_many_generators,
    preset_three_generators,
    socle_witness,
    variable_count,
    verification_basis,
    verify_lemma,
    verify_socle,
    verify_socle_ideal,
)


def sweep_params(max_g=4, max_n=3, max_m=4):
    out = []
    for n in range(1, max_n + 1):
        ranges = []
        for i in range(n):
            lo = 0 if i == n - 1 else (1 if i == n - 2 else 2)
            ranges.append(range(lo, max_m + 1))
        for m in itertools.product(*ranges):
            for g in range(2, max_g + 1):
                out.append(FamilyParams(g, m))
    return out


# ------------------------------------------------------------ parameters

def test_params_validation():
    FamilyParams(2, (2, 2, 2))
    FamilyParams(2, (0,))        # n = 1 allows m_1 = 0
    FamilyParams(2, (1, 0))
    with pytest.raises(ValidationError):
        FamilyParams(1, (2,))
    with pytest.raises(ValidationError):
        FamilyParams(2, ())
    with pytest.raises(ValidationError):
        FamilyParams(2, (1, 2, 2))   # m_1 >= 2 required for n = 3
    with pytest.raises(ValidationError):
        FamilyParams(2, (2, 0, 2))   # m_(n-1) >= 1
    with pytest.raises(ValidationError):
        FamilyParams(2, (2, -1))


def test_params_parse_and_str():
    p = FamilyParams.parse("2:(2,2,2)")
    assert p == FamilyParams(2, (2, 2, 2))
    assert str(p) == "2:(2,2,2)"
    assert FamilyParams.parse(" 3 : ( 4 , 0 ) ") == FamilyParams(3, (4, 0))
    with pytest.raises(ValidationError):
        FamilyParams.parse("2:2,2")
    with pytest.raises(ValidationError):
        FamilyParams.parse("1:(2)")


def test_derived_constants_example():
    cs = derived_constants(FamilyParams(2, (2, 2, 2)))
    assert cs.d == (7, 5, 3)
    assert cs.M == (1, 1, 2)
    assert cs.degree == 7


def test_derived_constants_strictly_decreasing():
    for params in sweep_params(3, 3, 3):
        d = derived_constants(params).d
        assert all(a > b for a, b in zip(d, d[1:]))
        assert d[-1] == params.m[-1] + 1
        assert all(x > 0 for x in d)


# ------------------------------------------------------------- stage sets

def test_enumerate_stage_sets_of_2_222():
    params = FamilyParams(2, (2, 2, 2))
    assert [m.rows for m in enumerate_A(params, 0)] == [((0, 0, 0), (0, 0, 0))]
    assert [m.rows for m in enumerate_A(params, 1)] == [((1, 0, 0), (1, 0, 0))]
    assert [m.rows for m in enumerate_A(params, 2)] == [((1, 1, 0), (1, 1, 0))]
    a3 = {m.rows for m in enumerate_A(params, 3)}
    assert a3 == {
        ((1, 1, 2), (1, 1, 0)),
        ((1, 1, 1), (1, 1, 1)),
        ((1, 1, 0), (1, 1, 2)),
    }


def test_enumerate_empty_when_blocked():
    assert enumerate_A(FamilyParams(2, (2, 1, 2)), 3) == []
    assert enumerate_A(FamilyParams(2, (2, 1, 2)), 2) == []


def test_enumerate_membership_invariant():
    for params in sweep_params(3, 2, 3):
        for k in range(params.n + 1):
            mats = enumerate_A(params, k)
            assert len({m.rows for m in mats}) == len(mats)
            for m in mats:
                assert m.in_stage(params, k)
            keys = [m.colmajor() for m in mats]
            assert keys == sorted(keys)


def test_stage_set_nonempty_conditions():
    # Stages below n-1 are nonempty; the last two are nonempty iff
    # m_(n-1) >= 2.
    for params in sweep_params(4, 3, 4):
        n = params.n
        for k in range(max(n - 1, 0)):
            assert enumerate_A(params, k)
        if n >= 2:
            tail_nonempty = bool(enumerate_A(params, n)) and bool(
                enumerate_A(params, n - 1)
            )
            assert tail_nonempty == (params.m[n - 2] >= 2)


def test_final_stage_column_characterization():
    # Columns before the last are exactly the non-pure-power exponent
    # vectors of their degree; the last column is unconstrained.
    from math import comb

    for params in sweep_params(3, 3, 3):
        g, n = params.g, params.m and len(params.m)
        mats = enumerate_A(params, n)
        for mat in mats:
            for k in range(n - 1):
                col = mat.column(k)
                assert sum(col) == params.m[k]
                assert sum(1 for e in col if e) >= 2
        count = 1
        for k in range(n - 1):
            pure = g if params.m[k] >= 1 else 0
            count *= comb(params.m[k] + g - 1, g - 1) - pure
        count *= comb(params.m[-1] + g - 1, g - 1)
        if any(params.m[k] == 0 for k in range(n - 1)):
            count = 0
        assert len(mats) == count


# ---------------------------------------------------------------- ideals

def test_build_ideal_example_2_222():
    ideal = build_ideal(FamilyParams(2, (2, 2, 2)))
    R = ideal.ring
    assert R.nvars == 9
    assert len(ideal.generators) == 3
    assert str(ideal.generators[0]) == "x[1,1]^7"
    assert str(ideal.generators[1]) == "x[2,1]^7"
    f = ideal.generators[2]
    assert len(f) == 7
    expect = R.parse(
        "x[1,1]^2*x[1,2]^5 + x[2,1]^2*x[2,2]^5"
        " + x[1,1]*x[2,1]*x[1,2]^2*x[1,3]^3 + x[1,1]*x[2,1]*x[2,2]^2*x[2,3]^3"
        " + x[1,1]*x[2,1]*x[1,2]*x[2,2]*x[1,3]^2*y[[1,1,2],[1,1,0]]"
        " + x[1,1]*x[2,1]*x[1,2]*x[2,2]*x[1,3]*x[2,3]*y[[1,1,1],[1,1,1]]"
        " + x[1,1]*x[2,1]*x[1,2]*x[2,2]*x[2,3]^2*y[[1,1,0],[1,1,2]]"
    )
    assert f == expect


def test_build_ideal_example_2_212():
    ideal = build_ideal(FamilyParams(2, (2, 1, 2)))
    R = ideal.ring
    assert R.nvars == 6
    assert str(ideal.generators[0]) == "x[1,1]^6"
    assert ideal.generators[2] == R.parse(
        "x[1,1]^2*x[1,2]^4 + x[2,1]^2*x[2,2]^4"
        " + x[1,1]*x[2,1]*x[1,2]*x[1,3]^3 + x[1,1]*x[2,1]*x[2,2]*x[2,3]^3"
    )


def test_build_ideal_example_2_31():
    ideal = build_ideal(FamilyParams(2, (3, 1)))
    R = ideal.ring
    assert R.nvars == 8
    f = ideal.generators[2]
    expect = R.parse(
        "x[1,1]^3*x[1,2]^2 + x[2,1]^3*x[2,2]^2"
        " + x[1,1]^2*x[1,2]*x[2,1]*y[[2,1],[1,0]]"
        " + x[1,1]*x[2,1]^2*x[2,2]*y[[1,0],[2,1]]"
        " + x[1,1]*x[1,2]*x[2,1]^2*y[[1,1],[2,0]]"
        " + x[1,1]^2*x[2,1]*x[2,2]*y[[2,0],[1,1]]"
    )
    assert f == expect
    assert {g.homogeneous_degree() for g in ideal.generators} == {5}


def test_generator_count_and_term_count_formula():
    for params in sweep_params(3, 3, 3):
        ideal = build_ideal(params)
        g, n = params.g, params.n
        assert len(ideal.generators) == g + 1
        d = derived_constants(params).degree
        assert all(p.homogeneous_degree() == d for p in ideal.generators)
        sizes = [len(enumerate_A(params, k)) for k in range(n + 1)]
        expect_terms = g * sum(sizes[k - 1] for k in range(1, n)) + sizes[n]
        assert len(ideal.generators[-1]) == expect_terms
        assert ideal.ring.nvars == g * n + sizes[n]


# -------------------------------------------------------------- witnesses

def test_socle_witness_examples():
    w = socle_witness(FamilyParams(2, (2, 2, 2)))
    assert str(w) == "x[1,1]^6*x[2,1]^6*x[1,2]^4*x[2,2]^4*x[1,3]^2*x[2,3]^2"
    assert str(socle_witness(FamilyParams(2, (1, 1)))) == \
        "x[1,1]^2*x[2,1]^2*x[1,2]*x[2,2]"
    assert str(socle_witness(FamilyParams(2, (3, 1)))) == \
        "x[1,1]^4*x[2,1]^4*x[1,2]*x[2,2]"


def test_socle_witness_degree_and_support():
    for params in sweep_params(3, 3, 3):
        w = socle_witness(params)
        cs = derived_constants(params)
        assert w.degree == params.g * sum(d - 1 for d in cs.d)
        assert all(
            w.exps[i] == 0
            for i in range(params.g * params.n, len(w.exps))
        )


def test_socle_witness_avoids_generator_leads():
    for params in sweep_params(3, 2, 3):
        ideal = build_ideal(params)
        w = socle_witness(params, ideal.ring.table)
        mono = ideal.ring.from_monomial(w)
        for gpoly in ideal.generators:
            assert not gpoly.lm.divides(mono.lm)


def test_lemma_targets_examples():
    params = FamilyParams(2, (2, 2, 2))
    names = [str(m) for m in lemma_targets(params)]
    assert names[0] == "x[1,1]^7"
    assert names[1] == "x[2,1]^7"
    assert names[2] == "x[1,1]^6*x[2,1]^6*x[1,2]^5"
    assert names[3] == "x[1,1]^6*x[2,1]^6*x[2,2]^5"
    small = [str(m) for m in lemma_targets(FamilyParams(2, (1, 1)))]
    assert small[2:] == [
        "x[1,1]^2*x[2,1]^2*x[1,2]^2",
        "x[1,1]^2*x[2,1]^2*x[2,2]^2",
    ]


# ---------------------------------------------------------------- formula

def test_pd_formula_paper_values():
    assert pd_formula(FamilyParams(2, (2, 2, 2))) == 9
    assert pd_formula(FamilyParams(2, (3, 1))) == 8
    assert pd_formula(FamilyParams(2, (2, 1, 2))) == 6


def test_variable_count_examples():
    assert variable_count(FamilyParams(2, (2, 2, 2))) == 9
    assert variable_count(FamilyParams(2, (2, 1, 2))) == 6
    assert variable_count(FamilyParams(2, (3, 1))) == 8


def test_formula_equals_count_sweep():
    params_list = sweep_params(4, 3, 4)
    assert len(params_list) >= 100
    for params in params_list:
        assert pd_formula(params) == variable_count(params)


# ----------------------------------------------------------- verification

def test_verify_socle_small():
    params = FamilyParams(2, (1, 1))
    rep = verify_socle(params)
    assert rep.conclusion
    assert rep.not_in_ideal
    assert all(ok for _, ok in rep.killed_by)
    assert rep.implied_pd == 4
    assert rep.as_dict()["conclusion"] is True


def test_verify_lemma_small():
    for text in ("2:(1,1)", "3:(2,0)", "2:(2,0)"):
        params = FamilyParams.parse(text)
        rep = verify_lemma(params)
        assert rep.ok, text
        assert rep.failures == ()


def test_verify_socle_negative_control():
    # A wrong witness must fail: drop one variable power.
    params = FamilyParams(2, (1, 1))
    ideal = build_ideal(params)
    basis = verification_basis(params)
    bad = ideal.ring.monomial([1, 2, 1, 1])
    rep = verify_socle_ideal(ideal, bad, basis, params)
    assert not rep.conclusion


def test_shared_basis_matches_fresh_runs():
    params = FamilyParams(2, (2, 0))
    basis = verification_basis(params)
    assert verify_socle(params, basis).conclusion == verify_socle(params).conclusion
    assert verify_lemma(params, basis).ok == verify_lemma(params).ok


# ------------------------------------------------------- special families

def test_mccullough_generators():
    ideal = mccullough_ideal(2, 1, 3)
    R = ideal.ring
    assert R.nvars == 5
    assert [str(g) for g in ideal.generators] == [
        "x[1]^3",
        "x[2]^3",
        "x[1]^2*y[1,1] + x[1]*x[2]*y[2,1] + x[2]^2*y[3,1]",
    ]


def test_mccullough_complete_intersection():
    ideal = mccullough_ideal(3, 0, 4)
    assert len(ideal.generators) == 3
    assert ideal.ring.nvars == 3
    assert {str(g) for g in ideal.generators} == {"x[1]^4", "x[2]^4", "x[3]^4"}


def test_mccullough_expected_pd_value():
    # m + n*p with p = 3 degree-2 monomials in 2 variables
    assert 2 + 1 * 3 == 5
    rep = verify_socle_ideal(
        mccullough_ideal(2, 1, 3),
        mccullough_witness(2, 1, 3, mccullough_ideal(2, 1, 3).ring.table),
    )
    assert rep.conclusion
    assert rep.implied_pd == 5


def test_caviglia_generators():
    i3 = caviglia_ideal(3)
    assert [str(g) for g in i3.generators] == ["x^3", "y^3", "w^2*x + 32002*y*z^2"]
    i2 = caviglia_ideal(2)
    assert [str(g) for g in i2.generators] == ["x^2", "y^2", "w*x + 32002*y*z"]
    with pytest.raises(ValidationError):
        caviglia_ideal(1)


def test_identify_subfamily_caviglia():
    match = identify_subfamily(FamilyParams(2, (1, 1)))
    assert match is not None
    assert match.constructor == "caviglia"
    assert match.arguments == (3,)
    assert match.verification == "groebner"
    signs = dict(match.sign_map)
    assert sorted(signs.values()).count(-1) >= 1  # a genuine flip was needed


def test_identify_subfamily_mccullough():
    match = identify_subfamily(FamilyParams(3, (2,)))
    assert match is not None
    assert match.constructor == "mccullough"
    assert match.arguments == (3, 1, 3)
    assert match.verification == "groebner"


def test_identify_subfamily_none():
    assert identify_subfamily(FamilyParams(2, (2, 2, 2))) is None


# ----------------------------------------------------------- preset bounds

def test_three_generator_presets():
    for p in (2, 3):
        params = preset_three_generators(p)
        cs = derived_constants(params)
        assert cs.degree == p * p
        assert len(build_ideal(params).generators) == 3 if p == 2 else True
        assert pd_formula(params) >= p ** (p - 1)
    assert preset_three_generators(2) == FamilyParams(2, (3, 0))
    assert preset_three_generators(3) == FamilyParams(2, (4, 4, 0))
    assert pd_formula(FamilyParams(2, (4, 4, 0))) == 15


def test_many_generator_presets():
    params = preset_many_generators(2)
    assert params == FamilyParams(4, (2, 2))
    cs = derived_constants(params)
    assert cs.degree == 5
    assert len(build_ideal(params).generators) == 5
    assert pd_formula(params) == 68
    assert pd_formula(params) >= 2 ** 4
