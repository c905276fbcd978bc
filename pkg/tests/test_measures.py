import cmath
import json
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adespectra.algebra import RationalFunction, ratfun_equal, series_expand
from adespectra.errors import CatalogError, RangeError
from adespectra.graphs import build_graph, default_catalog, loop_counts
from adespectra.measures import (
    E7_T,
    E8_T,
    CycloMeasure,
    MeasureAtom,
    alpha_d,
    alpha_d_n,
    alpha_d_prime,
    atom_moment,
    catalog_measure,
    d,
    d_n,
    d_prime,
    measure_t_series,
    moment,
    moments_from_t_series,
    point_weights,
    pushforward_from_moments,
    pushforward_moment,
    stieltjes_series,
    verify_measure,
)
from adespectra.series import t_from_stieltjes

Q = RationalFunction.x()


def om(k):
    return 1 - Q**k


def numeric_moment(atom: MeasureAtom, k: int) -> float:
    """Average u^k (times alpha) over sample points; exact for these trig polynomials."""
    if atom.kind in ("UniformCircle", "AlphaCircle"):
        pts = [cmath.exp(2j * cmath.pi * t / 64) for t in range(64)]
    else:
        pts = [cmath.exp(1j * cmath.pi * t / atom.n) for t in range(2 * atom.n)]
    weight = (lambda u: 2 * u.imag**2) if atom.is_alpha else (lambda u: 1)
    return sum(weight(u) * u**k for u in pts).real / len(pts)


atoms = st.one_of(
    st.just(MeasureAtom("UniformCircle")),
    st.just(MeasureAtom("AlphaCircle")),
    st.builds(MeasureAtom, st.just("UniformRoots"), st.integers(1, 15)),
    st.builds(MeasureAtom, st.just("AlphaRoots"), st.integers(2, 15)),
)
measures = st.lists(st.tuples(atoms, st.fractions(-3, 3, max_denominator=6)), max_size=5).map(CycloMeasure)
# the T-series relation fixes the constant term, so it needs total mass 1
probability_measures = measures.map(lambda m: m + (1 - m.mass) * alpha_d())


# atoms ---------------------------------------------------------------------------------


def test_atom_parse_and_str():
    a = MeasureAtom.parse("AlphaRoots(12)")
    assert a == MeasureAtom("AlphaRoots", 12) and str(a) == "AlphaRoots(12)" and a.short() == "alpha*d_12"
    assert MeasureAtom.parse("UniformCircle").short() == "d"


@pytest.mark.parametrize("text", ["AlphaRoots(1)", "UniformRoots(0)"])
def test_atom_range(text):
    with pytest.raises(RangeError):
        MeasureAtom.parse(text)


@pytest.mark.parametrize("text", ["Roots(3)", "UniformCircle(2)", "d_3"])
def test_atom_bad_text(text):
    with pytest.raises(ValueError):
        MeasureAtom.parse(text)


# moments -------------------------------------------------------------------------------


def test_moment_examples():
    assert moment(d_n(3), 6) == 1
    assert moment(d_n(3), 4) == 0
    assert moment(alpha_d(), 2) == Fraction(-1, 2)
    for n in range(2, 10):
        assert moment(alpha_d_n(n), 0) == 1


@given(atoms, st.integers(-40, 40))
def test_atom_moments_match_numeric_average(atom, k):
    assert abs(float(atom_moment(atom, k)) - numeric_moment(atom, k)) < 1e-9


@given(measures, st.integers(0, 40))
def test_evenness_and_inversion(m, k):
    if k % 2:
        assert moment(m, k) == 0
    assert moment(m, k) == moment(m, -k)


@pytest.mark.parametrize("j", range(11))
def test_semicircle_catalan(j):
    assert pushforward_moment(alpha_d(), 2 * j) == comb(2 * j, j) // (j + 1)


@pytest.mark.parametrize("n", [2, 3, 5, 9])
def test_roots_give_central_binomials(n):
    for j in range(n):
        assert pushforward_moment(d_n(n), 2 * j) == comb(2 * j, j)


@given(measures)
def test_probability_mass(m):
    assert moment(m, 0) == m.mass
    assert pushforward_moment(m, 0) == m.mass


def test_pushforward_rejects_negative():
    with pytest.raises(ValueError):
        pushforward_moment(d(), -1)


@given(measures, st.integers(0, 20))
def test_pushforward_from_moment_list(m, k):
    ms = [moment(m, j) for j in range(k + 1)]
    assert pushforward_from_moments(ms, k) == pushforward_moment(m, k)


# T-series ------------------------------------------------------------------------------


def test_atom_t_series_closed_forms():
    for n in range(1, 9):
        assert ratfun_equal(measure_t_series(d_n(n)), (1 + Q**n) / ((1 - Q) * om(n)))
        assert ratfun_equal(measure_t_series(d_prime(n)), om(n) / ((1 - Q) * (1 + Q**n)))
    for n in range(2, 9):
        assert ratfun_equal(measure_t_series(alpha_d_n(n)), om(n - 1) / om(n))
        assert ratfun_equal(measure_t_series(alpha_d_prime(n)), (1 + Q ** (n - 1)) / (1 + Q**n))


def test_alpha_circle_t_is_one():
    assert measure_t_series(alpha_d()) == RationalFunction(1)
    assert measure_t_series(d()) == 1 / (1 - Q)


def test_alpha_d2_is_d_prime_1():
    # the atom basis is dependent: both are the half-half measure on +-i
    assert all(moment(alpha_d_n(2), k) == moment(d_prime(1), k) for k in range(-20, 21))
    assert alpha_d_prime(1) == 2 * alpha_d_n(2)


@given(probability_measures)
def test_t_series_agrees_with_moments(m):
    via_moments = t_from_stieltjes(stieltjes_series(m, 40))
    assert via_moments == series_expand(measure_t_series(m), 20)


@given(probability_measures)
def test_moments_from_t_series_inverts(m):
    assert moments_from_t_series(measure_t_series(m), 15) == [moment(m, k) for k in range(31)]


# algebra and JSON ------------------------------------------------------------------------


def test_measure_arithmetic():
    m = alpha_d_n(12) + (d_n(12) - d_n(6) - d_n(4) + d_n(3)) / 2
    assert m.mass == 1
    assert len(m) == 5
    assert m - m == CycloMeasure()
    assert str(m) == "alpha*d_12 + 1/2*d_3 - 1/2*d_4 - 1/2*d_6 + 1/2*d_12"


@given(measures)
def test_json_round_trip(m):
    text = json.dumps(m.to_json())
    assert CycloMeasure.from_json(json.loads(text)) == m


def test_json_shape():
    assert alpha_d_n(3).to_json() == {"AlphaRoots(3)": "1/1"}


def test_point_weights_of_d2():
    w = point_weights(d_n(2))
    total = sum(float(x) for _, x in w["points"])
    assert abs(total - 1) < 1e-15


# catalog -------------------------------------------------------------------------------


def test_catalog_examples():
    assert catalog_measure("A(4)").measure == alpha_d_n(5)
    assert catalog_measure("D1ext(7)").measure == (d_prime(1) + d_n(5)) / 2
    e6 = catalog_measure("E6")
    assert e6.measure == alpha_d_n(12) + (d_n(12) - d_n(6) - d_n(4) + d_n(3)) / 2
    assert e6.cyclotomic


@pytest.mark.parametrize("name, t", [("E7", E7_T), ("E8", E8_T)])
def test_exceptional_entries_carry_no_measure(name, t):
    entry = catalog_measure(name)
    assert entry.measure is None and not entry.cyclotomic
    assert entry.t_series == t


def test_catalog_unknown():
    with pytest.raises(CatalogError):
        catalog_measure("X(3)")
    with pytest.raises(CatalogError):
        catalog_measure("F(3,3,3)")


def test_verify_examples():
    assert verify_measure("A1ext(6)", d_n(3), 15)
    assert verify_measure("E8ext", alpha_d_n(6) + (d_n(5) - d_n(6)) / 2, 20)
    assert not verify_measure("A(4)", alpha_d_n(4), 10)


@pytest.mark.parametrize("name", [str(n) for n in default_catalog() if str(n) not in ("E7", "E8")])
def test_every_catalog_measure_matches_loops(name):
    entry = catalog_measure(name)
    assert entry.measure.mass == 1
    assert verify_measure(name, entry.measure, 20)


@pytest.mark.parametrize("name", ["AInf", "DInf", "AZZ"])
def test_symbolic_graphs(name):
    assert verify_measure(name, catalog_measure(name).measure, 15)


@pytest.mark.parametrize("name, t", [("E7", E7_T), ("E8", E8_T)])
def test_exceptional_moments_from_t(name, t):
    ms = moments_from_t_series(t, 20)
    loops = loop_counts(build_graph(name), 20)
    assert [pushforward_from_moments(ms, 2 * k) for k in range(21)] == loops
