import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markovlab.interlacing import (
    AtomicMeasure,
    DegenerateAtomsError,
    Diagram,
    InterlacingError,
    InterlacingPair,
    diagram_sup_distance,
    markov_forward,
    markov_inverse,
    rescale_diagram,
    rescale_measure,
    total_variation,
    verify_interlacing,
)


def test_atomic_measure_validation():
    with pytest.raises(ValueError):
        AtomicMeasure(np.array([1.0, 0.0]), np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        AtomicMeasure(np.array([0.0, 1.0]), np.array([0.5, -0.5]))
    with pytest.raises(ValueError):
        AtomicMeasure(np.array([0.0, 1.0]), np.array([0.5, 0.6]))
    mu = AtomicMeasure.delta(3.0)
    assert mu.n == 1 and mu.moment(2) == 9.0


def test_interlacing_pair_validation():
    InterlacingPair(np.array([-1.0, 1.0]), np.array([0.0]))
    with pytest.raises(InterlacingError):
        InterlacingPair(np.array([-1.0, 1.0]), np.array([2.0]))
    with pytest.raises(InterlacingError):
        InterlacingPair(np.array([0.0, 1.0, 2.0]), np.array([0.5]))
    pair = verify_interlacing([3.0, -1.0, 1.0], [0.0, 2.0])
    assert list(pair.a) == [-1.0, 1.0, 3.0]


def test_markov_forward_two_atoms():
    mu = markov_forward(InterlacingPair(np.array([-1.0, 1.0]), np.array([0.0])))
    assert np.allclose(mu.weights, [0.5, 0.5])
    assert np.allclose(mu.atoms, [-1.0, 1.0])


def test_markov_inverse_two_atoms_closed_form():
    for w in (0.1, 0.25, 0.5, 0.9):
        mu = AtomicMeasure(np.array([-1.0, 1.0]), np.array([w, 1 - w]))
        pair = markov_inverse(mu)
        # root of w/(z+1) + (1-w)/(z-1) = 0 is 2w - 1
        assert pair.b[0] == pytest.approx(2 * w - 1, abs=1e-13)


def test_markov_roundtrip_forward_then_inverse():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(2, 30))
        a = np.cumsum(rng.uniform(0.01, 1.0, size=n))
        t = rng.uniform(0.05, 0.95, size=n - 1)
        b = a[:-1] + t * np.diff(a)
        pair = InterlacingPair(a, b)
        back = markov_inverse(markov_forward(pair))
        assert np.max(np.abs(back.b - b) / np.diff(a)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(
    gaps=st.lists(st.floats(1e-3, 5.0), min_size=2, max_size=40),
    data=st.data(),
)
def test_roundtrip_property(gaps, data):
    a = np.cumsum(np.array([0.0] + gaps))
    fractions = data.draw(
        st.lists(
            st.floats(0.05, 0.95),
            min_size=a.size - 1,
            max_size=a.size - 1,
        )
    )
    b = a[:-1] + np.array(fractions) * np.diff(a)
    pair = InterlacingPair(a, b)
    back = markov_inverse(markov_forward(pair))
    assert np.max(np.abs(back.b - b) / np.diff(a)) < 1e-10


def test_markov_inverse_rejects_degenerate_gaps():
    atoms = np.array([0.0, 1e-14, 1.0])
    mu = AtomicMeasure(atoms, np.full(3, 1 / 3))
    with pytest.raises(DegenerateAtomsError):
        markov_inverse(mu)


def test_diagram_eval_and_center():
    d = Diagram(InterlacingPair(np.array([0.0]), np.empty(0)))
    x = np.linspace(-3, 3, 13)
    assert np.allclose(d.eval(x), np.abs(x))
    d2 = Diagram(InterlacingPair(np.array([-1.0, 2.0]), np.array([0.5])))
    assert d2.center == pytest.approx(0.5)
    # far out the diagram is |x - center|
    assert d2.eval(100.0) == pytest.approx(abs(100.0 - 0.5))
    assert d2.eval(-100.0) == pytest.approx(abs(-100.0 - 0.5))


def test_diagram_is_one_lipschitz():
    rng = np.random.default_rng(2)
    a = np.sort(rng.normal(size=6))
    b = a[:-1] + np.random.default_rng(3).uniform(0.1, 0.9, 5) * np.diff(a)
    d = Diagram(InterlacingPair(a, b))
    x = np.linspace(-5, 5, 2001)
    y = d.eval(x)
    assert np.max(np.abs(np.diff(y))) <= (x[1] - x[0]) + 1e-12


def test_rescale():
    mu = AtomicMeasure(np.array([-2.0, 2.0]), np.array([0.5, 0.5]))
    assert np.allclose(rescale_measure(mu, 2.0).atoms, [-1.0, 1.0])
    d = Diagram(InterlacingPair(np.array([-2.0, 2.0]), np.array([0.0])))
    r = rescale_diagram(d, 2.0)
    assert r.eval(1.0) == pytest.approx(d.eval(2.0) / 2.0)


def test_total_variation():
    mu = AtomicMeasure(np.array([0.0, 1.0]), np.array([0.3, 0.7]))
    nu = AtomicMeasure(np.array([0.0, 1.0]), np.array([0.5, 0.5]))
    assert total_variation(mu, nu) == pytest.approx(0.2)
    assert total_variation(mu, mu) == 0.0
    other = AtomicMeasure(np.array([0.0, 2.0]), np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        total_variation(mu, other)


def test_sup_distance():
    d = Diagram(InterlacingPair(np.array([0.0]), np.empty(0)))
    grid = np.linspace(-1, 1, 101)
    assert diagram_sup_distance(d, np.abs, grid) == 0.0
