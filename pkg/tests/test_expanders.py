import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ustconn.errors import ParameterError, SearchFailure
from ustconn.expanders import (
    cayley_f2m,
    certified_base,
    character_spectrum,
    derive_seed,
    find_expander,
    random_regular,
)
from ustconn.graph import to_adjacency, validate_rotation_map
from ustconn.spectral import eigenvalues, lambda_abs2, normalized_adjacency


def test_derive_seed_is_deterministic_and_counter_sensitive():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    assert derive_seed(1, 2, 3) != derive_seed(1, 3, 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 20), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_random_regular_is_valid(n, d, seed):
    if n * d % 2:
        with pytest.raises(ParameterError):
            random_regular(n, d, seed)
        return
    r = random_regular(n, d, seed)
    assert validate_rotation_map(r).ok
    assert (to_adjacency(r).sum(axis=1) == d).all()


def test_random_regular_reproducible():
    assert random_regular(10, 4, 7) == random_regular(10, 4, 7)


def test_find_expander_reports_measured_alpha():
    h, spec = find_expander(16, 8, 0.6, 3)
    assert spec.alpha == pytest.approx(lambda_abs2(h))
    assert spec.alpha <= 0.6
    assert spec.target == 0.6
    assert set(spec.to_json()) == {"n", "d", "alpha", "seed", "tries", "target"}


def test_find_expander_failure():
    with pytest.raises(SearchFailure) as err:
        find_expander(8, 2, 0.1, 0, max_tries=5)
    assert err.value.tries == 5
    assert err.value.best > 0.1


def test_certified_base_degree_two_uses_looped_path():
    h, spec = certified_base(4, 2, 0.75, 0)
    assert spec.alpha == pytest.approx(2 ** -0.5)
    with pytest.raises(SearchFailure):
        certified_base(16, 2, 0.75, 0)


@pytest.mark.parametrize("m,gens", [
    (1, [1]),
    (2, ["01", "10", "11"]),
    (3, [1, 2, 4, 7]),
    (4, [1, 2, 4, 8, 15]),
    (5, [3, 5, 9, 17, 31, 6]),
    (6, [1, 2, 4, 8, 16, 32, 63, 21]),
    (7, [1, 2, 4, 8, 16, 32, 64, 127, 85]),
    (8, [1, 2, 4, 8, 16, 32, 64, 128, 255, 170]),
])
def test_cayley_spectrum_matches_characters(m, gens):
    r = cayley_f2m(m, gens)
    assert validate_rotation_map(r).ok
    measured = eigenvalues(normalized_adjacency(r))
    assert np.allclose(measured, character_spectrum(m, gens), atol=1e-9)


def test_cayley_hypercube():
    # generators e_i give the hypercube: eigenvalues 1 - 2j/m
    vals = character_spectrum(3, [1, 2, 4])
    expected = np.sort(1 - 2 * np.array([0, 1, 1, 1, 2, 2, 2, 3]) / 3)[::-1]
    assert np.allclose(vals, expected, atol=1e-12)


def test_cayley_zero_generator_warns():
    with pytest.warns(UserWarning):
        r = cayley_f2m(2, [0, 1])
    assert r.rot(3, 0) == (3, 0)


@pytest.mark.parametrize("gens", [["012"], [8], ["1"]])
def test_cayley_rejects_bad_generators(gens):
    with pytest.raises(ParameterError):
        cayley_f2m(3, gens)
