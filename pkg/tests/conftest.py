"""Shared generators for randomized property tests."""

import numpy as np
import pytest

from gamedyn.games import GameProblem, random_strongly_monotone_field


def random_conjugate_spectrum(rng, size=None, positive_real=True, allow_zero=False):
    """Random eigenvalue multiset closed under conjugation.

    Mixes real values and conjugate pairs; real parts are strictly positive
    with ``positive_real`` and merely nonnegative otherwise (including pure
    imaginary pairs, plus an occasional exact zero when ``allow_zero``).
    """
    if size is None:
        size = int(rng.integers(2, 11))
    out = []
    while len(out) < size:
        kind = rng.uniform()
        if positive_real:
            re = float(rng.uniform(0.05, 3.0))
        else:
            re = 0.0 if kind < 0.35 else float(rng.uniform(0.0, 3.0))
        if kind < 0.5 and len(out) + 2 <= size:
            im = float(rng.uniform(0.05, 3.0))
            out.extend([complex(re, im), complex(re, -im)])
        else:
            if not positive_real and allow_zero and kind > 0.9:
                out.append(0.0 + 0.0j)
            elif positive_real or re > 0:
                out.append(complex(re, 0.0))
            elif len(out) + 2 <= size:
                im = float(rng.uniform(0.05, 3.0))
                out.extend([complex(0.0, im), complex(0.0, -im)])
            else:
                out.append(complex(float(rng.uniform(0.05, 3.0)), 0.0))
    return np.asarray(out[:size], dtype=complex)


def strongly_monotone_suite(count: int, d: int, seed0: int) -> list[GameProblem]:
    return [random_strongly_monotone_field(d, seed=seed0 + i) for i in range(count)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
