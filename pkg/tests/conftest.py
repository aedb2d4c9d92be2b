from fractions import Fraction

import pytest

import flatcurve as fc


def zp(re, im=0):
    """Exact point from ints/fractions/strings."""
    return fc.ZPoint(Fraction(re), Fraction(im))


@pytest.fixture
def lattice5():
    return fc.generate(fc.GeneratorSpec("gaussian-lattice"), 5)


@pytest.fixture
def integers10():
    return fc.generate(fc.GeneratorSpec("all-integers"), 10)
