from functools import lru_cache

import numpy as np
import pytest

from tkkcones import faces as F
from tkkcones import roots_cones as rc
from tkkcones.jts import HermitianJts
from tkkcones.tkk_lie import LieAlgebraG

ACCEPTANCE = [("I", 1, 1), ("I", 2, 2), ("I", 2, 3), ("III", 2), ("IV", 4)]
EXTRA = [("II", 4), ("IV", 3)]


def label(d):
    return f"{d[0]}({','.join(map(str, d[1:]))})"


@lru_cache(maxsize=None)
def jts(d):
    return HermitianJts(*d)


@lru_cache(maxsize=None)
def lie(d):
    return LieAlgebraG(jts(d))


@lru_cache(maxsize=None)
def roots(d):
    return rc.build_root_data(lie(d))


@lru_cache(maxsize=None)
def context(d):
    return F.FaceContext(lie(d))


@lru_cache(maxsize=None)
def classes(d):
    return F.enumerate_face_classes(lie(d), context(d))


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)


def random_z(rng, Z, scale=1.0):
    return scale * (rng.normal(size=Z.n) + 1j * rng.normal(size=Z.n))
