"""Shared test fixtures.

The kernel backend is process-global state; every test runs against the
default backend unless it switches explicitly, and a teardown puts the
default back so test order cannot leak a backend choice.
"""

import numpy as np
import pytest

from pherofly import kernels

_DEFAULT_BACKEND = kernels.BACKEND


@pytest.fixture(autouse=True)
def _restore_backend():
    yield
    if kernels.BACKEND != _DEFAULT_BACKEND:
        kernels.use_backend(_DEFAULT_BACKEND)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
