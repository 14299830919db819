import pytest

from hindman_lab.kernels import warm_up


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT compilation is one-time environment cost; keep it out of timed tests.
    warm_up()
