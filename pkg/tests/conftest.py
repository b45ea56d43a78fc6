import pytest

from voronoi_lab._kernels import warmup


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # Compile the jit kernels once up front so wall-clock caps in the
    # acceptance tests measure arithmetic, not compilation.
    warmup()
