import numpy as np
import pytest

from newtonstrata import _kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # bind (and, for the numba backend, compile) the kernels once, so that
    # timed test sections measure computation rather than JIT startup
    impl = _kernels.implementations(_kernels.active_backend())
    impl["rref_mod_p"](np.eye(2, dtype=np.int64), np.int64(2))
    z = np.zeros((1, 1), dtype=np.int64)
    impl["scan_intertwiners"](z, z, z, z, np.int64(2))
    yield
