import numpy as np
import pytest

from lrdcov import custom_spec


@pytest.fixture
def iid_spec_p1():
    """Scalar i.i.d. process: A_0 = 1, A_t = 0 otherwise."""
    return custom_spec(lambda t: np.eye(1) if t == 0 else np.zeros((1, 1)),
                       beta=1.0, p=1, d=1, truncation=4)


@pytest.fixture
def iid_spec_p2():
    return custom_spec(lambda t: np.eye(2) if t == 0 else np.zeros((2, 2)),
                       beta=1.0, p=2, d=2, truncation=4)
