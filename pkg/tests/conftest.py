import json

import numpy as np
import pytest

from twonormlab import GramSpace, ProductSpace


@pytest.fixture
def r3():
    return GramSpace(np.eye(3))


@pytest.fixture
def skew2():
    return GramSpace(np.array([[2.0, 1.0], [1.0, 3.0]]))


@pytest.fixture
def prod22():
    return ProductSpace(GramSpace(np.eye(2)), GramSpace(np.eye(2)))


@pytest.fixture
def write_spec(tmp_path):
    def _write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return _write
