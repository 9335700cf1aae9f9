import os
import subprocess
import sys

import pytest

from qbs import _backend

SNIPPET = """
import qbs
from qbs import QbsEngine, build_labelling, load_edge_list, oracle_spg, select_landmarks
g = load_edge_list("1 2\\n2 3\\n3 4\\n4 1\\n2 5\\n")
s = build_labelling(g, select_landmarks(g, 2))
e = QbsEngine(g, s)
assert e.query(0, 4) == oracle_spg(g, 0, 4)
print(qbs.BACKEND, e.backend)
"""


def test_env_var_forces_fallback():
    env = dict(os.environ, QBS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", SNIPPET], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "python"]


def test_default_backend_is_compiled_when_built():
    if _backend.core is None:
        pytest.skip("compiled extension not built")
    assert _backend.BACKEND == "cython"


def test_get_kernels():
    assert _backend.get_kernels("python") is _backend._fallback
    with pytest.raises(ValueError):
        _backend.get_kernels("fortran")
