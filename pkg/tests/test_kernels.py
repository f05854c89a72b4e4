import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from somoslab import _kernels_py as py
from somoslab import kernels

compiled = pytest.importorskip("somoslab._kernels")

polys = st.dictionaries(st.integers(0, 200), st.integers(-50, 50).filter(bool), max_size=12)
nonzero = polys.filter(bool)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


@settings(max_examples=150)
@given(polys, polys, st.integers(-5, 5), st.integers(0, 40))
def test_ring_kernels_agree(a, b, c, m):
    for name in ("add", "sub", "mul"):
        assert getattr(compiled, name)(a, b) == getattr(py, name)(a, b)
    assert compiled.sqr(a) == py.sqr(a) == py.mul(a, a)
    assert compiled.scale(a, c) == py.scale(a, c)
    assert compiled.shift(a, m) == py.shift(a, m)


def _box(limit):
    return lambda k: -limit <= k <= limit


@settings(max_examples=150)
@given(polys, nonzero)
def test_divexact_agrees(a, b):
    prod = py.mul(a, b)
    assert compiled.divexact(prod, b, _box(1000)) == py.divexact(prod, b, _box(1000)) == a


@settings(max_examples=150)
@given(polys, nonzero)
def test_divexact_failure_agrees(a, b):
    assert compiled.divexact(a, b, _box(400)) == py.divexact(a, b, _box(400))


def test_divexact_by_zero():
    for mod in (py, compiled):
        with pytest.raises(ZeroDivisionError):
            mod.divexact({1: 1}, {}, _box(10))


def test_forced_fallback_gives_same_iterates():
    import os
    import subprocess
    import sys

    code = ("from somoslab import kernels; from somoslab.engine import iterate_symbolic; "
            "from somoslab.recdsl import catalog; "
            "print(kernels.BACKEND, iterate_symbolic(catalog('somos4'), 9)[9].value.to_text())")
    outs = {}
    for pure in ("1", "0"):
        env = dict(os.environ, SOMOSLAB_PURE=pure)
        outs[pure] = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                    text=True, check=True).stdout.split(" ", 1)
    assert outs["1"][0] == "python"
    assert outs["1"][1] == outs["0"][1]
