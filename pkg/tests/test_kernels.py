import numpy as np
import pytest

from mcastgame import kernels
from mcastgame.kernels import _pykernels
from mcastgame.scenario import Partition, derive_constants
from mcastgame.value import value_table

from fuzz import random_scenario

BACKENDS = kernels.available_backends()


def test_python_backend_always_available():
    assert "python" in BACKENDS
    assert kernels.get_backend("python") is _pykernels
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")
@pytest.mark.parametrize("seed", range(25))
def test_backends_agree(seed):
    py, cy = kernels.get_backend("python"), kernels.get_backend("cython")
    n = 1 + seed % 8
    s = random_scenario(seed, n, rate_range=(5, 40))
    k = derive_constants(s)
    args = (np.array(s.valuations), np.array(k.alphas), np.array(s.rates), k.cost)
    vp, vc = py.value_table(*args), cy.value_table(*args)
    assert np.allclose(vp, vc, rtol=1e-14, atol=1e-12)
    x = np.linspace(-1, 1, n)
    assert np.allclose(py.subset_sums(x), cy.subset_sums(x))
    v = value_table(s)
    assert py.first_convexity_violation(v, n, 1e-9) == cy.first_convexity_violation(v, n, 1e-9)
    for p in (Partition.grand(n), Partition.sequential(n, 2), Partition.singletons(n)):
        assert py.first_split_violation(v, p.blocks, 1e-9) == cy.first_split_violation(v, p.blocks, 1e-9)
        blocks = np.array(p.blocks, dtype=np.int64)
        assert py.first_incompatible_violation(v, blocks, n, 1e-9) == cy.first_incompatible_violation(v, blocks, n, 1e-9)
    lp, valp = py.best_partition(v, n)
    lc, valc = cy.best_partition(v, n)
    assert list(lp) == list(lc) and np.isclose(valp, valc)


def test_value_table_matches_direct_sum():
    s = random_scenario(3, 5)
    k = derive_constants(s)
    v = _pykernels.value_table(np.array(s.valuations), np.array(k.alphas), np.array(s.rates), k.cost)
    for m in range(1, 32):
        idx = [i for i in range(5) if m >> i & 1]
        r = min(s.rates[i] for i in idx)
        expect = sum(s.valuations[i] for i in idx) - (sum(k.alphas[i] for i in idx) + k.cost) / r
        assert np.isclose(v[m], expect)


def test_env_var_selects_fallback():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "from mcastgame import kernels; print(kernels.BACKEND)"],
        env={"MCASTGAME_KERNELS": "python", "PATH": ""},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"
