"""Smoke tests for the python extension module."""

import math
import os
import subprocess

import pytest

import qkernel as qk


def test_q_arithmetic():
    assert qk.q_bracket(3, 0.5) == pytest.approx(1.75, abs=1e-15)
    assert qk.q_factorial(4, 1.0) == pytest.approx(24.0)
    assert qk.q_binomial(4, 2, 1.0) == pytest.approx(6.0)
    value, residual = qk.q_pochhammer_inf(0.5, 0.5)
    assert value == pytest.approx(0.28878809508660242, abs=1e-11)
    assert residual > 0


def test_families():
    x, q = 1.0, 0.5
    assert qk.q_hermite(3, x, q) == pytest.approx(x**3 - (2 + q) * x, abs=1e-13)
    assert qk.chebyshev_u(2, 0.0) == pytest.approx(-1.0)
    assert qk.asc(1, 0.4, -0.3, 0.6, 0.3) == pytest.approx(0.4 + 0.6 * 0.3, abs=1e-14)
    lo, hi, bounded = qk.support(0.0)
    assert (lo, hi, bounded) == (-2.0, 2.0, True)


def test_expansions_reassemble():
    coeffs = qk.expand_asc_in_qhermite(2, 0.5, 0.3, 0.4)
    x = 0.7
    total = sum(c * qk.q_hermite(i, x, 0.4) for i, c in enumerate(coeffs))
    assert total == pytest.approx(qk.asc(2, x, 0.5, 0.3, 0.4), abs=1e-12)


def test_densities():
    value, in_support = qk.f_n(0.3, 0.5)
    assert in_support
    assert value == pytest.approx(0.35765180874711633, abs=1e-12)
    value, in_support = qk.f_n(3.0, 0.0)
    assert not in_support and value == 0.0
    value, _ = qk.f_cn(0.0, 0.0, 0.5, 0.0)
    assert value == pytest.approx(1.0 / (math.pi * 0.75), abs=1e-13)


def test_kernels():
    r = qk.poisson_mehler(0.0, 0.0, 0.5, 0.0, method="both")
    assert r["value"] == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert r["discrepancy"] <= 1e-12
    assert qk.inversion_identity(0.3, -0.2, 0.5, 0.5, 0.35, 0.4) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ValueError):
        qk.poisson_mehler(0.1, 0.1, 1.5, 0.3)


def test_identity_suite():
    assert len(qk.identity_catalog()) == 19
    rep = qk.run_identity_suite("poisson-mehler")
    assert rep["passed"]
    assert rep["max_residual"] <= 1e-8


def test_cli_roundtrip():
    cli = os.environ.get("QKERNEL_CLI")
    if not cli:
        pytest.skip("QKERNEL_CLI not set")
    out = subprocess.run(
        [cli, "eval", "--family", "qhermite", "--n", "3", "--x", "1.0", "--q", "0.5"],
        capture_output=True, text=True, check=True,
    )
    assert float(out.stdout.split()[0]) == pytest.approx(-1.5)
