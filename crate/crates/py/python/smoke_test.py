"""Smoke test for the `lmg` extension module. Run after `maturin develop`."""

import math

import lmg


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    levels = lmg.eigenvalues(2, 0.0)
    assert all(close(a, b) for a, b in zip(levels, [0.0, 1.0, 1.0, 4.0, 4.0])), levels

    report = lmg.spectrum(3, 0.4)
    assert report.verdict == "SusyPattern", report
    assert report.zero_mode is not None and abs(report.zero_mode) < 1e-9
    assert len(report.doublets) == 3

    half = lmg.spectrum("5/2", 0.3)
    assert half.zero_mode is None

    gap = lmg.spectral_gap(1000, 0.5)
    assert gap.satisfied and close(gap.bound, math.cosh(1.0)), gap
    dense = lmg.spectral_gap(10, 0.5, method="dense")
    assert close(dense.gap, lmg.spectral_gap(10, 0.5).gap, 1e-10)

    res = lmg.superalgebra(4, -0.7)
    assert res.passes, res

    fac = lmg.determinant_factorization(5, 1.2)
    assert fac.mirror_exact and fac.coefficient_residual < 1e-8

    gs = lmg.ground_state(6, 0.3)
    assert close(gs.norm_ratio, 1.0, 1e-10), gs
    assert len(gs.amplitudes) == 13

    h = lmg.hamiltonian(1, 0.2)
    assert len(h) == 3 and all(len(r) == 3 for r in h)
    assert all(close(a, b) for a, b in zip(sorted(lmg.eigenvalues_dense(h)), lmg.eigenvalues(1, 0.2)))

    assert close(lmg.legendre_p(2, 0.5), -0.125)

    try:
        lmg.spectral_gap(1.5, 0.0)
    except ValueError:
        pass
    else:
        raise AssertionError("half-integer gap should raise ValueError")

    print("lmg smoke test: ok")


if __name__ == "__main__":
    main()
