"""Smoke test for the aklt_hqmm extension module.

Build and install first, e.g. `pip install -e crates/python --no-build-isolation`
(needs maturin), or put a copy of the built shared library named
`aklt_hqmm.so` on PYTHONPATH.
"""

import math

import aklt_hqmm as ah


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol


def max_diff(a, b):
    return max(abs(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def identity(d):
    return [[1.0 if i == j else 0.0 for j in range(d)] for i in range(d)]


def main():
    v = ah.v_isometry()
    vdv = [[sum(v[k][i].conjugate() * v[k][j] for k in range(4)) for j in range(2)] for i in range(2)]
    assert max_diff(vdv, identity(2)) < 1e-12

    eigs, gap, xi = ah.transfer_spectrum()
    assert close(eigs[0], 1.0) and all(close(z, -1 / 3) for z in eigs[1:])
    assert close(xi, 1 / math.log(3), 1e-9)
    _, _, xi_id = ah.transfer_spectrum([identity(2)])
    assert math.isinf(xi_id)

    up = [[1, 0], [0, 0]]
    assert max_diff(ah.aklt_channel_apply(up), [[1 / 3, 0], [0, 2 / 3]]) < 1e-12

    model = ah.Hqmm()
    zero = [[0, 0, 0], [0, 1, 0], [0, 0, 0]]
    assert close(model.evaluate([identity(2)], [zero]), 1 / 3)
    dist = model.string_distribution(3)
    assert len(dist) == 27 and close(sum(dist.values()), 1.0)
    outcome, prob = model.sample(5, 42)
    assert (outcome, prob) == model.sample(5, 42)
    assert close(prob, model.string_probability(outcome))
    assert close(sum(model.conditional_probabilities("+0")), 1.0)

    a = model.evaluate([up, identity(2)], [zero, identity(3)])
    b = model.evaluate_decomposed([up, identity(2)], [zero, identity(3)])
    assert close(a, b)

    energy, residual = ah.ground_energy_check(4)
    assert close(energy, -8 / 3, 1e-8) and residual < 1e-8
    assert close(ah.mps_norm_sq(5), 1 + 3 * (-1 / 3) ** 5)
    assert ah.correlation(6, 1, 2) < 0

    report = ah.d2_index()
    assert report["theta"] == -1.0
    assert ah.check_covariance([0.0, 1.0, 0.0], 1.3) < 1e-10

    failing = [(name, r) for name, r in ah.invariants() if not r <= 1e-10]
    assert not failing, failing

    try:
        ah.Hqmm(identity(2))
    except ValueError:
        pass
    else:
        raise AssertionError("non-normalized rho0 accepted")

    print("aklt_hqmm smoke test: ok")


if __name__ == "__main__":
    main()
