"""Smoke test for the covchan extension module.

Build and install first:  maturin develop --release -m crates/python/Cargo.toml
"""

import math

import covchan


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    qubit = covchan.Spectrum([0.0, 1.0])
    ad = covchan.Channel.amplitude_damping(0.3)
    tp, cp = ad.cptp_defects()
    assert tp < 1e-12 and cp < 1e-12
    assert ad.covariance_defect(qubit) < 1e-12

    d = covchan.decompose(ad, qubit)
    assert d.sigmas == [-1.0, 0.0]
    assert close(d.mask(-1.0)[1][1].real, 0.3, 1e-12)
    assert close(d.mask(0.0)[0][1].real, math.sqrt(0.7), 1e-12)
    back = d.reconstruct()
    diff = max(
        abs(x - y)
        for rx, ry in zip(back.choi(), ad.choi())
        for x, y in zip(rx, ry)
    )
    assert diff < 1e-10

    h = [[1, 2 ** -0.5], [2 ** -0.5, 1]]
    assert close(covchan.hadamard_bound(h), 0.39912396, 1e-6)
    assert close(covchan.hadamard_bound([[1, 1, 1]] * 3), math.log2(3))

    plus = [2 ** -0.5, 2 ** -0.5]
    r = covchan.timing_channel(covchan.Channel.identity(2), qubit, plus, math.pi, 2)
    assert close(r.bound, 1.0, 1e-12)

    g = covchan.gaussian_decomposition(1.0, 6)
    vacuum = dict(g.masks)[0][0][0].real
    assert close(vacuum, 1.0 / 3.0, 1e-12)

    rho = [[1, 0, 0, 0, 0, 0]] + [[0] * 6 for _ in range(5)]
    mean, se = covchan.monte_carlo(rho, 1.0, samples=20000, seed=1)
    assert abs(mean[0][0].real - 1.0 / 3.0) < 4 * se[0][0]

    try:
        covchan.decompose(covchan.Channel([[[1, 1], [1, -1]]]), qubit)
    except ValueError:
        pass
    else:
        raise AssertionError("non-trace-preserving channel accepted")

    print("covchan smoke test: ok")


if __name__ == "__main__":
    main()
