"""Regenerate the frozen Chebyshev coefficients in satcap.specialfn.

For x >= 8 the order-zero Bessel function is evaluated as

    J0(x) = sqrt(2/(pi x)) * (P(x) cos(x - pi/4) - Q(x) sin(x - pi/4))

where P and x*Q are smooth functions of z = (8/x)^2 on (0, 1].  This
script interpolates them at Chebyshev nodes with mpmath (40 digits),
truncates the coefficient tails below 5e-18, verifies the resulting
double-precision evaluation against mpmath on a dense grid, and prints
the coefficient tuples to paste into specialfn.py.

Development-only tool; the package itself does not import mpmath.
"""

import mpmath as mp
import numpy as np
from numpy.polynomial.chebyshev import chebval

mp.mp.dps = 40

DEGREE = 18
TAIL_CUTOFF = 5e-18


def p_amplitude(x):
    if x == mp.inf:
        return mp.mpf(1)
    x = mp.mpf(x)
    chi = x - mp.pi / 4
    return mp.sqrt(mp.pi * x / 2) * (
        mp.besselj(0, x) * mp.cos(chi) + mp.bessely(0, x) * mp.sin(chi)
    )


def q_amplitude_scaled(x):
    if x == mp.inf:
        return mp.mpf(-1) / 8
    x = mp.mpf(x)
    chi = x - mp.pi / 4
    return x * mp.sqrt(mp.pi * x / 2) * (
        mp.bessely(0, x) * mp.cos(chi) - mp.besselj(0, x) * mp.sin(chi)
    )


def chebyshev_fit(fun, degree):
    n = degree + 1
    tnodes = [mp.cos(mp.pi * (2 * i + 1) / (2 * n)) for i in range(n)]
    values = []
    for t in tnodes:
        z = (t + 1) / 2
        values.append(fun(mp.inf) if z == 0 else fun(8 / mp.sqrt(z)))
    coeffs = []
    for k in range(n):
        acc = sum(values[i] * mp.cos(k * mp.acos(t)) for i, t in enumerate(tnodes))
        coeffs.append(2 * acc / n)
    coeffs[0] /= 2
    keep = len(coeffs)
    while keep > 1 and abs(float(coeffs[keep - 1])) < TAIL_CUTOFF:
        keep -= 1
    return [float(c) for c in coeffs[:keep]]


def max_error(cp, cq):
    xs = np.concatenate([np.linspace(8.0, 50.0, 4201), np.linspace(50.0, 1000.0, 600)])
    worst = 0.0
    for x in xs:
        z = (8.0 / x) ** 2
        u = 2.0 * z - 1.0
        p = chebval(u, cp)
        q = chebval(u, cq) / x
        chi = x - np.pi / 4
        val = np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))
        worst = max(worst, abs(val - float(mp.besselj(0, x))))
    return worst


def main():
    cp = chebyshev_fit(p_amplitude, DEGREE)
    cq = chebyshev_fit(q_amplitude_scaled, DEGREE)
    print(f"# max |error| on [8, 1000]: {max_error(cp, cq):.3e}")
    print("_CP = (")
    for c in cp:
        print(f"    {c!r},")
    print(")")
    print("_CQ = (")
    for c in cq:
        print(f"    {c!r},")
    print(")")


if __name__ == "__main__":
    main()
