"""Auxiliary polynomials behind the three-juror comparison results.

Each function is the numerator (or a factor of it) of a reliability
difference; the verify catalog checks their signs on the constraint regions
where the corresponding comparison applies.  All functions broadcast over
numpy arrays and accept complex input (used for complex-step derivatives).
"""
from __future__ import annotations


def f1(a, b, c):
    k = 8 - 2 * a * b - b**2
    return (
        -4 * (2 * a - b) ** 3 * b
        + 4 * k * (2 * a**3 - 4 * a**2 * b + 4 * a * b**2 - b**3) * c
        - b * (2 * a - b) * k**2 * c**2
    )


def f2(a, b, c):
    k = 8 - a**2 - 2 * a * b
    return (
        -4 * (a - 2 * b) ** 3
        + 4 * k * (a**2 + 4 * a * b - 4 * b**2) * c
        + (2 * b - a) * k**2 * c**2
    )


def f3(a, b, c):
    ka = 8 - 2 * a * b - a**2
    kb = 8 - 2 * a * b - b**2
    return (
        c**2 * (a + b) * ka * (8 - a**2 - b**2) * kb
        - 4 * c * ka * (a**2 + a * b + b**2) * kb
        - 4 * (a + b) * (10 * a**3 * b - 7 * a**2 * b**2 - 8 * a**2 + 10 * a * b**3 - 16 * a * b - 8 * b**2)
    )


def f4(a, b, c):
    return (
        4 * a**3 - 32 * a**2 * b + 4 * a**4 * b + 64 * a * b**2 - 16 * a**3 * b**2
        + a**5 * b**2 + 64 * b**3 - 8 * a**2 * b**3
        - 24 * a**2 * c - 128 * a * b * c + 24 * a**3 * b * c - 128 * b**2 * c
        + 2 * a**4 * b**2 * c - 16 * a * b**3 * c + 48 * a * c**2
        + 128 * b * c**2 + 16 * a**2 * b * c**2 + 64 * a * b**2 * c**2
        - 4 * a**3 * b**2 * c**2 - 32 * c**3 - 32 * a * b * c**3 - 8 * a**2 * b**2 * c**3
    )


def f5(a, b, c):
    return (
        -32 * a**3 + 224 * a**2 * b - 32 * a**4 * b + 224 * a * b**2 + 36 * a**3 * b**2
        - 8 * a**5 * b**2 - 32 * b**3
        + 36 * a**2 * b**3 - 4 * a**4 * b**3 - 32 * a * b**4 - 4 * a**3 * b**4
        + a**5 * b**4 - 8 * a**2 * b**5 + a**4 * b**5 + 192 * a**2 * c
        + 192 * a * b * c - 56 * a**3 * b * c + 192 * b**2 * c - 144 * a**2 * b**2 * c
        - 8 * a**4 * b**2 * c - 56 * a * b**3 * c - 16 * a**3 * b**3 * c
        + 2 * a**5 * b**3 * c - 8 * a**2 * b**4 * c + 4 * a**4 * b**4 * c
        + 2 * a**3 * b**5 * c - 384 * a * c**2 - 384 * b * c**2 - 48 * a**2 * b * c**2
        - 48 * a * b**2 * c**2 + 16 * a**3 * b**2 * c**2 + 16 * a**2 * b**3 * c**2
        + 4 * a**4 * b**3 * c**2 + 4 * a**3 * b**4 * c**2 + 256 * c**3 + 128 * a * b * c**3
    )


def h1(a, b, c):
    return (
        64 * a**2 * b - 32 * a * b**2 + 4 * b**3 - 16 * a**2 * b**3 + 4 * a * b**4
        + a**2 * b**5 - 24 * b**2 * c - 16 * a**2 * b**2 * c + 8 * a * b**3 * c
        + 2 * a**2 * b**4 * c + 48 * b * c**2 - 32 * c**3
    )


def h2(a, b, c):
    return b * c * (a * c - 4) + 4 * c * (c - a) + 2 * b**2


def h_split(a, b, c):
    """Nonnegative exactly when the third voter of order (b, c, a) herds."""
    return a * (b**2 + 2 * b * c - 8) + 4 * c - 2 * b


def omega(b, c, d, y1, y2, z1, z2):
    return (
        7 * c**2 * (2 - z1 + y1**2 * (1 + z1) - y2**2 * (-1 + z2) + z2)
        + b * c * (
            -22 + 7 * z1 + 4 * z1**2 + y1 * (3 + 7 * z1 + 4 * z1**2)
            - 7 * z2 + 4 * z2**2 + y2 * (-3 + 7 * z2 - 4 * z2**2)
        )
        + b**2 * (7 + d**2 * ((1 - y1**2) * (1 - z1**2) + (1 - y2**2) * (1 - z2**2)))
    )


def mean_ability_parametrization(m, mu):
    """Sorted abilities (a, b, c) with mean ``m`` and adjacent ratios ``mu``."""
    den = mu**2 + mu + 1
    return 3 * m / den, 3 * m * mu / den, 3 * m * mu**2 / den


def w(m, mu):
    return 2 * (mu**2 + mu + 1) ** 2 * (2 * mu**2 - mu - 4) + 9 * (2 * mu + 1) * mu**2 * m**2


def u(m, mu):
    d = 1 + mu + mu**2
    return (
        243 * m**5 * mu**4 * (-1 + 2 * mu) * (1 + 2 * mu) ** 2
        - 576 * m**2 * mu**3 * (1 + 2 * mu) * d**3
        + 512 * mu * d**5
        - 108 * m**3 * mu**2 * d**2 * (-4 + mu + 22 * mu**2 + 12 * mu**3 + 8 * mu**4)
        + 12 * m * d**4 * (-16 + mu * (40 + mu * (31 + 2 * mu * (19 - 6 * mu + 4 * mu**2))))
    )


def v(m, mu):
    d = 1 + mu + mu**2
    return 128 * mu * d**3 * (
        8 + mu * (16 + mu * (24 + 8 * mu * (2 + mu) - 9 * m**2 * (1 + 2 * mu)))
    )


def qbar1(m, mu):
    return 3 * (4 * mu**2 + 1) * m / (16 * (mu**2 + mu + 1)) + 0.5


def qbar2(m, mu):
    return u(m, mu) / v(m, mu)
