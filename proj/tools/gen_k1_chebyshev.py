#!/usr/bin/env python3
"""Chebyshev coefficients for sqrt(x) * exp(x) * K1(x) on x in [2, inf).

The variable is z = 4/x - 1, which maps [2, inf) onto (-1, 1]. Output is a
C++ initializer list consumed by include/nigvar/special_math.hpp.
"""
import mpmath as mp

mp.mp.dps = 50
N = 64


def f(z):
    x = 4 / (z + 1)
    return mp.sqrt(x) * mp.exp(x) * mp.besselk(1, x)


def coefficients(n):
    nodes = [mp.cos(mp.pi * (k + mp.mpf(1) / 2) / n) for k in range(n)]
    values = [f(z) if z > -1 + mp.mpf(10) ** -40 else mp.sqrt(mp.pi / 2) for z in nodes]
    out = []
    for j in range(n):
        s = mp.fsum(values[k] * mp.cos(mp.pi * j * (k + mp.mpf(1) / 2) / n) for k in range(n))
        out.append(2 * s / n)
    out[0] /= 2
    return out


def main():
    c = coefficients(N)
    keep = [v for v in c]
    while abs(keep[-1]) < mp.mpf("1e-18"):
        keep.pop()
    for v in keep:
        print(f"    {mp.nstr(v, 20, min_fixed=-1, max_fixed=-1)},")
    # truncation check
    worst = 0
    for i in range(2001):
        z = -0.999 + 1.999 * i / 2000
        approx = mp.fsum(keep[j] * mp.chebyt(j, z) for j in range(len(keep)))
        worst = max(worst, abs(approx / f(z) - 1))
    print(f"// terms={len(keep)} max_rel_err={mp.nstr(worst, 3)}")


if __name__ == "__main__":
    main()
