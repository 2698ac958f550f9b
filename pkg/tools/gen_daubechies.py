"""Regenerate the Daubechies lowpass taps hard-coded in logdiff/_filters.py.

Spectral factorisation of the Daubechies polynomial at 60 significant digits,
keeping the roots inside the unit circle (minimum phase, energy front-loaded).

    python tools/gen_daubechies.py > taps.txt
"""
import mpmath as mp

mp.mp.dps = 60


def daubechies_lowpass(k):
    if k == 1:
        return [1 / mp.sqrt(2), 1 / mp.sqrt(2)]
    # P(y) = sum_{i<k} C(k-1+i, i) y^i with y = (2 - z - 1/z)/4; multiply by z^(k-1)
    # to get an ordinary polynomial in z of degree 2k-2.
    poly = [mp.mpf(0)] * (2 * k - 1)  # coefficients of z^0 .. z^(2k-2)
    for i in range(k):
        c = mp.binomial(k - 1 + i, i) / mp.mpf(4) ** i
        # (2 - z - 1/z)^i * z^(k-1) = (-1)^i (z - 1)^(2i) z^(k-1-i)
        for m in range(2 * i + 1):
            coef = c * (-1) ** i * mp.binomial(2 * i, m) * (-1) ** (2 * i - m)
            poly[m + k - 1 - i] += coef
    roots = mp.polyroots(list(reversed(poly)), maxsteps=500, extraprec=400)
    inside = [r for r in roots if abs(r) < 1]
    # h(z) = ((1 + z)/2)^k * prod (z - r), coefficients in ascending powers
    h = [mp.mpc(1)]
    for _ in range(k):
        h = [a + b for a, b in zip(h + [0], [0] + h)]
    for r in inside:
        h = [a - r * b for a, b in zip([0] + h, h + [0])]
    h = [mp.re(x) for x in h]
    s = sum(h)
    h = [x * mp.sqrt(2) / s for x in h]
    # minimum phase: the larger-energy end first
    if sum(x * x for x in h[: k]) < sum(x * x for x in h[k:]):
        h = h[::-1]
    return h


if __name__ == "__main__":
    for k in range(1, 11):
        taps = daubechies_lowpass(k)
        print(f"    \"db{k}\": (")
        for t in taps:
            print(f"        {mp.nstr(t, 20)},")
        print("    ),")
