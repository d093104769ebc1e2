#!/usr/bin/env python3
"""Generate Chebyshev coefficients for exp(z) K0(z) and exp(z) K1(z).

The intervals cover the gap between the ascending series (z <= 2) and the
asymptotic expansion (z >= 16). Output is a C++ header fragment written to
stdout; the checked-in copy lives in core/src/bessel_chebyshev.inc.
"""
import mpmath as mp

mp.mp.dps = 50
INTERVALS = [(2, 4), (4, 8), (8, 16)]
DEGREE = 40
TOL = mp.mpf("1e-19")


def cheb_coeffs(f, lo, hi, n):
    # Chebyshev-Gauss nodes; c_j = 2/n sum f(x_k) T_j(t_k)
    nodes = [mp.cos(mp.pi * (k + mp.mpf(1) / 2) / n) for k in range(n)]
    vals = [f((hi - lo) / 2 * t + (hi + lo) / 2) for t in nodes]
    coeffs = []
    for j in range(n):
        s = mp.fsum(v * mp.cos(j * mp.pi * (k + mp.mpf(1) / 2) / n) for k, v in enumerate(vals))
        coeffs.append(2 * s / n)
    coeffs[0] /= 2
    return coeffs


def truncate(coeffs, scale):
    last = len(coeffs)
    while last > 1 and abs(coeffs[last - 1]) < TOL * scale:
        last -= 1
    return coeffs[:last]


def main():
    print("// Generated by scripts/gen_bessel_chebyshev.py; do not edit.")
    for nu in (0, 1):
        f = lambda z, nu=nu: mp.e**z * mp.besselk(nu, z)
        for lo, hi in INTERVALS:
            c = truncate(cheb_coeffs(f, lo, hi, DEGREE), abs(f(hi)))
            name = f"kScaledK{nu}_{lo}_{hi}"
            print(f"constexpr std::array<double, {len(c)}> {name} = {{")
            for v in c:
                print(f"    {mp.nstr(v, 20, strip_zeros=False, min_fixed=0, max_fixed=0)},")
            print("};")


if __name__ == "__main__":
    main()
