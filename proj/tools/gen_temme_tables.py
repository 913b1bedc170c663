#!/usr/bin/env python3
"""Generate src/temme_tables.inc with exact-rational Temme coefficient data.

Produces, for orders j = 0..MAX_ORDER:
  * the Stirling coefficients gamma_j of 1/Gamma*(a),
  * the principal part S(phi_j) of phi_j(lambda) = (-1)^{j+1}(2j-1)!!/eta^{2j+1}
    in powers of 1/(lambda-1),
  * the Taylor coefficients of c_j = phi_j - S(phi_j) in powers of eta.

Everything is computed with exact rational power series (fractions.Fraction);
floating-point literals are emitted only at the very end.

Usage: python3 tools/gen_temme_tables.py > src/temme_tables.inc
"""

from fractions import Fraction
from math import factorial
import sys

MAX_ORDER = 8
ETA_TERMS = 90  # Taylor terms of c_j in eta


def q_series(n):
    # q(e) = 2 (e - ln(1+e)) / e^2 = sum_m 2 (-1)^m e^m / (m + 2)
    return [Fraction(2 * (-1) ** m, m + 2) for m in range(n)]


def power_series_pow(h, alpha, n):
    # Miller recurrence for g = h^alpha with h[0] = 1.
    assert h[0] == 1
    g = [Fraction(0)] * n
    g[0] = Fraction(1)
    for k in range(1, n):
        acc = Fraction(0)
        for i in range(1, k + 1):
            if i < len(h):
                acc += ((alpha + 1) * i - k) * h[i] * g[k - i]
        g[k] = acc / k
    return g


def mul(a, b, n):
    out = [Fraction(0)] * n
    for i, ai in enumerate(a[:n]):
        if ai == 0:
            continue
        for j in range(0, n - i):
            if j < len(b):
                out[i + j] += ai * b[j]
    return out


def double_factorial_odd(j):
    # (2j-1)!! with (-1)!! = 1
    out = 1
    for k in range(1, 2 * j, 2):
        out *= k
    return out


def stirling_gamma(j):
    # gamma_j = (-1)^j / (2^j j!) * d^{2j}/dx^{2j} [ (x^2 / (2 (x - ln(1+x))))^{j+1/2} ] at 0
    # and x^2 / (2 (x - ln(1+x))) = 1 / q(x).
    n = 2 * j + 1
    f = power_series_pow(q_series(n), Fraction(-(2 * j + 1), 2), n)
    deriv = f[2 * j] * factorial(2 * j)
    return Fraction((-1) ** j, 2 ** j * factorial(j)) * deriv


def singular_part(j):
    # eta^{-(2j+1)} = e^{-(2j+1)} q(e)^{-(2j+1)/2}
    n = 2 * j + 1
    p = power_series_pow(q_series(n), Fraction(-(2 * j + 1), 2), n)
    sign = (-1) ** (j + 1)
    dfac = double_factorial_odd(j)
    # coefficient of (lambda-1)^{-k}, k = 1..2j+1
    return [sign * dfac * p[2 * j + 1 - k] for k in range(1, 2 * j + 2)]


def lambda_minus_one_in_eta(n):
    # Lagrange inversion: e = sum_{k>=1} (1/k) [e^{k-1}] q(e)^{-k/2} eta^k
    out = [Fraction(0)] * (n + 1)
    for k in range(1, n + 1):
        g = power_series_pow(q_series(k), Fraction(-k, 2), k)
        out[k] = g[k - 1] / k
    return out


def main():
    gammas = [stirling_gamma(j) for j in range(MAX_ORDER + 1)]
    sing = [singular_part(j) for j in range(MAX_ORDER + 1)]

    # residue identity Res phi_j = -gamma_j
    for j in range(MAX_ORDER + 1):
        assert sing[j][0] == -gammas[j], (j, sing[j][0], gammas[j])

    max_pow = 2 * MAX_ORDER + 1
    n_series = ETA_TERMS + max_pow + 2
    e_eta = lambda_minus_one_in_eta(n_series)
    # B(eta) = e / eta
    B = e_eta[1:]
    invB = power_series_pow(B, Fraction(-1), n_series)
    # (1/B)^p for p = 1..max_pow
    invB_pows = [None, invB[:]]
    for p in range(2, max_pow + 1):
        invB_pows.append(mul(invB_pows[-1], invB, n_series))

    regular = []
    for j in range(MAX_ORDER + 1):
        order = 2 * j + 1
        # Laurent coefficients, index i <-> eta^{i - order}
        size = ETA_TERMS + order
        lau = [Fraction(0)] * size
        lau[0] += (-1) ** (j + 1) * double_factorial_odd(j)
        for k, s in enumerate(sing[j], start=1):
            # s * eta^{-k} (1/B)^k
            for i in range(size):
                idx = i + order - k
                if 0 <= idx < size and i < len(invB_pows[k]):
                    lau[idx] -= s * invB_pows[k][i]
        for i in range(order):
            assert lau[i] == 0, (j, i, lau[i])
        regular.append(lau[order:order + ETA_TERMS])

    w = sys.stdout.write
    w("// Generated by tools/gen_temme_tables.py. Do not edit.\n")
    w("// Exact rationals are given in the trailing comments.\n\n")
    w(f"inline constexpr int kTemmeMaxOrder = {MAX_ORDER};\n")
    w(f"inline constexpr int kTemmeEtaTerms = {ETA_TERMS};\n\n")
    w("inline constexpr double kStirlingGamma[kTemmeMaxOrder + 1] = {\n")
    for g in gammas:
        w(f"    {float(g)!r},  // {g}\n")
    w("};\n\n")
    w("// kSingularCoeffs[j][k-1] = {num, den} multiplies (lambda-1)^{-k}, k = 1..2j+1.\n")
    w("inline constexpr long long kSingularCoeffs[kTemmeMaxOrder + 1][2 * kTemmeMaxOrder + 1][2] = {\n")
    for j, row in enumerate(sing):
        w("    {\n")
        for k, s in enumerate(row, start=1):
            assert abs(s.numerator) < 2**62 and s.denominator < 2**62
            w(f"        {{{s.numerator}LL, {s.denominator}LL}},  // j={j} k={k}\n")
        w("    },\n")
    w("};\n\n")
    w("// kRegularEtaSeries[j][i] multiplies eta^i in c_j(eta).\n")
    w("inline constexpr double kRegularEtaSeries[kTemmeMaxOrder + 1][kTemmeEtaTerms] = {\n")
    for row in regular:
        w("    {")
        w(", ".join(repr(float(c)) for c in row))
        w("},\n")
    w("};\n")


if __name__ == "__main__":
    main()
