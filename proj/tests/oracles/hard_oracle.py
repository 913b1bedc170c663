"""Hard-edge coefficient oracles (mpmath, 30 digits), from the defining
integrals without any cancellation rewrites."""
import mpmath as mp

mp.mp.dps = 30
I_CONST = mp.mpf("-0.81367339930553901027")


def weights(u):
    m = len(u)
    om = []
    for l in range(m):
        tail = sum(u[l + 1:], mp.mpf(0))
        om.append(mp.exp(tail + u[l]) - mp.exp(tail))
    return om, mp.exp(sum(u, mp.mpf(0)))


def coeffs(b, alpha, rho, t, u):
    b, alpha, rho = map(mp.mpf, (b, alpha, rho))
    t = [mp.mpf(x) for x in t]
    u = [mp.mpf(x) for x in u]
    om, Om = weights(u)
    x0 = b * rho ** (2 * b)

    def T(j, x):
        return sum(om[l] * t[l] ** j * mp.exp(-(t[l] / b) * (x - x0)) for l in range(len(t)))

    C1 = x0 * sum(u) + mp.quad(lambda x: mp.log(1 + T(0, x)), [x0, 1])
    C2 = -x0 / 2 * T(1, x0) / Om

    def f(x):
        g = 1 + T(0, x)
        return (-(x0 / (x - x0) + alpha / b) * T(1, x) / g - x / (2 * b) * T(2, x) / g
                + x0 * T(1, x0) / (Om * (x - x0)))

    wall = mp.log(b * rho ** b / (mp.sqrt(2 * mp.pi) * (1 - x0)))
    C3 = (-sum(u) / 2 + mp.log(1 + T(0, 1)) / 2 + mp.quad(f, [x0, x0 + mp.mpf("1e-3"), 1])
          + x0 * T(1, x0) / Om * wall)
    C4 = mp.sqrt(2) * I_CONST * b * rho ** b * (rho ** (2 * b) * T(2, x0) / Om - T(1, x0) / Om
                                                 - rho ** (2 * b) * (T(1, x0) / Om) ** 2)
    return C1, C2, C3, C4


def d_coeffs(b, alpha, rho, tl, tk):
    b, alpha, rho, tl, tk = map(mp.mpf, (b, alpha, rho, tl, tk))
    r2 = rho ** (2 * b)
    x0 = b * r2
    c = 1 - x0
    wall = mp.log(b * rho ** b / (mp.sqrt(2 * mp.pi) * c))

    def g1(x):
        d = x - x0
        return tl * (mp.exp(-tl / b * d) * (2 * b * (b - alpha) * r2 + x * (2 * alpha - b * r2 * tl) + tl * x * x)
                     - 2 * b * b * r2) / (2 * b * d)

    def g11(x):
        d = x - x0
        return (2 * b * b * tk * r2 + tl * mp.exp(-tl / b * d) * (2 * b * b * r2 + d * (2 * alpha + tl * x))
                + mp.exp(-(tl + tk) / b * d) * ((2 * b * r2 * (alpha - b) - 2 * alpha * x) * (tl + tk)
                                                 + x * (x0 - x) * (tl ** 2 + tk ** 2))) / (2 * b * d)

    d1 = -(1 - mp.exp(-tl / b * c)) / 2 + x0 * tl * wall - mp.quad(g1, [x0, x0 + mp.mpf("1e-3"), 1])
    d11 = (mp.exp(-tl / b * c) * (1 - mp.exp(-tk / b * c)) / 2 - x0 * tk * wall
           - mp.quad(g11, [x0, x0 + mp.mpf("1e-3"), 1]))
    return d1, d11


COEFF_CASES = [
    (1.0, 0.0, 0.7, [2.0], [0.5]),
    (1.0, 0.0, 0.7, [2.0, 1.0], [1.0, 1.0]),
    (1.5, 0.8, 0.6, [3.0, 1.2, 0.4], [0.3, -0.7, 0.45]),
    (0.6, -0.5, 0.9, [1.5, 0.0], [-0.4, 0.2]),
]

D_CASES = [
    (1.0, 0.0, 0.7, 2.0, 1.0),
    (1.0, 0.0, 0.7, 2.0, 2.0),
    (1.7, 0.9, 0.55, 4.0, 0.5),
]

if __name__ == "__main__":
    for c in COEFF_CASES:
        print(c, [mp.nstr(v, 17) for v in coeffs(*c)])
    for c in D_CASES:
        print(c, [mp.nstr(v, 17) for v in d_coeffs(*c)])
