"""Independent brute-force quadrature oracles for the frozen test values.

Evaluates analytic fields and their analytic derivatives on fine uniform
grids of [0, 2pi)^3 (trapezoidal rule, exact for trigonometric
polynomials below the grid Nyquist) with numpy only. Nothing here touches
the C++ spectral code.
"""
import numpy as np

TWO_PI = 2.0 * np.pi


def grid(m):
    x = np.arange(m) * TWO_PI / m
    return np.meshgrid(x, x, x, indexing="ij")


def integrate(values, m):
    return values.sum() * (TWO_PI / m) ** 3


def taylor_green(m, a=1.0):
    x, y, z = grid(m)
    v = np.array([a * np.sin(x) * np.cos(y) * np.cos(z),
                  -a * np.cos(x) * np.sin(y) * np.cos(z),
                  0 * x])
    # g[i][j] = d_i v_j
    g = np.zeros((3, 3) + x.shape)
    g[0][0] = a * np.cos(x) * np.cos(y) * np.cos(z)
    g[1][0] = -a * np.sin(x) * np.sin(y) * np.cos(z)
    g[2][0] = -a * np.sin(x) * np.cos(y) * np.sin(z)
    g[0][1] = a * np.sin(x) * np.sin(y) * np.cos(z)
    g[1][1] = -a * np.cos(x) * np.cos(y) * np.cos(z)
    g[2][1] = a * np.cos(x) * np.sin(y) * np.sin(z)
    lap = -3.0 * v
    return v, g, lap


def stretching(g, m):
    s = np.einsum("ij...,ik...,kj...->...", g, g, g)
    return integrate(s, m)


def stretching_ibp(v, g, lap, m):
    # -int v_k d_k v_j lap v_j
    s = np.einsum("k...,kj...,j...->...", v, g, lap)
    return -integrate(s, m)


def lp(v, p, m):
    mag = np.sqrt((v ** 2).sum(axis=0))
    return integrate(mag ** p, m) ** (1.0 / p)


def main():
    m = 48
    v, g, lap = taylor_green(m)
    print("TG |v|^2_L2      ", integrate((v ** 2).sum(axis=0), m), 2 * np.pi ** 3)
    print("TG |grad v|^2    ", integrate((g ** 2).sum(axis=(0, 1)), m), 6 * np.pi ** 3)
    print("TG |lap v|^2     ", integrate((lap ** 2).sum(axis=0), m))
    print("TG S             ", repr(stretching(g, m)))
    print("TG S_ibp         ", repr(stretching_ibp(v, g, lap, m)))
    for mm in (64, 128, 256):
        vv, _, _ = taylor_green(mm)
        print("TG L3 m=%d       " % mm, repr(lp(vv, 3, mm)))
    print("TG L4            ", repr(lp(v, 4, m)))
    gmag = np.sqrt((g ** 2).sum(axis=(0, 1)))
    print("TG |grad v|_L6   ", repr(integrate(gmag ** 6, m) ** (1 / 6)))

    # single mode v = (0, cos x, 0)
    x, y, z = grid(m)
    l6 = integrate(np.abs(np.sin(x)) ** 6, m) ** (1 / 6)
    lap2 = integrate(np.cos(x) ** 2, m) ** 0.5
    print("cos-mode sobolev ", repr(l6 / lap2))
    print("cos-mode L2      ", repr(lap2), np.sqrt(4 * np.pi ** 3))
    print("cos-mode Hhalf   ", np.sqrt(2) * 4 * np.pi ** 3, 4 * np.pi ** 3)

    # ABC
    a = b = c = 1.0
    vabc = np.array([a * np.sin(z) + c * np.cos(y), b * np.sin(x) + a * np.cos(z), c * np.sin(y) + b * np.cos(x)])
    print("ABC |v|^2        ", integrate((vabc ** 2).sum(axis=0), m), 3 * TWO_PI ** 3)


if __name__ == "__main__":
    main()
