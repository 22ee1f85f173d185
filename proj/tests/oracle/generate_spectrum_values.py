#!/usr/bin/env python3
"""Arbitrary-precision roots of the matching condition and exceptional points.

Run from the repository root:
    python3 tests/oracle/generate_spectrum_values.py > tests/spectrum_reference.hpp

D(E) = psi_<'(0) - psi_>'(0) = -s (H1'/H1 + K'/K) is evaluated directly with
mpmath's Hankel and Bessel K of complex order. The seeds are six-digit values;
every root is solved at 40 and again at 60 digits and must agree to 1e-25.
"""
import mpmath as mp


def D(E, g, a):
    p = mp.sqrt(E - 1j * g)
    q = mp.sqrt(E + 1j * g)
    s = mp.exp(1j * mp.pi / 4) * mp.sqrt(g)
    nu, mu, z = 1j * p * a, 1j * q * a, s * a
    h = mp.hankel1(nu, z)
    dh = mp.hankel1(nu - 1, z) - nu / z * h
    k = mp.besselk(mu, z)
    dk = -mp.besselk(mu - 1, z) - mu / z * k
    return -s * (dh / h + dk / k)


def f(E, g, a):
    p = mp.sqrt(E - 1j * g)
    q = mp.sqrt(E + 1j * g)
    s = mp.exp(1j * mp.pi / 4) * mp.sqrt(g)
    nu, mu, z = 1j * p * a, 1j * q * a, s * a
    h = mp.hankel1(nu, z)
    dh = mp.hankel1(nu - 1, z) - nu / z * h
    k = mp.besselk(mu, z)
    dk = -mp.besselk(mu - 1, z) - mu / z * k
    return dh * k + h * dk


def R(E, g, a):
    p = mp.sqrt(E - 1j * g)
    q = mp.sqrt(E + 1j * g)
    s = mp.exp(1j * mp.pi / 4) * mp.sqrt(g)
    nu, mu, z = 1j * p * a, 1j * q * a, s * a
    h = mp.hankel1(nu, z)
    dh = mp.hankel1(nu - 1, z) - nu / z * h
    h2 = mp.hankel2(-nu, z)
    dh2 = mp.hankel2(-nu - 1, z) + nu / z * h2
    k = mp.besselk(mu, z)
    dk = -mp.besselk(mu - 1, z) - mu / z * k
    return abs(1j * (dk * h2 + k * dh2) / (dk * h + k * dh)) ** 2


def twice(solve):
    with mp.workdps(40):
        r1 = solve()
    with mp.workdps(60):
        r2 = solve()
    for x, y in zip(r1, r2):
        if abs(x - y) > mp.mpf(10) ** -25 * max(1, abs(y)):
            raise RuntimeError("root did not stabilise")
    return r2


def real_root(a, g, seed):
    # bracketing: D has poles next to its roots, which throw the secant off
    lo, hi = mp.mpf(seed) * (1 - mp.mpf(10) ** -5), mp.mpf(seed) * (1 + mp.mpf(10) ** -5)
    return twice(lambda: [mp.findroot(lambda E: mp.re(D(E, g, a)), (lo, hi), solver="anderson")])[0]


def complex_root(a, g, seed):
    return twice(lambda: [mp.findroot(lambda E: D(E, g, a), mp.mpc(seed))])[0]


def exceptional_point(a, g0, E0):
    def solve():
        F = lambda g, E: mp.re(D(E, g, a))
        FE = lambda g, E: mp.re(mp.diff(lambda e: D(e, g, a), E))
        return list(mp.findroot([F, FE], (mp.mpf(g0), mp.mpf(E0))))

    return twice(solve)


def r(x):
    return repr(float(x))


def c(z):
    z = complex(z)
    return "{%r, %r}" % (z.real, z.imag)


REAL = [
    ("roots_a1_g1", 1.0, 1.0, [3.276506, 8.837051, 13.757159, 21.336109, 25.688272]),
    ("roots_a05_g1", 0.5, 1.0, [6.049832, 17.688512, 30.688747, 46.822277, 63.125944, 83.563783, 101.596737, 127.665245, 144.254657]),
    ("roots_a5_g1", 5.0, 1.0, [1.073606]),
]

PAIRS = [
    ("pair_a1_g1", 1.0, 1.0, 37.583 + 2.688j),
    ("pair_a5_g1", 5.0, 1.0, 2.5197 + 0.6519j),
]

EPS = [
    (1.0, 0.148284, 51.472683),
    (1.0, 0.239029, 45.494960),
    (1.0, 0.404248, 39.515869),
    (1.0, 0.738527, 33.662311),
    (1.0, 1.571640, 28.390088),
    (1.0, 5.343145, 26.685351),
    (0.5, 0.593137, 205.890732),
    (0.5, 0.956117, 181.979841),
    (0.5, 1.616994, 158.063477),
    (0.5, 2.954107, 134.649244),
    (0.5, 6.286562, 113.560350),
    (0.5, 21.372580, 106.741404),
]

F_POINTS = [(1.0, 1.0, 3.0), (1.0, 1.0, 20.0 + 1.5j), (0.5, 2.0, 50.0 - 4.0j), (2.0, 0.3, 0.8 + 0.1j)]


def main():
    print("// Generated by tests/oracle/generate_spectrum_values.py (mpmath).")
    print("// Do not edit by hand.")
    print("#pragma once\n#include <complex>\n#include <vector>\n")
    print("namespace ptexp::reference {\n")
    print("struct SpectrumPoint { double a, g; std::complex<double> E, f; };")
    print("struct EpPoint { double a, g_star, E_star; };\n")
    for name, a, g, seeds in REAL:
        vals = [real_root(a, g, s) for s in seeds]
        print("inline const std::vector<double> %s = {%s};" % (name, ", ".join(r(v) for v in vals)))
    print()
    for name, a, g, seed in PAIRS:
        z = complex_root(a, g, seed)
        if z.imag < 0:
            z = mp.conj(z)
        print("inline const std::complex<double> %s%s;" % (name, c(z)))
    print()
    print("inline const std::vector<EpPoint> exceptional_points = {")
    for a, g0, E0 in EPS:
        g, E = exceptional_point(a, g0, E0)
        print("    {%r, %s, %s}," % (a, r(g), r(E)))
    print("};\n")
    hump = twice(lambda: [mp.findroot(lambda E: mp.diff(lambda e: R(e, 1, 1), E), mp.mpf("38.65"))])[0]
    print("// stationary point of R(E) between the last pole and 45 at a = g = 1")
    print("inline constexpr double hump_a1_g1 = %s;\n" % r(hump))
    print("// f(E) = H1'K + H1 K' at (a, g)")
    print("inline const std::vector<SpectrumPoint> f_values = {")
    for a, g, E in F_POINTS:
        with mp.workdps(40):
            v = f(mp.mpc(E), g, a)
        print("    {%r, %r, %s, %s}," % (a, g, c(E), c(v)))
    print("};\n")
    print("}  // namespace ptexp::reference")


if __name__ == "__main__":
    main()
