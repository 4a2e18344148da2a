"""Recompute the reference values frozen into the test suite.

Everything here runs at 40 significant digits with sympy/mpmath and shares no
code with the package: Wronskians come from symbolic differentiation, roots
from mpmath's polyroots/findroot, Weierstrass functions from mpmath's theta
functions on the unreduced lattice, and Whittaker-Hill eigenvalues from the
exact characteristic polynomial.  Output is a Python literal block to paste
into ``tests/oracle_values.py``.

    python3 scripts/make_oracles.py
"""
from __future__ import annotations

import mpmath as mp
import sympy as sp

mp.mp.dps = 40
z = sp.symbols("z")
X = sp.symbols("X")


def wronskian_expr(funcs):
    n = len(funcs)
    return sp.Matrix(n, n, lambda i, j: sp.diff(funcs[j], z, i)).det()


def strip_roots(expr_in_z, denom_degree_shift=None):
    """Zeros of a pi-periodic trig expression: rewrite in X = e^{2iz} and use polyroots."""
    e = sp.expand(sp.simplify(expr_in_z.rewrite(sp.exp)))
    u = sp.symbols("u")
    e = sp.expand(e.subs(sp.exp(sp.I * z), u).subs(z, sp.log(u) / sp.I))
    e = sp.expand(sp.simplify(e))
    num, _ = sp.fraction(sp.together(e))
    poly = sp.Poly(sp.expand(num), u)
    # strip powers of u
    coeffs = poly.all_coeffs()
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    roots = mp.polyroots([mp.mpc(complex(sp.N(c, 50))) for c in coeffs], maxsteps=400, extraprec=400)
    out = []
    for r in roots:
        w = -1j * mp.log(r)
        x = mp.re(w) % mp.pi
        out.append(mp.mpc(x, mp.im(w)))
    return out


def unique_mod(points, tol=1e-12):
    """Distinct points modulo pi (u and -u give the same strip point)."""
    res = []
    for p in points:
        if all(min(abs(p - q), abs(p - q - mp.pi), abs(p - q + mp.pi)) > tol for q, _ in res):
            res.append((p, 1))
        else:
            for i, (q, m) in enumerate(res):
                if min(abs(p - q), abs(p - q - mp.pi), abs(p - q + mp.pi)) <= tol:
                    res[i] = (q, m + 1)
    return res


def wronskian_value():
    f = [sp.sin(z), sp.sin(2 * z), sp.exp(4 * sp.I * z)]
    w = wronskian_expr(f)
    return complex(sp.N(w.subs(z, sp.Rational(3, 10) + sp.I / 10), 30))


def street_7_8_kappa4():
    kappa = 4
    num = wronskian_expr([sp.sin(7 * z), sp.sin(8 * z), sp.exp(sp.I * kappa * z)])
    num = sp.simplify(num * sp.exp(-sp.I * kappa * z))
    roots = unique_mod(strip_roots(num), 1e-20)
    return sorted([(complex(r), m) for r, m in roots], key=lambda t: (round(t[0].real, 12), t[0].imag))


def collinear_real_zeros():
    # W(sin z, sin 5z) = 2 sin 6z - 3 sin 4z; real zeros strictly inside (0, pi) other than pi/2
    f = lambda x: 2 * mp.sin(6 * x) - 3 * mp.sin(4 * x)
    grid = [mp.mpf(i) * mp.pi / 2000 for i in range(1, 2000)]
    roots = []
    for a, b in zip(grid, grid[1:]):
        if f(a) * f(b) < 0:
            roots.append(mp.findroot(f, (a, b), solver="anderson"))
    return [float(r) for r in roots if abs(r - mp.pi / 2) > 1e-6]


def weierstrass_mp(omega1, omega2, zz):
    """zeta and wp from mpmath theta functions (no basis or cell reduction)."""
    w1, w2 = mp.mpc(omega1), mp.mpc(omega2)
    tau = w2 / w1
    q = mp.exp(1j * mp.pi * tau)
    t1 = mp.jtheta(1, 0, q, 1)
    t3 = mp.jtheta(1, 0, q, 3)
    eta1 = -mp.pi ** 2 * t3 / (12 * w1 * t1)
    v = mp.pi * mp.mpc(zz) / (2 * w1)
    th = mp.jtheta(1, v, q)
    th1 = mp.jtheta(1, v, q, 1)
    th2 = mp.jtheta(1, v, q, 2)
    c = mp.pi / (2 * w1)
    zeta = eta1 * mp.mpc(zz) / w1 + c * th1 / th
    wp = -eta1 / w1 - c ** 2 * (th2 / th - (th1 / th) ** 2)
    return complex(zeta), complex(wp), complex(eta1)


def wh_eigenvalues(s, alpha):
    lam = sp.symbols("lam")
    h = (s - 1) // 2
    ks = list(range(-h, h + 1))
    M = sp.zeros(s, s)
    for c, k in enumerate(ks):
        M[c, c] = 4 * k * k
        if c + 1 < s:
            M[c + 1, c] = 2 * alpha * (2 * k + 1 - s)
        if c - 1 >= 0:
            M[c - 1, c] = -2 * alpha * (2 * k - 1 + s)
    poly = sp.Poly((M - lam * sp.eye(s)).det(), lam)
    roots = mp.polyroots([mp.mpf(sp.Rational(cf)) for cf in poly.all_coeffs()], maxsteps=200, extraprec=200)
    return sorted(float(mp.re(r)) - 2 * float(alpha) ** 2 for r in roots)


def main():
    print("WRONSKIAN_1_2_KAPPA4_AT_03_01 =", repr(wronskian_value()))
    print("STREET_7_8_KAPPA4_NUMERATOR_ROOTS = [")
    for r, m in street_7_8_kappa4():
        print(f"    ({r!r}, {m}),")
    print("]")
    print("COLLINEAR_2_1_2_REAL_ZEROS =", collinear_real_zeros())
    for name, (w1, w2), pts in [
        ("WEIERSTRASS_SQUARE", (mp.pi / 2, 1j * mp.pi / 2), [0.3 + 0.2j, 1.1 - 0.4j]),
        ("WEIERSTRASS_OBLIQUE", (1, 0.3 + 0.8j), [0.37 + 0.11j, -0.5 + 0.6j]),
    ]:
        print(f"{name} = [")
        for p in pts:
            zeta, wp, eta1 = weierstrass_mp(w1, w2, p)
            print(f"    ({p!r}, {zeta!r}, {wp!r}),")
        print("]")
        print(f"{name}_ETA1 =", repr(weierstrass_mp(w1, w2, 0.1)[2]))
    print("WH_S5_ALPHA15_EIGENVALUES =", wh_eigenvalues(5, sp.Rational(3, 2)))
    print("WH_S3_ALPHA08_EIGENVALUES =", wh_eigenvalues(3, sp.Rational(4, 5)))


if __name__ == "__main__":
    main()
