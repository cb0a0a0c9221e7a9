"""Independent high-precision oracle for the frozen reference values used in
the C++ unit tests. Run once; the printed numbers are pasted into
tests/golden_values.hpp.

Mittag-Leffler values come from direct series summation at a working
precision large enough to absorb the cancellation on the negative axis,
from the erfc closed form for alpha = 1/2, or (for alpha = 0.3 far on the
negative axis) from the Laplace-type spectral integral evaluated with
mpmath's tanh-sinh quadrature.
"""
import mpmath as mp


def ml_series(alpha, beta, z, dps):
    with mp.workdps(dps):
        z = mp.mpf(z)
        s = mp.mpf(0)
        j = 0
        while True:
            term = z**j / mp.gamma(mp.mpf(alpha) * j + beta)
            s += term
            # terms grow until j*alpha ~ |z|^(1/alpha); stop well past the peak
            if j * alpha > abs(z) ** (1 / alpha) + 10 and abs(term) < mp.mpf(10) ** -45 * max(1, abs(s)):
                break
            j += 1
        return +s


def ml_spectral(alpha, x, deriv=False):
    # E_alpha(-x) and E_{alpha,alpha}(-x), x > 0, via the spectral densities
    with mp.workdps(40):
        a = mp.mpf(alpha)
        x = mp.mpf(x)
        t = x ** (1 / a)
        sa, ca = mp.sin(mp.pi * a), mp.cos(mp.pi * a)

        def dens(r):
            d = r ** (2 * a) + 2 * r**a * ca + 1
            p = a if deriv else a - 1
            return mp.exp(-r * t) * r**p * sa / (mp.pi * d)

        val = mp.quad(dens, [0, 1, mp.inf])
        if deriv:
            val *= t ** (1 - a)
        return val


def ml(alpha, z):
    if alpha == 0.5 and z < 0:
        with mp.workdps(40):
            return mp.exp(mp.mpf(z) ** 2) * mp.erfc(-mp.mpf(z))
    if alpha == 0.3 and z < -5:
        return ml_spectral(alpha, -z)
    return ml_series(alpha, 1, z, 60 + int(abs(z) ** (1 / alpha) / 2.3))


def ml_deriv(alpha, z):
    # E_alpha'(z) = E_{alpha,alpha}(z) / alpha
    if alpha == 0.3 and z < -5:
        return ml_spectral(alpha, -z, deriv=True) / alpha
    return ml_series(alpha, alpha, z, 60 + int(abs(z) ** (1 / alpha) / 2.3)) / alpha


if __name__ == "__main__":
    pts = [(0.5, -1.0), (0.5, -2.0), (0.5, 2.0), (0.5, -10.0), (0.5, -50.0),
           (0.3, -2.0), (0.3, 2.0), (0.3, -10.0), (0.3, -50.0), (0.3, 4.5),
           (0.7, -4.0), (0.7, -7.0), (0.7, -50.0), (0.7, 6.0), (0.7, 20.0),
           (0.9, -2.0), (0.9, -20.0), (0.9, -50.0), (0.99, -2.0), (0.99, 10.0)]
    print("// {alpha, t, E_alpha(t), E_alpha'(t)}")
    for a, z in pts:
        e = ml(a, z)
        d = ml_deriv(a, z)
        print("    {%r, %r, %s, %s}," % (a, z, mp.nstr(e, 20), mp.nstr(d, 20)))
    with mp.workdps(30):
        for s in (0.3, 0.5, 0.7):
            # int_0^inf (2 cos y - 2) y^(-1-p) dy = 2 Gamma(-p) cos(pi p / 2), p = 2 sigma
            p = 2 * mp.mpf(s)
            v = mp.pi * -1 if s == 0.5 else 2 * mp.gamma(-p) * mp.cos(mp.pi * p / 2)
            print("// pucci cos sigma=%r: %s" % (s, mp.nstr(v, 20)))
