#!/usr/bin/env python3
"""Independent reference numbers for the catalog thresholds.

Uses scipy only; none of the C++ code is involved. The printed values are
frozen in src/catalog_golden.hpp (with the margins noted there).
"""
import json

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

TOL = dict(rtol=1e-11, atol=1e-12)
out = {}


def period(sol, a, b, i=0, n=200001):
    t = np.linspace(a, b, n)
    v = sol.sol(t)[i]
    mid = 0.5 * (v.max() + v.min())
    v = v - mid
    idx = np.where((v[:-1] < 0) & (v[1:] >= 0))[0]
    tc = t[idx] - v[idx] * (t[idx + 1] - t[idx]) / (v[idx + 1] - v[idx])
    return float(np.mean(np.diff(tc)))


# Rayleigh: logistic amplitude, third harmonic, naive order-1 series
def rayleigh():
    res = {}
    for eps in (0.01, 0.05, 0.1):
        R0, T = 0.5, 2 / eps
        R = lambda t: 2 / np.sqrt(1 + (4 / R0**2 - 1) * np.exp(-eps * t))
        asym = lambda t: R(t) * np.sin(t) + eps * R(t) ** 3 / 96 * np.cos(3 * t)
        naive = lambda t: R0 * np.sin(t) + eps * ((R0 / 2 - R0**3 / 8) * t * np.sin(t) + R0**3 / 96 * np.cos(3 * t))
        h = 1e-6
        s = solve_ivp(lambda t, y: [y[1], -y[0] + eps * (y[1] - y[1] ** 3 / 3)], (0, T),
                      [asym(0), (asym(h) - asym(-h)) / (2 * h)], dense_output=True, **TOL)
        t = np.linspace(0, T, 20001)
        ref = s.sol(t)[0]
        ea, en = np.abs(asym(t) - ref), np.abs(naive(t) - ref)
        w = t >= T - 2 * np.pi
        res[str(eps)] = dict(sup=float(ea.max()), window_ratio=float(en[w].max() / ea[w].max()))
    return res


def mathieu(eps=0.05, a1=0.0, R0=1.0, T=20.0):
    p = 2 * eps * (1 + a1) / (1 - 2 * eps)

    def asym(t):
        c = np.cos(t / 2)
        R = R0 * (np.abs(c) / np.sqrt(1 - 2 * eps + 2 * eps * c * c)) ** p
        return R * (np.cos(t / 2) - eps / 2 * np.cos(t / 2) + eps / 2 * np.cos(3 * t / 2))

    h = 1e-6
    y0 = [asym(0.0), (asym(h) - asym(-h)) / (2 * h)]
    s = solve_ivp(lambda t, y: [y[1], -(0.25 + a1 * eps + 2 * eps * np.cos(t)) * y[0]], (0, T), y0,
                  dense_output=True, **TOL)
    t = np.linspace(0, T, 4001)
    return float(np.abs(asym(t) - s.sol(t)[0]).max())


def three_wave_rhs(w, eps):
    def f(t, s):
        x, y, z, dx, dy, dz = s
        return [dx, dy, dz, -w[0] ** 2 * x - eps * y * z, -w[1] ** 2 * y - eps * x * z, -w[2] ** 2 * z - eps * x * y]
    return f


def three_wave_nonres(eps=0.05, T=20.0):
    w1, w2, w3 = 2.3, 1.0, 0.7

    def xyz(t):
        x = np.cos(w1 * t) - eps / 2 * (np.cos((w2 + w3) * t) / (w1**2 - (w2 + w3) ** 2)
                                       + np.cos((w2 - w3) * t) / (w1**2 - (w2 - w3) ** 2))
        y = np.cos(w2 * t) - eps / 2 * (np.cos((w1 + w3) * t) / (w2**2 - (w1 + w3) ** 2)
                                       + np.cos((w1 - w3) * t) / (w2**2 - (w1 - w3) ** 2))
        z = np.cos(w3 * t) - eps / 2 * (np.cos((w1 + w2) * t) / (w3**2 - (w1 + w2) ** 2)
                                       + np.cos((w1 - w2) * t) / (w3**2 - (w1 - w2) ** 2))
        return np.array([x, y, z])

    h = 1e-6
    s0 = list(xyz(0.0)) + list((xyz(h) - xyz(-h)) / (2 * h))
    s = solve_ivp(three_wave_rhs((w1, w2, w3), eps), (0, T), s0, dense_output=True, **TOL)
    t = np.linspace(0, T, 4001)
    return float(np.abs(xyz(t) - s.sol(t)[:3]).max())


def three_wave_frequency(w, eps=0.01, T=400.0):
    s0 = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0]
    s = solve_ivp(three_wave_rhs(w, eps), (0, T), s0, dense_output=True, **TOL)
    return 2 * np.pi / period(s, 0, T, 0, 400001)


def lin_example2(eps=0.1, T=20.0):
    asym = lambda t: np.exp(eps * t / 2) * np.sin((1 - eps**2 / 8) * t)
    h = 1e-6
    s = solve_ivp(lambda t, y: [y[1], -y[0] + eps * y[1]], (0, T), [asym(0), (asym(h) - asym(-h)) / (2 * h)],
                  dense_output=True, **TOL)
    t = np.linspace(0, T, 4001)
    return float(np.abs(asym(t) - s.sol(t)[0]).max())


def boundary_layers(eps=0.05, A=1.0):
    xs = np.linspace(0.05, 1, 200)
    ls = solve_ivp(lambda x, y: [-(2 + x) * y[0] / (x + eps * y[0])], (1, 1e-3), [A * np.exp(-1)],
                   dense_output=True, method="LSODA", rtol=1e-12, atol=1e-14)
    V = lambda T: quad(lambda r: r * (2 * r + 1) * np.exp(-1 / r), 1, T, limit=200)[0]
    la = lambda x: x**-2 * np.exp(-x) / (eps * V(1 / x) + 1 / A)
    ts = solve_ivp(lambda x, y: [(2 * x**3 + x**2 - y[0]) / (x**2 + eps * y[0])], (1, 1e-3), [A * np.e],
                   dense_output=True, method="LSODA", rtol=1e-12, atol=1e-14)
    # exp(T)/(eps W(T) + 1/A) with W(T) = int_1^T r^2 e^r dr, scaled by exp(-T)
    Ws = lambda T: quad(lambda r: r * r * np.exp(r - T), 1, T, limit=400)[0]
    ta = lambda x: 1 / (eps * Ws(1 / x) + np.exp(-1 / x) / A)
    return dict(
        lighthill_rel=float(max(abs(la(x) - ls.sol(x)[0]) / abs(ls.sol(x)[0]) for x in xs)),
        lighthill_at_1e3=float(la(1e-3)),
        tsien_rel=float(max(abs(ta(x) - ts.sol(x)[0]) / abs(ts.sol(x)[0]) for x in xs)),
        tsien_at_1e3=float(ta(1e-3)),
        reference_at_1e3=[float(ls.sol(1e-3)[0]), float(ts.sol(1e-3)[0])],
    )


def modal(kind, param, eps=0.05, A=(1.0, 0.5), T=60.0):
    N = len(A)
    if kind == "wave":
        w = np.array([np.sqrt(n * n + param) for n in range(1, N + 1)])
        L = np.pi
    else:
        w = np.array([np.sqrt(n**4 - param) for n in range(1, N + 1)])
        L = 2 * np.pi
    xs = np.linspace(0, L, 4001)
    modes = [np.sin((m + 1) * xs) for m in range(N)]

    def rhs(t, s):
        u = sum(s[m] * modes[m] for m in range(N))
        acc = [-w[n] ** 2 * s[n] + eps * 2 / L * np.trapezoid(u**3 * modes[n], xs) for n in range(N)]
        return np.concatenate([s[N:], acc])

    s = solve_ivp(rhs, (0, T), np.concatenate([A, np.zeros(N)]), dense_output=True, max_step=0.05,
                  rtol=1e-10, atol=1e-12)
    return dict(measured=2 * np.pi / period(s, 0, T, 0), printed=float(w[0] + eps * sum(a * a for a in A) / (4 * w[0])))


def duffing(al=1.0, be=0.1, F=0.2, w=1.2):
    r = np.roots([3 * be, 0, 4 * (w * w - al), 4 * F])
    A = [x.real for x in r if abs(x.imag) < 1e-12]
    rhs = lambda t, s: [s[1], -al * s[0] + be * s[0] ** 3 + F * np.cos(w * t)]
    res = lambda y0: solve_ivp(rhs, (0, np.pi / w), [y0, 0], **TOL).y[1, -1]
    ys = np.linspace(-1, 1, 41)
    vals = [res(y) for y in ys]
    orbits = []
    for i in range(40):
        if vals[i] * vals[i + 1] < 0:
            y0 = brentq(res, ys[i], ys[i + 1])
            s = solve_ivp(rhs, (0, 2 * np.pi / w), [y0, 0], dense_output=True, **TOL)
            orbits.append(float(np.abs(s.sol(np.linspace(0, 2 * np.pi / w, 2001))[0]).max()))
    return dict(real_roots=A, orbit_amplitudes=orbits)


def cubic_route2(eta=0.5, A=0.1):
    w = np.sqrt(eta - 0.75 * eta * A * A)
    z0 = A - eta * A**3 / (32 * w * w) - 2 * eta / (27 * w * w)
    s = solve_ivp(lambda t, s: [s[1], eta * (s[0] ** 3 - s[0] - 2 / 27)], (0, 200), [z0, 0], dense_output=True, **TOL)
    return dict(predicted=float(2 * np.pi / w), measured=period(s, 0, 200))


def blasius():
    bl = lambda t, s: [s[1], s[2], -s[0] * s[2]]
    a = brentq(lambda a: solve_ivp(bl, (0, 30), [0, 0, a], **TOL).y[1, -1] - 0.5, 0.01, 1)
    s = solve_ivp(bl, (0, 30), [0, 0, a], dense_output=True, **TOL)
    t = np.linspace(0, 30, 30001)
    yp = s.sol(t)[1]
    A0 = (-3 + np.sqrt(13)) / 2
    # engine rate (B + C - 1)/(B + C - 2) - 1 = -2/3 at B = 1/2, C = 0
    eng = -1.5 * A0 * np.exp(-2 * t / 3) - A0**2 / 2 * np.exp(-4 * t / 3) + 0.5
    printed = -1.5 * A0 * np.exp(-t) - A0**2 / 2 * np.exp(-2 * t) + 0.5
    return dict(ypp0=float(a), sup_engine=float(np.abs(eng - yp).max()), sup_printed=float(np.abs(printed - yp).max()))


def riccati_limit():
    s = solve_ivp(lambda t, y: [1 - y[0] ** 2], (0, 20), [0.0], **TOL)
    return float(abs(s.y[0, -1] - 1))


out["rayleigh"] = rayleigh()
out["mathieu_sup"] = mathieu()
out["three_wave_nonres_sup"] = three_wave_nonres()
out["three_wave_sum_freq"] = three_wave_frequency((2.0, 1.0, 1.0))
out["three_wave_diff_freq"] = three_wave_frequency((1.0, 2.0, 1.0))
out["lin_example2_sup"] = lin_example2()
out.update(boundary_layers())
out["rod"] = modal("wave", 1.0)
out["beam"] = modal("beam", 0.5)
out["duffing"] = duffing()
out["cubic_route2"] = cubic_route2()
out["blasius"] = blasius()
out["riccati_limit_gap"] = riccati_limit()
print(json.dumps(out, indent=1))
