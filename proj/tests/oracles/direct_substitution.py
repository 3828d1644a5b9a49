"""Independent direct-substitution oracle for frozen regression constants.

Evaluates the closed forms directly in the original energy variables (not the
library's code path) and prints the values frozen into the C++ tests.
"""
from mpmath import mp, mpf, sqrt

mp.dps = 40

Nt, NL, NU = 4, 2, 2
s_hd = s_hu = s_g = s_w = s_wt = s_v = mpf(1)


def alpha_sq(E0, E1):
    return E1 / (E0 * NL * s_hd + Nt * NL * s_w)


def beta(E0, E1, E2):
    a2 = alpha_sq(E0, E1)
    return NL / (1 / s_hu + E2 / (NL * s_wt)) + s_wt / (a2 * s_hd * s_w) / (1 / s_hd + E0 / (Nt * s_w))


def sigma_sq(E2):
    return s_hu**2 * E2 / (s_hu * E2 + NL * s_wt)


def nmse_l_approx(E0, E1, E2, E3, va, variant):
    s2 = sigma_sq(E2)
    s = sqrt(s2) if variant == "printed" else s2
    b = beta(E0, E1, E2)
    J = Nt * s / (b + Nt * s)
    rho = s_hd * E0 / (s_hd * E0 + Nt * s_w)
    an = (Nt - NL) * va * (s_hd - s_hd * rho * J)
    return 1 / (1 / s_hd + (E3 / Nt) / (an + s_w))


def f1_f2(E0, E1, E2, E3, va):
    # f1, f2 of the condensed GP in energy variables
    a2 = alpha_sq(E0, E1)
    x = s_hd * E0 / Nt + s_w
    inner = NL * x * a2 + Nt * s_hu / s_wt * x * a2 * E2 / NL + E2 / NL + s_wt / s_hu
    f1 = E3 / Nt * inner
    f2 = (Nt - NL) * va * s_hd * (NL / s_w * x * a2 + Nt * s_hu / s_wt * a2 * E2 / NL + E2 / (NL * s_w) + s_wt / (s_hu * s_w)) + inner
    return f1, f2


def theta_printed(t, t0, t1, t2, t3):
    k = s_v * s_hd / s_g
    g = t * k * (NL / s_w * t0 * t1 + Nt * s_hu / s_wt * t1 * t2 + t2 / s_w + s_wt / (s_hu * s_w)) \
        + NL * t0 * t1 * t3 + Nt * s_hu / s_wt * t0 * t1 * t2 * t3 + t2 * t3 + s_wt / s_hu * t3
    th0 = (t * k * NL / s_w * t0 * t1 + NL * t0 * t1 * t3 + Nt * s_hu / s_wt * t0 * t1 * t2 * t3) / g
    th1 = (t * k * NL / s_w * t0 * t1 + t * k * Nt * s_hu / s_wt * t1 * t2 + NL * t0 * t1 * t3 + Nt * s_hu / s_wt * t0 * t1 * t2 * t3) / g
    th2 = (t * k * Nt * s_hu / s_wt * t1 * t2 + t * k / s_w * t2 + Nt * s_hu / s_wt * t0 * t1 * t2 * t3 + t2 * t3) / g
    th3 = (NL * t0 * t1 * t3 + Nt * s_hu / s_wt * t0 * t1 * t2 * t3 + t2 * t3 + s_wt / s_hu * t3) / g
    tht = t * k * (NL / s_w * t0 * t1 + Nt * s_hu / s_wt * t1 * t2 + t2 / s_w + s_wt / (s_hu * s_w)) / g
    return g, tht, th0, th1, th2, th3


if __name__ == "__main__":
    E = mpf(10)
    print("beta(E0=E1=E2=10) =", beta(E, E, E))
    va = mpf("0.5")
    f1, f2 = f1_f2(E, E, E, E, va)
    print("gp tuple: t =", f1 / f2, "t0 =", s_hd * E / Nt + s_w, "t1 =", alpha_sq(E, E),
          "t2 =", E / NL, "t3 =", E / Nt, "t4 =", (Nt - NL) * va * s_g + s_v)
    print("nmse via f1/f2 =", 1 / (1 / s_hd + f1 / f2 / s_w))
    print("nmse sigma-sq  =", nmse_l_approx(E, E, E, E, va, "sigma-squared"))
    print("nmse printed   =", nmse_l_approx(E, E, E, E, va, "printed"))
    print("theta(all ones) =", theta_printed(1, 1, 1, 1, 1))
    # equal split of P_ave = 20 dB across E0..E3 (budget 100*(3*4+2)), sigma_a^2 = 0.5
    Eq = mpf(100) * 14 / 4
    print("equal split E =", Eq)
    print("approx printed =", nmse_l_approx(Eq, Eq, Eq, Eq, va, "printed"))
    print("approx sigma^2 =", nmse_l_approx(Eq, Eq, Eq, Eq, va, "sigma-squared"))
    # gamma_min reciprocal at Pave 20 dB, Pbar_t 30 dB, tauR=2, tauF=4
    print("gamma_min =", 1 / (1 + min(4000, 600) / mpf(4)))
    print("LB rec 15 dB =", 1 / (1 + min(mpf(4000), 10**mpf(1.5) * 6) / 4))
    print("LB nonrec 15 dB =", 1 / (1 + min(mpf(8000), 10**mpf(1.5) * 14) / 4))
