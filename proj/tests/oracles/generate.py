"""Regenerates ../oracles.hpp from mpmath at 40 digits.

    python3 generate.py > ../oracles.hpp
"""
import mpmath as mp

mp.mp.dps = 40


def gamma_ns(n, s):
    return mp.power(2, -2 * s) * mp.gamma(mp.mpf(n) / 2) / (mp.gamma((n + 2 * s) / 2) * mp.gamma(1 + s))


def gamma_nse(n, s, eps):
    z = 1 - (1 + eps) ** 2
    return gamma_ns(n, s) / ((1 + eps) * mp.hyp2f1((n + 2 * s) / 2, mp.mpf(1) / 2, mp.mpf(n) / 2, z))


def c_ns(n, s):
    return s * mp.power(4, s) * mp.gamma(mp.mpf(n) / 2 + s) / (mp.pi ** (mp.mpf(n) / 2) * mp.gamma(1 - s))


def boundary_ball(h, s):
    # int over 1 < |y| < 1+h, y1 > 0 of y1 ((1+h-|y|)/(|y|-1))^s dy
    return 2 * mp.quad(lambda r: r * r * ((1 + h - r) / (r - 1)) ** s, [1, 1 + h / 2, 1 + h])


def ellipse_distance(a, b, x, y):
    # nearest point parametrized by angle; polish the sampled minimum
    f = lambda t: (a * mp.cos(t) - x) ** 2 + (b * mp.sin(t) - y) ** 2
    ts = [mp.pi * k / 2000 for k in range(2001)]
    t0 = min(ts, key=f)
    t = mp.findroot(lambda t: mp.diff(f, t), t0)
    return mp.sqrt(f(t))


def psi(s, eps, tau):
    e = (1 + eps) ** 2 - 1
    sq = mp.sqrt(1 + e * tau * tau)
    a = 1 + eps - 1 / (2 * sq)
    b = 1 - (1 + eps) / (2 * sq)
    h = 1 - a * a * (1 - tau * tau) / (1 + eps) ** 2 - b * b * tau * tau
    q = mp.mpf(3) / 4
    return (h ** s - q ** s) / eps + s / 2 * q ** (s - 1) * (1 - tau * tau)


def emit(name, value):
    print(f"inline constexpr double {name} = {mp.nstr(value, 20)};")


mpf = mp.mpf
print("#pragma once")
print()
print("// Reference values from mpmath at 40 digits; regenerate with")
print("// tests/oracles/generate.py.")
print()
print("namespace oracle {")
print()
emit("kGamma0_1", mp.gamma(mpf("0.1")))
emit("kGamma7_3", mp.gamma(mpf("7.3")))
emit("kGamma49_5", mp.gamma(mpf("49.5")))
emit("kGammaMinus2_5", mp.gamma(mpf("-2.5")))
emit("kHyp1_1_2_m03", mp.hyp2f1(1, 1, 2, mpf("-0.3")))
emit("kHyp15_05_1_m021", mp.hyp2f1(mpf("1.5"), mpf("0.5"), 1, 1 - mpf("1.1") ** 2))
emit("kHyp2_05_15_m05625", mp.hyp2f1(2, mpf("0.5"), mpf("1.5"), mpf("-0.5625")))
emit("kGammaNs_2_05", gamma_ns(2, mpf("0.5")))
emit("kGammaNs_2_025", gamma_ns(2, mpf("0.25")))
emit("kGammaNs_3_075", gamma_ns(3, mpf("0.75")))
emit("kGammaNse_2_05_01", gamma_nse(2, mpf("0.5"), mpf("0.1")))
emit("kGammaNse_3_075_02", gamma_nse(3, mpf("0.75"), mpf("0.2")))
emit("kCns_2_05", c_ns(2, mpf("0.5")))
emit("kCns_2_025", c_ns(2, mpf("0.25")))
emit("kCns_3_075", c_ns(3, mpf("0.75")))
emit("kBoundaryBall_005_025", boundary_ball(mpf("0.05"), mpf("0.25")))
emit("kBoundaryBall_005_05", boundary_ball(mpf("0.05"), mpf("0.5")))
emit("kBoundaryBall_005_075", boundary_ball(mpf("0.05"), mpf("0.75")))
emit("kEllipseDist_11_1_03_02", ellipse_distance(mpf("1.1"), 1, mpf("0.3"), mpf("0.2")))
emit("kEllipseDist_11_1_09_04", ellipse_distance(mpf("1.1"), 1, mpf("0.9"), mpf("0.4")))
emit("kEllipseDist_11_1_15_08", ellipse_distance(mpf("1.1"), 1, mpf("1.5"), mpf("0.8")))
emit("kSeminormLimit_2_05", mpf("0.5") * gamma_ns(2, mpf("0.5")) * (mpf(3) / 4) ** (mpf("0.5") - 1))
emit("kSeminormLimit_3_075", mpf("0.75") * gamma_ns(3, mpf("0.75")) * (mpf(3) / 4) ** (mpf("0.75") - 1))
emit("kPsi_05_001_04", psi(mpf("0.5"), mpf("0.01"), mpf("0.4")))
emit("kPsi_025_0001_07", psi(mpf("0.25"), mpf("0.001"), mpf("0.7")))
emit("kPsiPrime_05_001_04", mp.diff(lambda t: psi(mpf("0.5"), mpf("0.01"), t), mpf("0.4")))
emit("kPhi0Quotient_0_05", (mpf("0.25")) / mp.sqrt((mpf(1) / 2 - mp.sqrt(1 - mpf("0.25")) / 2) ** 2 + mpf("0.0625")))
t = mpf("0.2")
emit("kDiskSymDiff_02", 2 * (mp.pi - 2 * (mp.acos(t) - t * mp.sqrt(1 - t * t))))
print()
print("}  // namespace oracle")
