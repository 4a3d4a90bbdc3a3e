"""Independent high-precision evaluation of the frozen test values.

Run with: python3 tests/oracle/oracle.py
"""
from mpmath import mp, mpf, exp, log10, log, sqrt

mp.dps = 40
h = mpf("6.62607015e-34")
kB = mpf("1.380649e-23")
f = mpf("7.151e9")


def nth(T, freq=f):
    T = mpf(T)
    if T == 0:
        return mpf(0)
    return 1 / (exp(h * freq / (kB * T)) - 1)


def added(r, T, nexc):
    ki_ke = (1 - mpf(r)) / mpf(r)
    return ki_ke * (2 * nth(T) + 1) + mpf("0.5") + mpf(nexc)


def sysnoise(r, nexc, a1, a2, T, tm="0.01", tp="1.0"):
    r = mpf(r); a1 = mpf(a1); a2 = mpf(a2)
    ki_ke = (1 - r) / r
    amp = (ki_ke * (2 * nth(T) + mpf("0.5")) + mpf(nexc) + 1) / (a1 * a2)
    l1 = (1 / r) * 2 * (1 - a1) / a1 * (nth(tm) + 1)
    l2 = (1 / r) * 2 * (1 - a2) / (a1 * a2) * (nth(tp) + 1)
    return amp, l1, l2, amp + l1 + l2


def db(x):
    return mpf(10) ** (mpf(x) / 10)


print("hbar*omega/kB [K]", h * f / kB)
for T in ["1.0", "0.13", "4.0", "1.5", "0.01"]:
    print("n_s", T, nth(T))
print("db -1", db(-1), "db -1.5", db(-1.5))
print("mode_occ", mpf("0.98") * nth("0.13") + mpf("0.02") * nth("1.0"))
print("added 0.13", added("0.98", "0.13", "0.62"))
print("added 1.5", added("0.98", "1.5", "0.62"))
for r in ["0.98", "0.90"]:
    print("delta", r, 2 * (1 - mpf(r)) / mpf(r) * (nth("1.5") - nth("0.13")))
eff = mpf("0.8") * mpf("0.9") * 0 + mpf("0.8") * mpf("0.1") * (nth("0.01") + 1) + mpf("0.2") * (nth("1.0") + 1)
print("eff_input", eff)
print("intracavity", mpf("0.98") * eff + mpf("0.02") * nth("1.0"))
print("hf", h * f)
print("sys 1K", sysnoise("0.98", "0.62", "0.9", "0.8", "1.0"))
print("sys 4K", sysnoise("0.98", "0.62", "0.9", "0.8", "4.0"))
print("sys 1dB", sysnoise("0.98", "0.62", db(-1), db(-1), "1.0"))
print("sys 1.5dB", sysnoise("0.98", "0.62", db(-1.5), db(-1.5), "1.0"))
G = mpf(10) ** mpf("2.7")
print("snr", 10 * log10(mpf("35.5") / (mpf("1.14") + mpf("0.5") + mpf("35.5") / G)))
# calibration forward model: y = s*(2 n(Tsrc) + 2 ki/ke n(Tdev) + ke^-1 kappa + n_exc)
r = mpf("0.98")
off = 2 * (1 - r) / r * nth("0.13") + 1 / r + mpf("0.62")
print("synth offset", off, "n_add=off-0.5", off - mpf("0.5"))
print("synth y(1K) n_exc once", 2 * nth("1.0") + off)
print("synth y(1K) n_exc twice", 2 * nth("1.0") + off + mpf("0.62"))
# reflection at resonance
print("s11 res", 1 - 2 * r)
# occupancy->temperature inverse
def inv(n):
    return h * f / (kB * log(1 + 1 / mpf(n)))
print("inv 2.4423", inv("2.4423"), "inv 0.076845", inv("0.076845"))
