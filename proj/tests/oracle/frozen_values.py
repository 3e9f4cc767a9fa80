"""Independent high-precision evaluation of the closed-form quantities frozen
into the C++ unit tests. Run with: python3 tests/oracle/frozen_values.py"""
from mpmath import mp, mpf, log, sqrt, exp, pi, e, ceil

mp.dps = 30


def kl_bern(p, q):
    p, q = mpf(p), mpf(q)
    t1 = p * log(p / q) if p > 0 else 0
    t2 = (1 - p) * log((1 - p) / (1 - q)) if p < 1 else 0
    return t1 + t2


def kl_gauss(p, q):
    return (mpf(p) - mpf(q)) ** 2 / 2


def rate(T):
    L = log(mpf(T))
    return L + 4 * sqrt(2 * L)


def scan_upper(kl, rbar, n, l, step):
    # coarse-to-fine monotone scan: largest grid point mu >= rbar with n*KL <= l
    lo = mpf(rbar)
    for s in (mpf(10) ** -2, mpf(10) ** -4, mpf(10) ** -6, step):
        while lo + s <= 1 and n * kl(rbar, lo + s) <= l:
            lo += s
    return lo


def scan_lower(kl, rbar, n, l, step):
    hi = mpf(rbar)
    for s in (mpf(10) ** -2, mpf(10) ** -4, mpf(10) ** -6, step):
        while hi - s >= 0 and n * kl(rbar, hi - s) <= l:
            hi -= s
    return hi


def bisect(f, lo, hi, it=200):
    # f(lo) > 0 > f(hi)
    for _ in range(it):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


print("kl_bern(0.7,0.2)", kl_bern(0.7, 0.2))
print("kl_bern(0.2,0.7)", kl_bern(0.2, 0.7))
print("asym_lb bern", mpf(0.5) / kl_bern(0.2, 0.7))
print("rate(1e6)", rate(10**6), "rate(1e5)", rate(10**5))
print("bonus(2232, rate1e6)", sqrt(2 * rate(10**6) / 2232))
print("stop 2,rate1e6,0.5", ceil(8 * 2 * rate(10**6) / mpf(0.25)) + 2)
print("stop 4,rate1e5,0.5", ceil(8 * 4 * rate(10**5) / mpf(0.25)) + 4)
print("klstop 2,rate1e5,kl", ceil(4 * 2 * rate(10**5) / kl_bern(0.2, 0.7)) + 2)
print("kl_upper bern", scan_upper(kl_bern, mpf(0.5), 10, log(10), mpf(10) ** -7))
print("kl_lower bern", scan_lower(kl_bern, mpf(0.5), 10, log(10), mpf(10) ** -7))

d = kl_bern(0.2, 0.7)
mup = bisect(lambda m: kl_bern(m, 0.7) - d / 4, mpf(0.2), mpf(0.7))
print("bern mu'", mup, "4KL(mu',0.2)", 4 * kl_bern(mup, 0.2), "kl_min", min(d, 4 * kl_bern(mup, 0.2)))

L5, L6 = log(mpf(10) ** 5), log(mpf(10) ** 6)
one = lambda L, D: 2 * L / D + (8 + sqrt(20 * pi)) * sqrt(L) / D + 2 / D + D
print("eocp bound 1e5", one(L5, mpf(0.5)), "x3", 3 * one(L5, mpf(0.5)))
ug = lambda L, D: 2 * L / D + (8 + sqrt(20 * pi)) * sqrt(L) / D
print("ug bound 1e5", ug(L5, mpf(0.5)), "1e6", ug(L6, mpf(0.5)))
print("kl eocp bound", mpf(0.5) * L5 / d + 10 * mpf(0.5) * L5 ** mpf(0.75) / d, "L^.75", L5 ** mpf(0.75))
scc = (8 * L6**2 + 80 * L6 ** mpf(1.5) + 200 * L6) / mpf(0.25) + 6 * 2 * L6 + 10 * e * 2 / L6**2
print("scc_ug 1e6", scc)
L9 = log(mpf(10) ** 9)
print("scc_ug ratio at 1e9", ((8 * L9**2 + 80 * L9 ** 1.5 + 200 * L9) / 0.25 + 12 * L9 + 20 * e / L9**2) / L9**2 / 32)
print("scc_lower", L6 / 0.25, L6 ** 1.5 / 0.25)
print("lemma3a", min(9, e * 2 * log(10) + e) / exp(2))
print("lemma3c", (4 + sqrt(8 * pi) + 2))
print("lemma5", min(3, 3 * e * log(3) + e) / exp(3))
r = bisect(lambda m: kl_gauss(m, 0.7) - kl_gauss(0.2, 0.7) / 2, mpf(0.2), mpf(0.7))
kr = kl_gauss(r, 0.2)
print("lemma6 r", r, "b1", 2 * kr / mpf(0.125), "b2", 1 / (1 - exp(-kr)))
print("lemma3a l=20", min(99, 20 * e * log(100) + e) / exp(20))
print("lemma3b l=4", 4 / (3 * exp((2 + sqrt(3) * sqrt(5)) ** 2)))
print("lemma5 l=5", min(50, 5 * e * log(50) + e) / exp(5))
