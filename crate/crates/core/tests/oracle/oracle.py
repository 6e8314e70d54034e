"""Independent reference values for the Rust test suites.

Uses mpmath / numpy / scipy only; nothing here calls into the Rust code.
Run: python3 oracle.py
"""
import numpy as np
from mpmath import mp, mpf, log, sqrt, exp, binomial
from scipy.special import gammaln, logsumexp

mp.dps = 40


def log_binom_pmf(n, p):
    k = np.arange(n + 1)
    return (gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
            + k * np.log(p) + (n - k) * np.log1p(-p))


def iid_log_eta(n, p0, p1):
    a = log_binom_pmf(n, p0)
    b = log_binom_pmf(n, p1)
    return logsumexp(np.minimum(a, b))


def sym_log_eta(n):
    # 2n coordinates: n of (0.55 vs 0.45), n of (0.45 vs 0.55)
    a = log_binom_pmf(n, 0.55)
    b = log_binom_pmf(n, 0.45)
    # phi0(x, y) = B(n,.55)(x) B(n,.45)(y); phi1 = B(n,.45)(x) B(n,.55)(y)
    acc = []
    for x in range(n + 1):
        l0 = a[x] + b
        l1 = b[x] + a
        acc.append(logsumexp(np.minimum(l0, l1)))
    return logsumexp(np.array(acc))


def main():
    print("logit(0.55) =", mp.nstr(log(mpf(11) / 9), 20))
    d = -log(2 * sqrt(mpf("0.55") * mpf("0.45")))
    print("D_half(0.55,0.45) =", mp.nstr(d, 20))
    d37 = -log(2 * sqrt(mpf("0.21")))
    print("D_half(0.3,0.7) =", mp.nstr(d37, 20))
    c1 = 2 * log(mpf(11) / 9)
    print("C1(0.55,0.45) =", mp.nstr(c1, 20))
    sig = c1 / 2
    print("sigma_bar iid (0.55,0.45) at 1/2 =", mp.nstr(sig, 20))

    # eta for n=10 binomial identity, 0.3 vs 0.7
    eta = sum(binomial(10, y) * min(mpf("0.3") ** y * mpf("0.7") ** (10 - y),
                                    mpf("0.7") ** y * mpf("0.3") ** (10 - y)) for y in range(11))
    print("eta binom n=10 (0.3,0.7) =", mp.nstr(eta, 20))

    print("\n# sandwich ratios r_n, iid (0.55 vs 0.45)")
    for n in [100, 200, 400, 800, 1600, 3200]:
        le = iid_log_eta(n, 0.55, 0.45)
        scale = np.sqrt(n) * float(sig) * 0.25
        r = np.exp(le + n * float(d)) * scale
        print(n, "log_eta=%.15g" % le, "r_n=%.10f" % r)

    print("\n# experiment 1: a_n = log eta - 2n log(2 sqrt(.55*.45))")
    for n in [1000, 3000, 6000]:
        le = sym_log_eta(n)
        an = le + 2 * n * float(d)
        print(n, "a_n=%.12f" % an, "a_n - 0.5 ln n = %.12f" % (an - 0.5 * np.log(n)))

    print("\n# experiment 2: c_n = log eta - (n/2) log(0.21) - 0.5 ln n")
    cs = []
    for n in range(5000, 10001):
        le = iid_log_eta(n, 0.3, 0.7)
        cs.append(le - 0.5 * n * np.log(0.21) - 0.5 * np.log(n))
    cs = np.array(cs)
    print("range =", cs.max() - cs.min(), "min", cs.min(), "max", cs.max())
    interior = (cs[1:-1] > cs[:-2]) & (cs[1:-1] > cs[2:])
    print("local maxima:", int(interior.sum()))
    for n in [5000, 5001, 7777, 10000]:
        print(n, "c_n=%.12f" % cs[n - 5000])


if __name__ == "__main__":
    main()
