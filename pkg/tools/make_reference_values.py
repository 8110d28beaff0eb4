"""Regenerate the frozen reference constants used in tests/.

Every closed-form number that the float64 implementation is tested against
is recomputed here at 50 decimal digits with mpmath and printed with 17
significant digits.  The formulas below are written from their mathematical
definitions, independently of the package code, so agreement between the two
routes is a genuine cross-check rather than a tautology.

Run:  python3 tools/make_reference_values.py
"""

import mpmath as mp

mp.mp.dps = 50


def mvlgamma(n, a):
    # log Gamma_n(a) = n(n-1)/4 log pi + sum_{i=1}^{n} log Gamma(a + (1-i)/2)
    s = mp.mpf(n) * (n - 1) / 4 * mp.log(mp.pi)
    for i in range(1, n + 1):
        s += mp.loggamma(a + mp.mpf(1 - i) / 2)
    return s


def mvdigamma(n, a):
    return mp.fsum(mp.digamma(a + mp.mpf(1 - i) / 2) for i in range(1, n + 1))


def wishart_entropy(n, d):
    # h(X) = n(n+1)/2 log(2/d) + log Gamma_n(d/2) - (d-n-1)/2 psi_n(d/2) + nd/2
    # for X = A A^T with A having i.i.d. N(0, 1/d) entries, d >= n.
    n = mp.mpf(n)
    d = mp.mpf(d)
    a = d / 2
    return (
        n * (n + 1) / 2 * mp.log(2 / d)
        + mvlgamma(int(n), a)
        - (d - n - 1) / 2 * mvdigamma(int(n), a)
        + n * d / 2
    )


def slb_gram(n, d, D):
    # R >= h(X) - n(n+1)/4 log(4 pi e D / d): the entropy of X minus the
    # maximum entropy of the error under the normalized Frobenius loss.
    nn = mp.mpf(n)
    dd = mp.mpf(d)
    return wishart_entropy(n, d) - nn * (nn + 1) / 4 * mp.log(
        4 * mp.pi * mp.e * mp.mpf(D) / dd
    )


def hbin(p):
    p = mp.mpf(p)
    if p == 0 or p == 1:
        return mp.mpf(0)
    return -p * mp.log(p) - (1 - p) * mp.log(1 - p)


def f17(x):
    return mp.nstr(x, 17, strip_zeros=False)


def main():
    print("== wishart differential entropy (nats) ==")
    for n, d in [(1, 2), (2, 5), (3, 8), (5, 12), (12, 12), (30, 30), (20, 160)]:
        print(f"  h({n},{d}) = {f17(wishart_entropy(n, d))}")

    print("== shannon lower bound, gram source ==")
    for n, d, D in [
        (5, 12, 0.01),
        (12, 12, 0.001),
        (30, 40, 1e-3),
        (30, 30, 1e-2),
        (2, 2, 0.2),
        (8, 64, 1e-4),
    ]:
        print(f"  slb({n},{d},{D}) = {f17(slb_gram(n, d, D))}")

    print("== multivariate log-gamma / digamma ==")
    for n, a in [(1, 0.5), (3, 4.0), (10, 5.25), (7, 3.5)]:
        print(f"  lgam({n},{a}) = {f17(mvlgamma(n, mp.mpf(a)))}")
        print(f"  dgam({n},{a}) = {f17(mvdigamma(n, mp.mpf(a)))}")

    print("== binary entropy (nats) ==")
    for p in ["1e-6", "0.01", "0.05", "0.11", "0.3", "0.5"]:
        print(f"  h({p}) = {f17(hbin(mp.mpf(p)))}")

    print("== impossibility thresholds d* ==")
    for n in [10, 400, 100000]:
        for p in ["0.01", "0.05", "0.3", "0.5"]:
            for c in ["0.5", "1", "2.7"]:
                g = mp.mpf(c) * n * hbin(mp.mpf(p))
                m = mp.mpf(c) * n * (hbin(mp.mpf(p)) + mp.mpf(p))
                print(
                    f"  dstar(n={n},p={p},c={c}) graph={f17(g)} completion={f17(m)}"
                )

    print("== large-d derived slack coefficient K' ==")
    # For d > n the derived K' collapses to (1 - log 2)/2 exactly; at d = n
    # the flipped digamma sandwich side adds H_n / n.
    kp = (1 - mp.log(2)) / 2
    print(f"  (1 - log2)/2 = {f17(kp)}")
    for n in [2, 12, 30]:
        Hn = mp.fsum(mp.mpf(1) / i for i in range(1, n + 1))
        print(f"  d=n={n}: K' = {f17(kp + Hn / n)}  (H_n={f17(Hn)})")

    print("== binary-source rate log2 - h(D) (nats) ==")
    for D in ["0.05", "0.1", "0.2"]:
        print(f"  R({D}) = {f17(mp.log(2) - hbin(mp.mpf(D)))}")

    print("== gaussian rd 0.5*log(1/D) (nats) ==")
    for D in ["0.05", "0.2", "0.9"]:
        print(f"  R({D}) = {f17(mp.log(1 / mp.mpf(D)) / 2)}")

    print("== spot values for individual bound terms ==")
    lead = mp.mpf(50 * 51) / 4 * mp.log(mp.mpf(10) ** 6)
    print(f"  n(n+1)/4 log(1/D) at n=50, D=1e-6 = {f17(lead)}")
    cov = 4 * mp.log(mp.sqrt(mp.mpf(8)) / mp.mpf("0.5"))
    print(f"  covering log at d=2, eps=0.5, C0=4 = {f17(cov)}  (= 10 log 2)")
    lts = mp.log(2) + mp.log(mp.mpf(3) / 2) / 2
    print(f"  log-term sum at n=2, d=4 = {f17(lts)}")


if __name__ == "__main__":
    main()
