"""High-precision reference values frozen into the Rust test suites.

Everything here is computed with mpmath at 50 significant digits and is
independent of the Rust implementation: the chi quantile is found by plain
bisection on mpmath's regularized gamma, and the pairwise confusion
probability uses the noncentral chi-square series rather than the
cap-fraction integral.

Run: python3 scripts/oracles.py
"""

import mpmath as mp

mp.mp.dps = 50


def chi_cdf(n, x):
    return mp.gammainc(mp.mpf(n) / 2, 0, mp.mpf(x) ** 2 / 2, regularized=True)


def chi_inv(n, p):
    lo, hi = mp.mpf(0), mp.mpf(10) + 10 * mp.sqrt(n)
    for _ in range(400):
        mid = (lo + hi) / 2
        if chi_cdf(n, mid) < p:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def p_pair_ncx2(n, sigma, r, d):
    """P(||w - delta|| <= r), w ~ N(0, sigma^2 I_n), ||delta|| = d."""
    lam = (mp.mpf(d) / sigma) ** 2
    x = (mp.mpf(r) / sigma) ** 2
    half = lam / 2
    total = mp.mpf(0)
    j = 0
    while True:
        w = mp.exp(-half + j * mp.log(half) - mp.loggamma(j + 1)) if half > 0 else (1 if j == 0 else 0)
        term = w * mp.gammainc(mp.mpf(n) / 2 + j, 0, x / 2, regularized=True)
        total += term
        if j > half and term < total * mp.mpf(10) ** -40:
            break
        j += 1
    return total


def main():
    print("# chi quantiles")
    for n, p in [(32, "0.95"), (2, "0.95"), (8, "0.95"), (128, "0.99"), (16, "0.95")]:
        print(f"chi_inv({n}, {p}) = {mp.nstr(chi_inv(n, mp.mpf(p)), 25)}")

    print("# reference setup n=32 k=16 eps=0.05 sigma2=0.5 E=16")
    r = mp.sqrt(mp.mpf("0.5")) * chi_inv(32, mp.mpf("0.95"))
    ratio = 4 * r**2 / 16
    print(f"R = {mp.nstr(r, 25)}  4R^2/E = {mp.nstr(ratio, 25)}  ceil = {int(mp.ceil(ratio))}")

    print("# chi cdf")
    for n, x in [(3, 1), (5, "2.5"), (64, 8), (1, "0.3")]:
        print(f"chi_cdf({n}, {x}) = {mp.nstr(chi_cdf(n, mp.mpf(x)), 25)}")

    print("# regularized lower gamma")
    for s, x in [("0.5", "0.2"), ("4.5", "3"), ("30", "45"), ("100", "80")]:
        v = mp.gammainc(mp.mpf(s), 0, mp.mpf(x), regularized=True)
        print(f"P({s}, {x}) = {mp.nstr(v, 25)}")

    print("# regularized incomplete beta")
    for a, b, x in [("2.5", "0.5", "0.3"), ("31.5", "0.5", "0.9"), ("3", "7", "0.25")]:
        v = mp.betainc(mp.mpf(a), mp.mpf(b), 0, mp.mpf(x), regularized=True)
        print(f"I({a}, {b}, {x}) = {mp.nstr(v, 25)}")

    print("# log binomial (60, 30)")
    from math import comb
    print(f"C(60,30) = {comb(60, 30)}  ln = {mp.nstr(mp.log(comb(60, 30)), 25)}")

    print("# pairwise confusion (noncentral chi-square route)")
    pts = [
        (2, 1, None, 2.0),
        (2, 1, None, 2.2),
        (8, 1, None, 2.0),
        (8, 1, "2", "4.5"),
        (16, 1, None, 2.0),
        (4, "0.7071067811865475244", "3", "7"),
        (32, "0.7071067811865475244", None, None),
    ]
    for n, sigma, r, d in pts:
        sigma = mp.mpf(sigma)
        if r is None:
            rr = sigma * chi_inv(n, mp.mpf("0.95"))
        else:
            rr = mp.mpf(r)
        if d is None:
            dd = mp.sqrt(16 * 6)
        elif isinstance(d, float):
            dd = d * rr
        else:
            dd = mp.mpf(d)
        v = p_pair_ncx2(n, sigma, rr, dd)
        print(f"p_pair(n={n}, sigma={mp.nstr(sigma, 20)}, R={mp.nstr(rr, 20)}, D={mp.nstr(dd, 20)}) = {mp.nstr(v, 20)}  ln = {mp.nstr(mp.log(v), 20)}")

    print("# deep tail point: n=128, sigma^2=0.5, eps=0.05, D=sqrt(16*80)")
    sigma = mp.sqrt(mp.mpf("0.5"))
    rr = sigma * chi_inv(128, mp.mpf("0.95"))
    dd = mp.sqrt(16 * 80)
    v = p_pair_ncx2(128, sigma, rr, dd)
    print(f"R = {mp.nstr(rr, 20)} ln p_pair = {mp.nstr(mp.log(v), 20)}")


if __name__ == "__main__":
    main()
