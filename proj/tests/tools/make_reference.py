"""Freezes reference values from statsmodels/scipy into tests/data/reference.json.

Inputs are drawn here with numpy so the fixtures do not depend on the C++
random helpers. Run from the repository root:
    python3 tests/tools/make_reference.py tests/data/reference.json
"""
import json
import sys
import warnings

import numpy as np
import scipy
import statsmodels
from scipy import stats
from statsmodels.stats.multitest import multipletests
from statsmodels.tsa.stattools import adfuller, grangercausalitytests

# tseries::adf.test table (constant + trend), rows = sample sizes.
DF_T = [25, 50, 100, 250, 500, 100000]
DF_P = [0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99]
DF_TABLE = -np.array([
    [4.38, 4.15, 4.04, 3.99, 3.98, 3.96],
    [3.95, 3.80, 3.73, 3.69, 3.68, 3.66],
    [3.60, 3.50, 3.45, 3.43, 3.42, 3.41],
    [3.24, 3.18, 3.15, 3.13, 3.13, 3.12],
    [1.14, 1.19, 1.22, 1.23, 1.24, 1.25],
    [0.80, 0.87, 0.90, 0.92, 0.93, 0.94],
    [0.50, 0.58, 0.62, 0.64, 0.65, 0.66],
    [0.15, 0.24, 0.28, 0.31, 0.32, 0.33],
])


def df_table_p(stat, n_diff):
    crit = [np.interp(n_diff, DF_T, row) for row in DF_TABLE]
    return float(np.interp(stat, crit, DF_P))


def adf_cases(rng):
    out = []
    specs = [("white_noise", 200, None), ("random_walk", 200, None), ("ar1", 60, None),
             ("short_ar1", 30, 1), ("white_noise_lag0", 80, 0), ("random_walk_lag4", 120, 4)]
    for name, n, lags in specs:
        e = rng.normal(size=n)
        if name.startswith("random_walk"):
            x = np.cumsum(e)
        elif name.endswith("ar1"):
            x = np.zeros(n)
            for t in range(1, n):
                x[t] = 0.6 * x[t - 1] + e[t]
        else:
            x = e
        k = lags if lags is not None else int(np.trunc((n - 1) ** (1 / 3)))
        stat = adfuller(x, maxlag=k, regression="ct", autolag=None)[0]
        out.append({"name": name, "series": x.tolist(), "lags": lags, "effective_lags": k,
                    "statistic": float(stat), "table_p": df_table_p(stat, n - 1)})
    return out


def granger_cases(rng):
    out = []
    for n, K, coupled in [(60, 2, True), (150, 2, False), (100, 3, True), (40, 1, False)]:
        x = rng.normal(size=n)
        y = np.zeros(n)
        e = rng.normal(size=n)
        for t in range(n):
            y[t] = e[t] + (0.5 * y[t - 1] if t >= 1 else 0) + (0.8 * x[t - 2] if coupled and t >= 2 else 0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = grangercausalitytests(np.column_stack([y, x]), maxlag=[K], verbose=False)
        f, p, df_denom, df_num = res[K][0]["ssr_ftest"]
        out.append({"x": x.tolist(), "y": y.tolist(), "K": K, "F": float(f), "p": float(p),
                    "df_denom": float(df_denom), "df_num": int(df_num)})
    return out


def bh_cases(rng):
    out = []
    for _ in range(10):
        m = int(rng.integers(1, 40))
        p = rng.uniform(size=m) ** 3
        out.append({"p": p.tolist(), "adjusted": multipletests(p, method="fdr_bh")[1].tolist()})
    return out


def mwu_cases(rng):
    out = []
    for na, nb, method, ties in [(3, 4, "exact", False), (8, 9, "exact", False), (20, 20, "exact", False),
                                 (25, 30, "asymptotic", False), (30, 30, "asymptotic", True),
                                 (12, 7, "asymptotic", True)]:
        if ties:
            a = rng.integers(0, 6, size=na).astype(float)
            b = rng.integers(1, 7, size=nb).astype(float)
        else:
            a = rng.normal(size=na)
            b = rng.normal(0.7, 1, size=nb)
        r = stats.mannwhitneyu(a, b, alternative="two-sided", method=method, use_continuity=True)
        out.append({"a": a.tolist(), "b": b.tolist(), "method": method, "U": float(r.statistic),
                    "p": float(r.pvalue)})
    # Means 0 and 3, n = 50 each.
    a = rng.normal(0, 1, size=50)
    b = rng.normal(3, 1, size=50)
    r = stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True)
    out.append({"a": a.tolist(), "b": b.tolist(), "method": "asymptotic", "U": float(r.statistic),
                "p": float(r.pvalue)})
    return out


def ols_cases(rng):
    out = []
    for n, p in [(30, 3), (100, 6)]:
        X = np.column_stack([np.ones(n), rng.normal(size=(n, p - 1))])
        y = X @ rng.normal(size=p) + rng.normal(size=n)
        beta, rss, *_ = np.linalg.lstsq(X, y, rcond=None)
        resid = y - X @ beta
        sigma2 = resid @ resid / (n - p)
        se = np.sqrt(np.diag(sigma2 * np.linalg.inv(X.T @ X)))
        out.append({"X": X.tolist(), "y": y.tolist(), "beta": beta.tolist(), "se": se.tolist(),
                    "rss": float(resid @ resid)})
    return out


def main(path):
    rng = np.random.default_rng(20240117)
    ref = {
        "generator": {"numpy": np.__version__, "scipy": scipy.__version__, "statsmodels": statsmodels.__version__},
        "adf": adf_cases(rng),
        "granger": granger_cases(rng),
        "bh": bh_cases(rng),
        "mann_whitney": mwu_cases(rng),
        "ols": ols_cases(rng),
    }
    with open(path, "w") as f:
        json.dump(ref, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "reference.json")
