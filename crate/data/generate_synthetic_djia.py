"""Generate a synthetic daily price file shaped like the 2009 DJIA constituents.

One-factor model: each stock's daily log return is alpha + beta * market + noise.
The calendar is the 252 NYSE trading days of 2009. Output: synthetic_djia_2009.csv
"""
import datetime as dt

import numpy as np

TICKERS = [
    "AA", "AXP", "BA", "BAC", "CAT", "CSCO", "CVX", "DD", "DIS", "GE",
    "HD", "HPQ", "IBM", "INTC", "JNJ", "JPM", "KFT", "KO", "MCD", "MMM",
    "MRK", "MSFT", "PFE", "PG", "T", "TRV", "UTX", "VZ", "WMT", "XOM",
]
HOLIDAYS = {
    dt.date(2009, 1, 1), dt.date(2009, 1, 19), dt.date(2009, 2, 16),
    dt.date(2009, 4, 10), dt.date(2009, 5, 25), dt.date(2009, 7, 3),
    dt.date(2009, 9, 7), dt.date(2009, 11, 26), dt.date(2009, 12, 25),
}


def trading_days():
    day = dt.date(2009, 1, 1)
    while day.year == 2009:
        if day.weekday() < 5 and day not in HOLIDAYS:
            yield day
        day += dt.timedelta(days=1)


def main(seed=2009):
    rng = np.random.default_rng(seed)
    days = list(trading_days())
    assert len(days) == 252
    n = len(TICKERS)
    beta = rng.uniform(0.5, 1.9, n)
    idio = rng.uniform(0.008, 0.028, n)
    alpha = rng.normal(0.0002, 0.0006, n)
    market = rng.normal(0.0008, 0.016, len(days) - 1)
    noise = rng.standard_t(5, (len(days) - 1, n)) * idio * np.sqrt(3 / 5)
    log_ret = alpha + market[:, None] * beta + noise
    start = rng.uniform(8.0, 90.0, n)
    prices = start * np.exp(np.vstack([np.zeros(n), np.cumsum(log_ret, axis=0)]))
    with open("synthetic_djia_2009.csv", "w") as f:
        f.write("date," + ",".join(TICKERS) + "\n")
        for day, row in zip(days, prices):
            f.write(day.isoformat() + "," + ",".join(f"{p:.2f}" for p in row) + "\n")


if __name__ == "__main__":
    main()
