#!/usr/bin/env python3
"""Regenerate the collateral comparison fixtures under data/collateral.

The daily price files are SYNTHETIC placeholders: a two-level series
(mean +/- target deviation on alternating days) over 2020-03-25..2025-03-24,
whose population standard deviation equals the published PSD exactly.
Replace them with real daily closes to run the networked PSD check.

Redemption fee/delay values and per-jurisdiction compliance flags are
calibration data chosen to reproduce the published REI and J-Score
columns; they are not sourced measurements.
"""
import csv
import datetime as dt
import os

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "collateral")

SERIES = {"usd": (100.0, 5.93), "gold": (2000.0, 313.77), "btc": (40000.0, 23413.08)}


def write_prices():
    start, end = dt.date(2020, 3, 25), dt.date(2025, 3, 24)
    days = (end - start).days + 1
    for name, (mean, dev) in SERIES.items():
        with open(os.path.join(ROOT, f"{name}.csv"), "w", newline="") as f:
            f.write("date,close\n")
            for i in range(days):
                price = mean + dev if i % 2 == 0 else mean - dev
                f.write(f"{start + dt.timedelta(days=i)},{price:.2f}\n")


def write_costs():
    with open(os.path.join(ROOT, "redemption_costs.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["asset", "fee_usd", "delay_days"])
        w.writerow(["USD", "25", "2.994"])
        w.writerow(["Gold", "45", "6"])
        w.writerow(["BTC", "5", "0"])


def write_jurisdictions():
    btc_restricted = {3, 5, 8, 9, 12, 15, 17, 20}
    with open(os.path.join(ROOT, "jurisdictions.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["jurisdiction", "weight", "USD", "Gold", "BTC"])
        for k in range(1, 22):
            w.writerow([f"G20-{k:02}", "1", "1", "1", "0" if k in btc_restricted else "1"])


if __name__ == "__main__":
    os.makedirs(ROOT, exist_ok=True)
    write_prices()
    write_costs()
    write_jurisdictions()
