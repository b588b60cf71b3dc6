#!/usr/bin/env python3
"""Regenerate the fitted calibration-2025 fixtures.

The assessment metrics are fitted so that the default weight scheme
(E/I/L levels scored 1/2/3, mean combine, scale 1) reproduces the
published per-category upstream subtotals; every object in a category
gets the same metric. Holder snapshots are synthetic address lists whose
per-category sums reproduce the published token-share percentages.
"""
import csv
import hashlib
import os

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "calibration-2025")

# symbol: (price_fluctuation, smart_contract_issue, peripheral_factor, reported_total)
UPSTREAM = {
    "USDT": (2.1583, 3.7000, 5.7101, 12.7117),
    "USDC": (2.1583, 3.7000, 5.6553, 12.6570),
    "DAI": (1.9833, 3.4000, 5.4750, 11.7492),
    "USDS": (0.0001, 0.0000, 2.5000, 3.0940),
    "FDUSD": (2.0417, 3.5000, 5.4803, 12.8872),
    "USDe": (1.5167, 2.6000, 4.3366, 9.7278),
    "PYUSD": (4.1583, 3.7000, 5.6553, 14.8439),
    "USDD": (2.1000, 3.6000, 5.6500, 13.2500),
    "FRAX": (1.4583, 2.5000, 4.6875, 9.3755),
    "TUSD": (2.2167, 3.8000, 3.3250, 11.2278),
    "USDB": (2.3347, 4.0000, 6.0000, 14.1825),
}

# symbol: (exchange, asset management, defi protocol, blockchain infrastructure, whale/retail) in percent
DOWNSTREAM = {
    "USDT": (53.2682, 4.4057, 0.6603, 6.6690, 13.7521),
    "USDC": (14.6538, 5.5597, 3.5957, 3.9556, 47.6325),
    "DAI": (2.0564, 3.3415, 25.0256, 6.3893, 47.7420),
    "USDS": (0.0417, 0.4356, 70.8696, 0.0000, 28.6523),
    "FDUSD": (96.7493, 0.0558, 0.0207, 0.0169, 3.1495),
    "USDe": (8.4785, 0.5660, 82.1671, 0.0634, 8.7129),
    "PYUSD": (17.6987, 9.9289, 1.3587, 0.1112, 70.7349),
    "USDD": (1.2696, 0.0054, 98.0634, 0.1439, 0.5097),
    "FRAX": (0.0165, 0.2029, 53.1922, 14.8037, 31.7717),
    "TUSD": (3.9264, 0.1905, 0.7820, 0.2251, 94.2145),
    "USDB": (0.0000, 0.0000, 12.0578, 0.0394, 82.5321),
}

# circulating supply in millions of tokens (market cap at a 1 USD peg)
SUPPLY_M = {
    "USDT": 152797, "USDC": 61523, "DAI": 4539, "USDS": 7007, "FDUSD": 1628,
    "USDe": 5216, "PYUSD": 904, "USDD": 376, "FRAX": 68, "TUSD": 494, "USDB": 244,
}

CATEGORIES = ["Exchange", "AssetManagement", "DefiProtocol", "BlockchainInfrastructure", "WhaleRetail"]

OBJECTS = [
    # (name, category index, weight under the default scheme)
    ("market_volatility", 0, 6 / 3),
    ("price_manipulation", 0, 7 / 3),
    ("code_vulnerability", 1, 6 / 3),
    ("flash_loan", 1, 6 / 3),
    ("governance_attack", 1, 6 / 3),
    ("rug_pull", 2, 7 / 3),
    ("access_control", 2, 7 / 3),
    ("impacted_fund", 2, 4 / 3),
]

AS_OF = "2025-05-31"


def write_assessments():
    path = os.path.join(ROOT, "assessments.csv")
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["symbol", "as_of", "object", "metric", "evidence"])
        for sym, cats in UPSTREAM.items():
            for name, cat, _ in OBJECTS:
                wsum = sum(wt for _, c, wt in OBJECTS if c == cat)
                m = cats[cat] / wsum
                assert 0.0 <= m <= 1.0 + 1e-12, (sym, name, m)
                w.writerow([sym, AS_OF, name, f"{min(m, 1.0):.12f}", "fitted to published category subtotal"])
    with open(os.path.join(ROOT, "reported_totals.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["symbol", "reported_total"])
        for sym, cats in UPSTREAM.items():
            w.writerow([sym, f"{cats[3]:.4f}"])


def split(amount, parts):
    # integer split, largest first, exact sum
    weights = [2 ** (parts - i) for i in range(parts)]
    total = sum(weights)
    out = [amount * wt // total for wt in weights]
    out[0] += amount - sum(out)
    return [x for x in out if x > 0]


def address(sym, cat, i):
    return "0x" + hashlib.sha256(f"{sym}/{cat}/{i}".encode()).hexdigest()[:40]


def write_snapshots():
    os.makedirs(os.path.join(ROOT, "snapshots"), exist_ok=True)
    for sym, pcts in DOWNSTREAM.items():
        supply = SUPPLY_M[sym] * 1_000_000
        rows = []
        for cat, pct in zip(CATEGORIES, pcts):
            units = round(pct * 10_000)  # share in millionths
            amount = units * (supply // 1_000_000)
            if amount == 0:
                continue
            parts = 1 + int(hashlib.sha256(f"{sym}{cat}".encode()).hexdigest(), 16) % 12
            for i, bal in enumerate(split(amount, parts)):
                rows.append((address(sym, cat, i), bal, cat))
        rows.sort(key=lambda r: (-r[1], r[0]))
        path = os.path.join(ROOT, "snapshots", f"{sym}.csv")
        with open(path, "w", newline="") as f:
            f.write(f"#symbol={sym}\n#total_supply={supply}\n#taken_at={AS_OF}\n#top_n=1000\n")
            f.write("#label_source=synthetic fixture\n")
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["address", "balance", "category"])
            for r in rows:
                w.writerow(r)


if __name__ == "__main__":
    write_assessments()
    write_snapshots()
