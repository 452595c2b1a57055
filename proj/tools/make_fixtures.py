#!/usr/bin/env python3
"""Writes the synthetic fixture bundles under fixtures/.

All numbers are invented but kept in plausible ranges. The generator is
deterministic: rerunning it reproduces the same bytes.

    python3 tools/make_fixtures.py [--out fixtures] [--check]

--check re-solves a few cases with scipy to confirm the fixtures keep the
shape the test-suite relies on (feasible baselines, a sign change in the
NLEB delta-utility grid, the ESCA scenario pattern).
"""

import argparse
import json
import math
import os
import random

CROP_HEADER = [
    "id", "name", "net_profit [EUR/ha]", "water_req [m3/ha]", "fert_N [kg/ha]", "fert_P2O5 [kg/ha]",
    "fert_K2O [kg/ha]", "labour_req [hr/ha]", "yield [kg/ha]", "price [EUR/kg]", "prod_cost [EUR/ha]",
    "p_export [kg/ha]", "n_export [kg/ha]", "min_area [ha]", "min_observed_area [ha]", "baseline_area [ha]",
]


def fmt(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    r = round(v, 6)
    if r == int(r):
        return str(int(r))
    return repr(r)


def write_csv(path, header, rows):
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(fmt(v) for v in row) + "\n")


def write_json(path, obj):
    with open(path, "w", newline="\n") as f:
        json.dump(obj, f, indent=2)
        f.write("\n")


# ---------------------------------------------------------------- LKW

# id, name, water m3/ha, N, P2O5, K2O kg/ha, labour hr/ha, yield kg/ha,
# price EUR/kg, cost EUR/ha, baseline ha, lowest observed ha
LKW_CROPS = [
    ("cotton", "Cotton", 5200, 140, 60, 40, 55, 3400, 0.55, 1150, 9800, 2600),
    ("maize", "Maize", 6500, 220, 90, 60, 28, 11500, 0.21, 1480, 6200, 1500),
    ("alfalfa", "Alfalfa", 8200, 30, 80, 90, 32, 14000, 0.16, 1350, 4100, 1000),
    ("sugar_beet", "Sugar beet", 5600, 160, 90, 150, 45, 62000, 0.04, 1620, 1500, 380),
    ("tomato", "Processing tomato", 5900, 180, 110, 220, 210, 78000, 0.085, 4300, 900, 200),
    ("potato", "Potato", 4700, 170, 120, 200, 150, 36000, 0.24, 5750, 1100, 260),
    ("rice", "Rice", 14500, 150, 60, 70, 40, 8200, 0.36, 1690, 1800, 450),
    ("vegetables", "Open-field vegetables", 5100, 150, 90, 130, 380, 30000, 0.35, 7800, 700, 160),
    ("peach", "Peach orchards", 6100, 120, 60, 140, 290, 24000, 0.38, 6200, 2100, 560),
    ("kiwi", "Kiwifruit", 7400, 130, 60, 160, 340, 22000, 0.62, 9100, 400, 90),
    ("melon", "Melon", 4300, 120, 80, 160, 260, 32000, 0.22, 5100, 500, 120),
    ("wheat", "Durum wheat", 0, 130, 55, 20, 9, 3100, 0.27, 520, 14500, 9500),
    ("barley", "Barley", 0, 90, 45, 20, 8, 3300, 0.2, 430, 5200, 3300),
    ("oats", "Oats", 0, 80, 40, 20, 8, 2600, 0.21, 360, 2400, 1500),
    ("olives", "Rain-fed olives", 0, 70, 30, 60, 95, 3500, 0.6, 1500, 3100, 2600),
    ("vines", "Rain-fed vines", 0, 60, 40, 90, 210, 7500, 0.45, 2600, 1300, 1000),
    ("chickpea", "Chickpea", 0, 20, 40, 20, 11, 1400, 0.65, 540, 900, 450),
    ("sunflower", "Sunflower", 0, 70, 50, 40, 8, 2200, 0.36, 520, 1600, 900),
]


def lkw_rows(infeasible=False):
    rows = []
    for (cid, name, water, n, p, k, labour, yld, price, cost, base, low) in LKW_CROPS:
        if infeasible and water > 0:
            low = 0.95 * base
        profit = round(price * yld - cost, 6)
        p_exp = round(0.02 * p + 0.3, 4)
        n_exp = round(0.08 * n + 2.0, 4) if cid != "barley" else None
        rows.append([cid, name, profit, water, n, p, k, labour, yld, price, cost, p_exp, n_exp, None, low, base])
    return rows


def write_lkw(out, name, infeasible=False):
    d = os.path.join(out, name)
    os.makedirs(d, exist_ok=True)
    rows = lkw_rows(infeasible)
    write_csv(os.path.join(d, "crops.csv"), CROP_HEADER, rows)
    area = sum(r[-1] for r in rows)
    water = sum(r[3] * r[-1] for r in rows)
    write_json(os.path.join(d, "totals.json"), {
        "currency": "EUR",
        "total_area": area,
        # renewable water resources, a little above current irrigation use
        "total_water": math.ceil(water * 1.02),
        "units": {"total_area": "ha", "total_water": "m3"},
    })
    return rows


# ---------------------------------------------------------------- NLEB

# id, name, water, N, P2O5, K2O, labour, yield kg/ha, price CAD/kg, cost CAD/ha,
# P export kg/ha, N export kg/ha
NLEB_CROP_POOL = [
    ("corn", "Grain corn", 150, 160, 70, 60, 6, 10500, 0.23, 1450, 1.30, 24.0),
    ("soybean", "Soybeans", 80, 10, 50, 70, 5, 3600, 0.55, 1000, 0.45, 9.0),
    ("wheat", "Winter wheat", 60, 110, 50, 40, 5, 6200, 0.25, 1050, 0.80, 18.0),
    ("alfalfa", "Alfalfa hay", 90, 20, 50, 130, 9, 9000, 0.2, 1040, 0.25, 5.0),
    ("tomato", "Field tomatoes", 2100, 140, 120, 250, 140, 85000, 0.11, 6800, 2.40, 30.0),
    ("potato", "Potatoes", 1500, 160, 140, 230, 75, 38000, 0.23, 6300, 2.00, 34.0),
    ("barley", "Barley", 50, 80, 40, 30, 5, 3800, 0.24, 640, 0.45, 0.0),
    ("oats", "Oats", 50, 70, 40, 30, 5, 3000, 0.26, 560, 0.40, 8.0),
    ("canola", "Canola", 60, 130, 50, 40, 5, 2600, 0.55, 990, 0.55, 16.0),
    ("sweet_corn", "Sweet corn", 900, 140, 70, 90, 40, 18000, 0.2, 2600, 1.20, 26.0),
    ("peas", "Green peas", 400, 20, 50, 60, 25, 5500, 0.45, 1850, 0.55, 7.0),
    ("beans", "Dry beans", 200, 30, 50, 60, 10, 2500, 0.95, 1600, 0.60, 12.0),
    ("cabbage", "Cabbage", 1200, 150, 90, 160, 120, 42000, 0.16, 4900, 1.60, 30.0),
    ("carrots", "Carrots", 1000, 90, 80, 170, 110, 50000, 0.14, 4800, 1.30, 18.0),
    ("onions", "Onions", 1100, 110, 90, 150, 130, 45000, 0.17, 5500, 1.50, 22.0),
    ("peppers", "Peppers", 1800, 130, 100, 200, 170, 30000, 0.45, 9600, 2.10, 28.0),
    ("cucumbers", "Cucumbers", 1700, 120, 90, 180, 160, 40000, 0.3, 8300, 1.90, 26.0),
    ("pumpkins", "Pumpkins", 800, 90, 60, 120, 60, 25000, 0.2, 3600, 1.10, 18.0),
    ("strawberries", "Strawberries", 1600, 80, 70, 140, 400, 12000, 1.9, 16500, 1.40, 16.0),
    ("apples", "Apples", 900, 60, 40, 100, 320, 30000, 0.55, 12800, 0.70, 10.0),
    ("grapes", "Grapes", 600, 50, 40, 90, 300, 9000, 1.4, 9300, 0.60, 9.0),
    ("tobacco", "Tobacco", 700, 130, 80, 200, 250, 2700, 5.2, 11000, 1.50, 28.0),
    ("ginseng", "Ginseng", 500, 60, 60, 120, 600, 2500, 25.0, 55000, 0.90, 12.0),
    ("rye", "Rye", 40, 60, 30, 25, 5, 2800, 0.22, 420, 0.35, 9.0),
    ("sorghum", "Sorghum", 100, 90, 40, 40, 5, 5000, 0.2, 720, 0.70, 15.0),
    ("mixed_grain", "Mixed grain", 50, 60, 35, 30, 5, 3200, 0.21, 470, 0.40, 10.0),
    ("pasture", "Improved pasture", 30, 40, 20, 40, 4, 6000, 0.09, 380, 0.20, 4.0),
    ("hay", "Mixed hay", 40, 40, 30, 60, 6, 6500, 0.12, 540, 0.22, 5.0),
]

NLEB_HEADER = [h.replace("EUR", "CAD") for h in CROP_HEADER if not h.startswith("min_observed")]


def nleb_crop_rows(crops):
    rows = []
    for (cid, name, water, n, p, k, labour, yld, price, cost, p_exp, n_exp) in crops:
        profit = round(price * yld - cost, 6)
        rows.append([cid, name, profit, water, n, p, k, labour, yld, price, cost, p_exp,
                     None if n_exp == 0.0 else n_exp, None, 0])
    return rows


def nleb_subwatersheds(crops, count, rng, allow_prob, weights):
    sws = []
    ids = [c[0] for c in crops]
    for s in range(count):
        allowed = [cid for cid in ids if rng.random() < allow_prob]
        for must in ids[:2]:
            if must not in allowed:
                allowed.append(must)
        areas = {}
        for cid in ids:
            if cid not in allowed:
                continue
            share = rng.lognormvariate(0, 0.6) * weights.get(cid, 1.0)
            areas[cid] = share
        scale = rng.uniform(2500, 12000) / sum(areas.values())
        areas = {k: round(v * scale, 1) for k, v in areas.items()}
        total = round(sum(areas.values()) * rng.uniform(1.0, 1.05), 1)
        sws.append((f"sw{s + 1:03d}", total, areas))
    return sws


def write_nleb(out, name, crop_ids, sw_count, seed, allow_prob, weights=None, window=(0.5, 1.5),
               elasticity=None):
    rng = random.Random(seed)
    crops = [c for c in NLEB_CROP_POOL if c[0] in crop_ids]
    crops.sort(key=lambda c: crop_ids.index(c[0]))
    d = os.path.join(out, name)
    os.makedirs(d, exist_ok=True)
    # the regional baseline lives in subwatersheds.csv
    crow = nleb_crop_rows(crops)
    write_csv(os.path.join(d, "crops.csv"), NLEB_HEADER, crow)
    sws = nleb_subwatersheds(crops, sw_count, rng, allow_prob, weights or {})
    header = ["id", "total_area [ha]"] + [c[0] for c in crops]
    rows = []
    for sid, total, areas in sws:
        rows.append([sid, total] + [areas.get(c[0]) for c in crops])
    write_csv(os.path.join(d, "subwatersheds.csv"), header, rows)
    write_json(os.path.join(d, "totals.json"), {
        "currency": "CAD",
        "production_min_fraction": window[0],
        "production_max_fraction": window[1],
    })
    if elasticity is not None:
        write_csv(os.path.join(d, "elasticity.csv"),
                  ["crop_id", "baseline_quantity [kg]", "baseline_price [CAD/kg]", "elasticity"],
                  [[c[0], None, None, elasticity] for c in crops])
    return crops, sws


# ---------------------------------------------------------------- ESCA

ESCA_WEIGHTS = {
    "A": [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.05],
    "B": [1.0, 1.0, 1.0, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    "C": [0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.0, 0.005, 0.005, 0.005, 0.005, 0.005, 0.005, 0.05],
}
WEIGHT_LABELS = [
    "sales_beef_minus", "sales_dairy_minus", "sales_poultry_minus", "cost_plus", "p_emission_plus",
    "c_emission_plus", "organic_fert_plus", "organic_fert_minus", "prod_beef_plus", "prod_beef_minus",
    "prod_dairy_plus", "prod_dairy_minus", "prod_poultry_plus", "prod_poultry_minus", "water_plus",
]


def esca_instance(chemical_required=20000.0):
    return {
        "currency": "EUR",
        "units": {"sale": "EUR/head", "cost": "EUR/head", "water": "m3/head", "budget": "EUR/yr",
                  "available_area": "ha", "water_available": "m3/yr"},
        "coefficients": {
            "beef": {"sale": 1000, "cost": 450, "area_per_head": 0.5, "p_emission": 9.0, "c_emission": 110,
                     "organic_fert": 5000, "water": 400, "yield": 500, "growth_rate": 0.5},
            "dairy": {"sale": 1500, "cost": 700, "area_per_head": 0.5, "p_emission": 12.0, "c_emission": 130,
                      "organic_fert": 9000, "water": 700, "yield": 6000, "growth_rate": 1.0},
            "poultry": {"sale": 5, "cost": 3, "area_per_head": 0.01, "p_emission": 0.02, "c_emission": 0.5,
                        "organic_fert": 0, "water": 0.3, "yield": 2.5, "growth_rate": 1.0},
        },
        "targets": {
            "typical_sale": {"beef": 250000, "dairy": 300000, "poultry": 15000},
            "budget": 150000,
            "available_area": 4000,
            "max_emission_p": 3350,
            "max_emission_c": 45000,
            "organic_fert_target": 2000000,
            "max_chemical": 30000,
            "chemical_required": chemical_required,
            "water_available": 200000,
            "production_target": {"beef": 80000, "dairy": 300000, "poultry": 7500},
        },
        "max_heads": {"beef": None, "dairy": None, "poultry": None},
        "scenarios": [{"name": n, "weights": dict(zip(WEIGHT_LABELS, w))} for n, w in ESCA_WEIGHTS.items()],
        "default_scenario": "C",
    }


def write_esca(out, name, **kw):
    d = os.path.join(out, name)
    os.makedirs(d, exist_ok=True)
    write_json(os.path.join(d, "esca.json"), esca_instance(**kw))


# ---------------------------------------------------------------- checks

def check(out):
    import numpy as np
    from scipy.optimize import linprog

    def nleb_lp(crops, sws, rp, rn):
        ids = [c[0] for c in crops]
        var = [(s, ci) for s, (_, _, areas) in enumerate(sws) for ci, cid in enumerate(ids) if cid in areas]
        prof = np.array([crops[ci][8] * crops[ci][7] - crops[ci][9] for _, ci in var])
        base = np.array([sws[s][2][ids[ci]] for s, ci in var])
        A, b = [], []
        for s, (_, total, _) in enumerate(sws):
            A.append([1.0 if vs == s else 0.0 for vs, _ in var]); b.append(total)
        for col, red in ((2, 0.0), (3, 0.0), (4, 0.0), (5, 0.0)):
            row = np.array([crops[ci][col] for _, ci in var], float)
            A.append(row); b.append(row @ base * (1 - red))
        for col, red in ((10, rp), (11, rn)):
            row = np.array([crops[ci][col] for _, ci in var], float)
            A.append(row); b.append(row @ base * (1 - red))
        for ci in range(len(ids)):
            row = np.array([crops[ci][7] if vc == ci else 0.0 for _, vc in var])
            q = row @ base
            A.append(row); b.append(3.0 * q)
            A.append(-row); b.append(-0.25 * q)
        res = linprog(-prof, A_ub=np.array(A), b_ub=np.array(b), bounds=(0, None), method="highs")
        return res, prof @ base

    crops, sws = write_nleb.cache["nleb_reduced"]
    print("nleb_reduced delta utility:")
    for rp, rn in ((0, 0), (0.2, 0.2), (0.3, 0.3), (0.4, 0.4), (0.5, 0.5), (0.5, 0), (0, 0.5)):
        res, base = nleb_lp(crops, sws, rp, rn)
        print(f"  p={rp:.2f} n={rn:.2f}: ", "infeasible" if res.status else f"{(-res.fun - base) / base:+.4f}")

    def esca_solve(inst, w):
        co, t = inst["coefficients"], inst["targets"]
        an = ["beef", "dairy", "poultry"]
        goals = []
        for k, a in enumerate(an):
            row = [0, 0, 0]; row[k] = co[a]["sale"]
            goals.append((row, t["typical_sale"][a], None, k))
        goals.append(([co[a]["cost"] for a in an], t["budget"], 3, None))
        goals.append(([co[a]["p_emission"] for a in an], t["max_emission_p"], 4, None))
        goals.append(([co[a]["c_emission"] for a in an], t["max_emission_c"], 5, None))
        goals.append(([co[a]["organic_fert"] for a in an], t["organic_fert_target"], 6, 7))
        goals.append(([co[a]["water"] for a in an], t["water_available"], 14, None))
        for k, a in enumerate(an):
            row = [0, 0, 0]; row[k] = co[a]["yield"] * co[a]["growth_rate"]
            goals.append((row, t["production_target"][a], 8 + 2 * k, 9 + 2 * k))
        g = len(goals)
        c = np.zeros(3 + 2 * g)
        Aeq = np.zeros((g, 3 + 2 * g)); beq = np.zeros(g)
        for i, (row, tgt, wp, wm) in enumerate(goals):
            Aeq[i, :3] = row; Aeq[i, 3 + 2 * i] = -1; Aeq[i, 4 + 2 * i] = 1; beq[i] = tgt
            c[3 + 2 * i] = w[wp] if wp is not None else 0
            c[4 + 2 * i] = w[wm] if wm is not None else 0
        Aub = np.zeros((1, 3 + 2 * g)); Aub[0, :3] = [co[a]["area_per_head"] for a in an]
        res = linprog(c, A_ub=Aub, b_ub=[t["available_area"]], A_eq=Aeq, b_eq=beq, bounds=(0, None), method="highs")
        names = ["sales_b", "sales_d", "sales_p", "cost", "P", "C", "of", "water", "prod_b", "prod_d", "prod_p"]
        dev = {n: (res.x[3 + 2 * i], res.x[4 + 2 * i]) for i, n in enumerate(names)}
        return res, dev

    inst = esca_instance()
    for name, w in ESCA_WEIGHTS.items():
        res, dev = esca_solve(inst, w)
        print(f"ESCA {name}: Z={res.fun:.3f} heads={np.round(res.x[:3], 3)}")
        print("   ", {k: (round(p, 2), round(m, 2)) for k, (p, m) in dev.items() if p > 1e-9 or m > 1e-9})


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "fixtures"))
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    out = os.path.normpath(args.out)
    os.makedirs(out, exist_ok=True)

    write_lkw(out, "lkw")
    write_lkw(out, "lkw_infeasible", infeasible=True)

    write_nleb.cache = {}
    reduced_ids = ["corn", "soybean", "wheat", "alfalfa", "tomato", "potato", "barley", "hay"]
    # Baseline skewed towards crops with a poor profit per kg of P exported, so
    # the delta-utility surface changes sign inside the 0-50% grid.
    reduced_weights = {"corn": 2.0, "soybean": 1.5, "wheat": 2.1, "alfalfa": 4.4, "tomato": 0.23,
                       "potato": 0.18, "barley": 1.6, "hay": 1.8}
    write_nleb.cache["nleb_reduced"] = write_nleb(out, "nleb_reduced", reduced_ids, 10, seed=7, allow_prob=0.8,
                                                  weights=reduced_weights, window=(0.25, 3.0), elasticity=4.0)
    full_ids = [c[0] for c in NLEB_CROP_POOL]
    write_nleb.cache["nleb"] = write_nleb(out, "nleb", full_ids, 274, seed=11, allow_prob=0.35)

    write_esca(out, "esca")
    write_esca(out, "esca_infeasible", chemical_required=42000.0)

    if args.check:
        check(out)


if __name__ == "__main__":
    main()
