#!/usr/bin/env python3
"""Writes the shipped datasets under data/.

ninebus: 9-bus, 13-line system with the thermal, renewable and storage
technology data of the case study; demand shares, line impedances and
profiles are synthetic.
mini3: 3-bus case with one synchronous candidate, one virtual-inertia wind
candidate and one plain wind candidate, used by the workflow-ordering checks.

Usage: make_datasets.py [OUTPUT_DIR]   (default: data/ next to this script)
"""

import csv
import math
import pathlib
import sys


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_toml(path, values):
    with open(path, "w") as f:
        for k, v in values.items():
            f.write(f"{k} = {v}\n")


def line_admittance(r, x):
    z2 = r * r + x * x
    return round(r / z2, 6), round(-x / z2, 6)


def r6(v):
    return round(v, 6)


BUS_HEADER = ["id", "g_pu", "b_pu", "r_pu", "vmin_pu", "vmax_pu", "slack"]
LINE_HEADER = ["from", "to", "circuit", "g_pu", "b_pu", "bc_pu", "x_pu", "tmax_gw", "amax_mva"]
THERMAL_HEADER = ["id", "bus", "pmin_gw", "pmax_gw", "qmin_gvar", "qmax_gvar", "h_s", "csu_meur", "cup_meur_h",
                  "cvar_meur_gwh", "cinv_meur_gw_y", "ru_gw", "rd_gw", "existing", "max_build"]
RENEWABLE_HEADER = ["id", "bus", "pmax_gw", "h_s", "com_meur_gwh", "cinv_meur_gw_y", "existing", "max_build",
                    "profile", "qmin_gvar", "qmax_gvar"]
STORAGE_HEADER = ["id", "bus", "pmax_gw", "etp_h", "eta_ch", "eta_dis", "rmin", "rmax", "h_s", "com_meur_gwh",
                  "cinv_meur_gw_y", "existing", "max_build", "initial_reserve_gwh", "hydro", "qmin_gvar",
                  "qmax_gvar"]
FACTS_HEADER = ["id", "bus", "qmin_gvar", "qmax_gvar", "cinv_meur_gvar_y", "max_build"]


def ninebus(root):
    root.mkdir(parents=True, exist_ok=True)
    n_rp, steps = 7, 24
    write_toml(root / "system.toml", {
        "base_power_mva": 100, "max_angle_diff_rad": 0.5, "reserve_up": 0.05, "reserve_down": 0.03,
        "reserve_up_cost": 0.2, "reserve_down_cost": 0.2, "ens_cost_meur_gwh": 10, "kappa": 0.33,
        "rep_periods": n_rp, "steps_per_rp": steps, "moving_window": 24, "f_base_hz": 50,
        "rocof_limit_hz_s": 0.5, "inertia_cap_s": 30, "disturbance_pu": 0.05,
    })
    buses = [f"n{i}" for i in range(1, 10)]
    write_csv(root / "buses.csv", BUS_HEADER,
              [[b, 0, 0, 0.2, 0.9, 1.1, 1 if b == "n7" else 0] for b in buses])
    edges = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 6), (5, 6), (5, 7), (6, 7), (6, 8), (7, 8), (8, 9)]
    lines = []
    for i, (a, b) in enumerate(edges):
        x = 0.02 + 0.005 * (i % 4)
        r = x / 10
        g, bb = line_admittance(r, x)
        lines.append([f"n{a}", f"n{b}", "c1", g, bb, 0.02, r6(x), 0.8, 800])
    write_csv(root / "lines.csv", LINE_HEADER, lines)

    th = []
    th.append(["nuclear", "n7", 0.772, 0.772, 0, 0, 8, 0, 0, 0.015, 0, 0.772, 0.772, 1, 0])
    th.append(["ccgt1", "n1", 0.134, 0.668, -0.2, 0.2, 4, 0.03, 0.009, 0.028, 45.5, 0.4, 0.4, 0, 1])
    for b in (3, 4, 6):
        th.append([f"ccgt{b}", f"n{b}", 0.1, 0.5, -0.267, 0.267, 4, 0.03, 0.009, 0.039, 20.1, 0.3, 0.3, 0, 1])
    for b in (2, 4, 6):
        th.append([f"ocgt{b}", f"n{b}", 0.04, 0.4, -0.18, 0.18, 2.5, 0.06, 0.003, 0.064, 9.9, 0.4, 0.4, 0, 1])
    write_csv(root / "thermal.csv", THERMAL_HEADER, th)

    rn = [
        ["wind5", "n5", 0.1, 0, 0.002, 7.3, 0, 40, "wind", 0, 0],
        ["windvi5", "n5", 0.1, 2, 0.005, 8.0, 0, 40, "wind", 0, 0],
        ["solar6", "n6", 0.1, 0, 0, 8.4, 0, 40, "solar", 0, 0],
        ["solar8", "n8", 0.1, 0, 0, 8.4, 0, 40, "solar", 0, 0],
    ]
    write_csv(root / "renewable.csv", RENEWABLE_HEADER, rn)

    st = [["hydro3", "n3", 0.6, 8, 0.85, 0.85, 0.1, 1, 0, 0, 0, 1, 0, 2.4, 1, -0.2, 0.2]]
    for b in (1, 4, 5, 6):
        st.append([f"bess{b}", f"n{b}", 0.1, 4, 0.95, 0.95, 0, 1, 0, 0.004, 3.2, 0, 20, 0, 0, 0, 0])
        st.append([f"bessvi{b}", f"n{b}", 0.1, 4, 0.95, 0.95, 0, 1, 10, 0.01, 3.4, 0, 20, 0, 0, 0, 0])
    write_csv(root / "storage.csv", STORAGE_HEADER, st)

    write_csv(root / "facts.csv", FACTS_HEADER, [[f"facts{b[1:]}", b, -0.1, 0.1, 2.0, 5] for b in buses])

    share = {"n1": 0.08, "n2": 0.12, "n3": 0.10, "n4": 0.15, "n5": 0.04, "n6": 0.30, "n7": 0.10, "n8": 0.03,
             "n9": 0.08}
    demand, profiles = [], []
    for rp in range(1, n_rp + 1):
        level = 2.2 + 0.25 * math.cos(2 * math.pi * (rp - 1) / n_rp)
        wind_level = 0.45 + 0.3 * math.sin(2 * math.pi * (rp + 1) / n_rp)
        for k in range(1, steps + 1):
            daily = 0.8 + 0.2 * math.sin(math.pi * (k - 7) / 12) + 0.1 * math.sin(math.pi * (k - 15) / 6)
            total = level * daily
            for b in buses:
                demand.append([rp, k, b, r6(total * share[b]), r6(0.25 * total * share[b])])
            sun = max(0.0, math.sin(math.pi * (k - 6) / 14)) * (0.9 - 0.05 * rp)
            wind = min(1.0, max(0.05, wind_level + 0.2 * math.cos(math.pi * k / 8 + rp)))
            profiles.append([rp, k, "solar", r6(sun)])
            profiles.append([rp, k, "wind", r6(wind)])
    write_csv(root / "demand.csv", ["rp", "k", "bus", "dp_gw", "dq_gvar"], demand)
    write_csv(root / "profiles.csv", ["rp", "k", "profile", "value"], profiles)
    write_csv(root / "inflows.csv", ["rp", "k", "storage", "inflow_gwh"],
              [[rp, k, "hydro3", 0.02] for rp in range(1, n_rp + 1) for k in range(1, steps + 1)])
    # Consecutive blocks of days per representative period.
    blocks = [52, 52, 52, 53, 52, 52, 52]
    days, day = [], 1
    for rp, n in enumerate(blocks, start=1):
        for _ in range(n):
            days.append([day, rp])
            day += 1
    write_csv(root / "assignments.csv", ["day", "rp"], days)


def mini3(root):
    root.mkdir(parents=True, exist_ok=True)
    steps = 6
    write_toml(root / "system.toml", {
        "base_power_mva": 100, "max_angle_diff_rad": 0.5, "reserve_up": 0, "reserve_down": 0,
        "reserve_up_cost": 0, "reserve_down_cost": 0, "ens_cost_meur_gwh": 10, "kappa": 0.33,
        "rep_periods": 1, "steps_per_rp": steps, "moving_window": 0, "f_base_hz": 50,
        "rocof_limit_hz_s": 0.5, "inertia_cap_s": 30, "disturbance_pu": 0.05,
    })
    write_csv(root / "buses.csv", BUS_HEADER,
              [["b1", 0, 0, 0, 0.9, 1.1, 1], ["b2", 0, 0, 0, 0.9, 1.1, 0], ["b3", 0, 0, 0, 0.9, 1.1, 0]])
    g, b = line_admittance(0.002, 0.02)
    write_csv(root / "lines.csv", LINE_HEADER,
              [["b1", "b2", "c1", g, b, 0.01, 0.02, 1.0, 1000],
               ["b2", "b3", "c1", g, b, 0.01, 0.02, 1.0, 1000],
               ["b1", "b3", "c1", g, b, 0.01, 0.02, 1.0, 1000]])
    write_csv(root / "thermal.csv", THERMAL_HEADER,
              [["ccgt", "b1", 0.1, 0.5, -0.25, 0.25, 4, 0.005, 0.001, 0.02, 10.0, 0.5, 0.5, 0, 1]])
    write_csv(root / "renewable.csv", RENEWABLE_HEADER,
              [["wind", "b3", 0.1, 0, 0.002, 7.3, 0, 40, "wind", 0, 0],
               ["windvi", "b3", 0.1, 2, 0.005, 8.0, 0, 40, "wind", 0, 0]])
    write_csv(root / "storage.csv", STORAGE_HEADER, [])
    write_csv(root / "facts.csv", FACTS_HEADER,
              [[f"facts{i}", f"b{i}", -0.05, 0.05, 1.0, 4] for i in (1, 2, 3)])
    load2 = [0.20, 0.24, 0.30, 0.28, 0.25, 0.22]
    load3 = [0.08, 0.10, 0.12, 0.12, 0.10, 0.09]
    wind = [0.55, 0.70, 0.80, 0.30, 0.15, 0.10]
    demand, profiles = [], []
    for k in range(1, steps + 1):
        demand.append([1, k, "b1", 0, 0.01])
        demand.append([1, k, "b2", load2[k - 1], 0.03])
        demand.append([1, k, "b3", load3[k - 1], 0.02])
        profiles.append([1, k, "wind", wind[k - 1]])
    write_csv(root / "demand.csv", ["rp", "k", "bus", "dp_gw", "dq_gvar"], demand)
    write_csv(root / "profiles.csv", ["rp", "k", "profile", "value"], profiles)
    write_csv(root / "assignments.csv", ["day", "rp"], [[d, 1] for d in range(1, 366)])


def main():
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "data"
    ninebus(out / "ninebus")
    mini3(out / "mini3")


if __name__ == "__main__":
    main()
