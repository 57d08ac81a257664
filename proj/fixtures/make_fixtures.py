#!/usr/bin/env python3
"""Builds the bundled 39-bus fixture files.

The network data is the New England 10-machine test system (bus/branch/load
table as distributed with MATPOWER's case39). A flat-start Newton-Raphson
power flow is solved here, once, with all transformer taps at 1.0 and loads
scaled to a 6097.1 MW total; generator internal EMFs are then computed behind
x'd. The solved operating point is frozen into ieee39_base.json so the C++
artifact never needs a power-flow solver.

Machine MVA ratings are assumed (they are not part of case39); inertia
constants are converted from the usual 100 MVA system-base values to machine
base with those ratings.
"""
import json
import math
import numpy as np

# bus: (id, Pd, Qd)
LOADS = {
    1: (97.6, 44.2), 3: (322.0, 2.4), 4: (500.0, 184.0), 7: (233.8, 84.0),
    8: (522.0, 176.6), 9: (6.5, -66.6), 12: (8.53, 88.0), 15: (320.0, 153.0),
    16: (329.0, 32.3), 18: (158.0, 30.0), 20: (680.0, 103.0), 21: (274.0, 115.0),
    23: (247.5, 84.6), 24: (308.6, -92.2), 25: (224.0, 47.2), 26: (139.0, 17.0),
    27: (281.0, 75.5), 28: (206.0, 27.6), 29: (283.5, 26.9), 31: (9.2, 4.6),
    39: (1104.0, 250.0),
}

# (from, to, r, x, b_charging)
BRANCHES = [
    (1, 2, 0.0035, 0.0411, 0.6987), (1, 39, 0.0010, 0.0250, 0.7500),
    (2, 3, 0.0013, 0.0151, 0.2572), (2, 25, 0.0070, 0.0086, 0.1460),
    (2, 30, 0.0000, 0.0181, 0.0000), (3, 4, 0.0013, 0.0213, 0.2214),
    (3, 18, 0.0011, 0.0133, 0.2138), (4, 5, 0.0008, 0.0128, 0.1342),
    (4, 14, 0.0008, 0.0129, 0.1382), (5, 6, 0.0002, 0.0026, 0.0434),
    (5, 8, 0.0008, 0.0112, 0.1476), (6, 7, 0.0006, 0.0092, 0.1130),
    (6, 11, 0.0007, 0.0082, 0.1389), (6, 31, 0.0000, 0.0250, 0.0000),
    (7, 8, 0.0004, 0.0046, 0.0780), (8, 9, 0.0023, 0.0363, 0.3804),
    (9, 39, 0.0010, 0.0250, 1.2000), (10, 11, 0.0004, 0.0043, 0.0729),
    (10, 13, 0.0004, 0.0043, 0.0729), (10, 32, 0.0000, 0.0200, 0.0000),
    (12, 11, 0.0016, 0.0435, 0.0000), (12, 13, 0.0016, 0.0435, 0.0000),
    (13, 14, 0.0009, 0.0101, 0.1723), (14, 15, 0.0018, 0.0217, 0.3660),
    (15, 16, 0.0009, 0.0094, 0.1710), (16, 17, 0.0007, 0.0089, 0.1342),
    (16, 19, 0.0016, 0.0195, 0.3040), (16, 21, 0.0008, 0.0135, 0.2548),
    (16, 24, 0.0003, 0.0059, 0.0680), (17, 18, 0.0007, 0.0082, 0.1319),
    (17, 27, 0.0013, 0.0173, 0.3216), (19, 20, 0.0007, 0.0138, 0.0000),
    (19, 33, 0.0007, 0.0142, 0.0000), (20, 34, 0.0009, 0.0180, 0.0000),
    (21, 22, 0.0008, 0.0140, 0.2565), (22, 23, 0.0006, 0.0096, 0.1846),
    (22, 35, 0.0000, 0.0143, 0.0000), (23, 24, 0.0022, 0.0350, 0.3610),
    (23, 36, 0.0005, 0.0272, 0.0000), (25, 26, 0.0032, 0.0323, 0.5310),
    (25, 37, 0.0006, 0.0232, 0.0000), (26, 27, 0.0014, 0.0147, 0.2396),
    (26, 28, 0.0043, 0.0474, 0.7802), (26, 29, 0.0057, 0.0625, 1.0290),
    (28, 29, 0.0014, 0.0151, 0.2490), (29, 38, 0.0008, 0.0156, 0.0000),
]

# (bus, Pg MW, Vset, H_sys 100MVA base, x'd 100MVA base, rating MVA)
GENS = [
    (30, 250.0, 1.0499, 42.0, 0.0310, 1000.0),
    (31, 0.0, 0.9820, 30.3, 0.0697, 700.0),  # slack, Pg filled by PF
    (32, 650.0, 0.9841, 35.8, 0.0531, 800.0),
    (33, 632.0, 0.9972, 28.6, 0.0436, 800.0),
    (34, 508.0, 1.0123, 26.0, 0.1320, 600.0),
    (35, 650.0, 1.0494, 34.8, 0.0500, 800.0),
    (36, 560.0, 1.0636, 26.4, 0.0490, 700.0),
    (37, 540.0, 1.0275, 24.3, 0.0570, 700.0),
    (38, 830.0, 1.0265, 34.5, 0.0570, 1000.0),
    (39, 1000.0, 1.0300, 500.0, 0.0060, 10000.0),
]

N = 39
SLACK = 31
BASE_MVA = 100.0
TARGET_LOAD = 6097.1


def build_ybus():
    Y = np.zeros((N, N), dtype=complex)
    for f, t, r, x, b in BRANCHES:
        i, j = f - 1, t - 1
        y = 1.0 / complex(r, x)
        Y[i, i] += y + 1j * b / 2
        Y[j, j] += y + 1j * b / 2
        Y[i, j] -= y
        Y[j, i] -= y
    return Y


def solve_pf():
    scale = TARGET_LOAD / sum(p for p, _ in LOADS.values())
    Y = build_ybus()
    Pd = np.zeros(N)
    Qd = np.zeros(N)
    for b, (p, q) in LOADS.items():
        Pd[b - 1] = p * scale
        Qd[b - 1] = q * scale
    Pg = np.zeros(N)
    Vset = np.ones(N)
    pv = []
    for bus, pg, vs, *_ in GENS:
        Pg[bus - 1] = pg
        Vset[bus - 1] = vs
        if bus != SLACK:
            pv.append(bus - 1)
    sl = SLACK - 1
    pq = [i for i in range(N) if i not in pv and i != sl]

    V = Vset.copy()
    th = np.zeros(N)
    Psch = (Pg - Pd) / BASE_MVA
    Qsch = -Qd / BASE_MVA

    for it in range(60):
        Vc = V * np.exp(1j * th)
        S = Vc * np.conj(Y @ Vc)
        dP = Psch - S.real
        dQ = Qsch - S.imag
        mis = np.concatenate([dP[pv + pq], dQ[pq]])
        if np.max(np.abs(mis)) < 1e-10:
            break
        # numerical Jacobian, fine at this size
        nang = pv + pq
        n1, n2 = len(nang), len(pq)
        J = np.zeros((n1 + n2, n1 + n2))
        eps = 1e-6
        for c, k in enumerate(nang):
            th2 = th.copy()
            th2[k] += eps
            Vc2 = V * np.exp(1j * th2)
            S2 = Vc2 * np.conj(Y @ Vc2)
            J[:n1, c] = (S2.real - S.real)[nang] / eps
            J[n1:, c] = (S2.imag - S.imag)[pq] / eps
        for c, k in enumerate(pq):
            V2 = V.copy()
            V2[k] += eps
            Vc2 = V2 * np.exp(1j * th)
            S2 = Vc2 * np.conj(Y @ Vc2)
            J[:n1, n1 + c] = (S2.real - S.real)[nang] / eps
            J[n1:, n1 + c] = (S2.imag - S.imag)[pq] / eps
        dx = np.linalg.solve(J, mis)
        th[nang] += dx[:n1]
        V[pq] += dx[n1:]
    else:
        raise RuntimeError("power flow did not converge")

    Vc = V * np.exp(1j * th)
    S = Vc * np.conj(Y @ Vc)
    print(f"PF converged in {it} iters, max mismatch {np.max(np.abs(mis)):.2e}")
    print(f"slack P = {S.real[sl] * BASE_MVA + Pd[sl]:.1f} MW")
    return Vc, S, scale


def main():
    Vc, S, scale = solve_pf()

    gen_buses = {g[0] for g in GENS}
    buses = []
    for b in range(1, N + 1):
        i = b - 1
        kind = "generator" if b in gen_buses else "load"
        if kind == "generator":
            gen = next(g for g in GENS if g[0] == b)
            xd = gen[4]
            Sg = S[i] + complex(*(np.array(LOADS.get(b, (0, 0))) * scale)) / BASE_MVA
            I = np.conj(Sg / Vc[i])
            E = Vc[i] + 1j * xd * I
            vm, va = abs(E), math.atan2(E.imag, E.real)
        else:
            vm, va = abs(Vc[i]), math.atan2(Vc[i].imag, Vc[i].real)
        load = LOADS.get(b, (0.0, 0.0))[0] * scale
        buses.append({
            "id": b, "kind": kind,
            "v_mag_pu": round(vm, 6), "v_ang_rad": round(va, 6),
            "load_mw": round(load, 4),
        })

    branches = []
    for f, t, r, x, b in BRANCHES:
        bt = x / (r * r + x * x)  # susceptance magnitude, conductance dropped
        branches.append({"from": f, "to": t, "b_pu": round(bt, 6)})

    generators = []
    for bus, _, _, h_sys, _, rating in GENS:
        h_machine = h_sys * BASE_MVA / rating
        generators.append({
            "bus": bus, "h_s": round(h_machine, 4),
            "rating_mva": rating, "tech": "synchronous",
        })

    case = {
        "schema_version": 1,
        "nominal_freq_hz": 60.0,
        "buses": buses,
        "branches": branches,
        "generators": generators,
    }
    with open("ieee39_base.json", "w") as f:
        json.dump(case, f, indent=1)
        f.write("\n")

    scenarios = {
        "scenario2.json": {
            "schema_version": 1,
            "replacements": [
                {"bus": 30, "h_s": 5.6, "tech": "dfig_wtg"},
                {"bus": 33, "h_s": 5.6, "tech": "dfig_wtg"},
            ],
            "additions": [],
            "load_redistribution": "none",
        },
        "scenario3.json": {
            "schema_version": 1,
            "replacements": [
                {"bus": 30, "h_s": 5.6, "tech": "dfig_wtg"},
                {"bus": 33, "h_s": 5.6, "tech": "dfig_wtg"},
            ],
            "additions": [{"bus": 28, "rating_mw": 255.0, "h_s": 5.6}],
            "load_redistribution": "uniform",
        },
        "scenario4.json": {
            "schema_version": 1,
            "replacements": [
                {"bus": 30, "h_s": 5.6, "tech": "dfig_wtg"},
                {"bus": 33, "h_s": 5.6, "tech": "dfig_wtg"},
            ],
            "additions": [{"bus": 19, "rating_mw": 255.0, "h_s": 5.6}],
            "load_redistribution": "uniform",
        },
    }
    for name, doc in scenarios.items():
        with open(name, "w") as f:
            json.dump(doc, f, indent=1)
            f.write("\n")
    total = sum(b["load_mw"] for b in buses)
    print(f"total load {total:.1f} MW, {len(branches)} branches")


if __name__ == "__main__":
    main()
