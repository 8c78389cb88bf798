"""Straight-line reimplementation of the fitness formula, used to freeze
expected values for tests/oracle_values.rs. Independent of the Rust code."""
import math

LAT, LON, DAY, TZ, ALBEDO = 33.957409, -83.376801, 227, 0.0, 0.2
HOURS = list(range(11, 20))


def declination(n):
    return 23.45 * math.sin(math.radians(360.0 * (284 + n) / 365.0))


def equation_of_time_min(n):
    g = 2 * math.pi * (n - 1) / 365.0
    return 229.18 * (0.000075 + 0.001868 * math.cos(g) - 0.032077 * math.sin(g)
                     - 0.014615 * math.cos(2 * g) - 0.040849 * math.sin(2 * g))


def sun(h):
    d = math.radians(declination(DAY))
    la = math.radians(LAT)
    solar_time = h + (4 * (LON - 15 * TZ) + equation_of_time_min(DAY)) / 60.0
    ha = math.radians(15 * (solar_time - 12))
    el = math.asin(math.sin(la) * math.sin(d) + math.cos(la) * math.cos(d) * math.cos(ha))
    az = math.atan2(math.sin(ha), math.cos(ha) * math.sin(la) - math.tan(d) * math.cos(la))
    return math.degrees(el), (math.degrees(az) + 180) % 360


def irradiance(el):
    if el <= 0:
        return 0.0, 0.0, 0.0
    if el < 10:
        z = 90 - el
        am = 1 / (math.cos(math.radians(z)) + 0.50572 * (96.07995 - z) ** -1.6364)
    else:
        am = 1 / math.sin(math.radians(el))
    dni = 1353 * 0.7 ** (am ** 0.678)
    dhi = 0.1 * dni
    return dni, dhi, dni * math.sin(math.radians(el)) + dhi


def poa(h, tilt, az):
    el, saz = sun(h)
    dni, dhi, ghi = irradiance(el)
    if tilt < 0:
        tilt, az = -tilt, (az + 180) % 360
    b = math.radians(tilt)
    z = math.radians(90 - el)
    c = math.cos(z) * math.cos(b) + math.sin(z) * math.sin(b) * math.cos(math.radians(saz - az))
    return dni * max(c, 0) + dhi * (1 + math.cos(b)) / 2 + ghi * ALBEDO * (1 - math.cos(b)) / 2


def resolve(bits):
    out, kept = [], 0
    for b in bits:
        if b and kept < 6:
            out.append(1)
            kept += 1
        else:
            out.append(0)
    return out


def plates(bits):
    rows = [0] + [i + 1 for i in range(9) if bits[i]] + [10]
    cols = [0] + [j + 1 for j in range(5) if bits[10 + j]] + [6]
    return [(r1 - r0) * (c1 - c0) for r0, r1 in zip(rows, rows[1:]) for c0, c1 in zip(cols, cols[1:])]


def circ(a, b):
    d = abs(a - b) % 360
    return min(d, 360 - d)


def evaluate(bits, slots, calibration=1.0):
    cells = plates(resolve(bits))
    placed = slots[:len(cells)]
    gross = 0.0
    for h in HOURS:
        gross += sum(poa(h, t, a) * c / 60.0 for c, (_, t, a) in zip(cells, placed))
    gross = calibration * gross / len(HOURS)
    conflicts = sum(1 for i in range(len(placed)) for j in range(i + 1, len(placed))
                    if abs(placed[i][0] - placed[j][0]) < 20 and abs(placed[i][1] - placed[j][1]) < 90
                    and circ(placed[i][2], placed[j][2]) < 45)
    return gross, conflicts, gross - 50 * conflicts


if __name__ == "__main__":
    import random
    rng = random.Random(2024)
    bits = [rng.random() < 0.5 for _ in range(16)]
    slots = [(round(rng.uniform(32, 72), 3), round(rng.uniform(-90, 90), 3), round(rng.uniform(0, 360), 3))
             for _ in range(16)]
    print("bits", "".join("1" if b else "0" for b in bits))
    print("slots", slots)
    print("uncalibrated", repr(evaluate(bits, slots)))
    base0 = evaluate([0] * 16, [(50, 0, 0)] * 16)[0]
    cal = 666.40 / base0
    print("baseline0", repr(base0), "calibration", repr(cal))
    print("calibrated", repr(evaluate(bits, slots, cal)))
    for name, az in [("N", 0), ("E", 90), ("S", 180), ("W", 270)]:
        print(name, [round(cal * evaluate([0] * 16, [(50, t, az)] * 16)[0], 2) for t in (0, 15, 30, 45, 60)])
    print("dni30", repr(1353 * 0.7 ** (2 ** 0.678)))
