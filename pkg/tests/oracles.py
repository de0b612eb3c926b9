"""Independent oracles the test suite checks the library against.

Everything here is deliberately written via a different route than the
library: layered stacks are solved by recursive impedance transformation
(not ABCD products), power accounting goes through 1 - |Gamma|^2 (valid for
the lossless fixtures), and tiny on/off search problems are enumerated
outright.  Keep this module free of mediamatch imports.

Running it as a script regenerates the committed golden heatmap CSVs:

    python3 tests/oracles.py --write-goldens
"""

import numpy as np

Z0 = 376.730313668
C0 = 299792458.0
EPS0 = 8.8541878128e-12

MEDIA = {
    "air": (1.0, 0.0),
    "water": (81.0, 0.0),
    "skin": (43.75, 0.0),
    "fat": (5.46, 0.0),
    "muscle": (55.03, 0.0),
}


def wave_impedance(eps_r, sigma, f):
    eps_c = eps_r - 1j * sigma / (2 * np.pi * f * EPS0)
    return Z0 * np.sqrt(1.0 / eps_c)


def wavenumber(eps_r, sigma, f):
    eps_c = eps_r - 1j * sigma / (2 * np.pi * f * EPS0)
    return (2 * np.pi * f / C0) * np.sqrt(eps_c)


def input_impedance(layers, load, f):
    """Transform the load impedance back through the layers, last first.

    layers: iterable of (eps_r, sigma, thickness_m); load: (eps_r, sigma).
    """
    z = wave_impedance(*load, f)
    for eps_r, sigma, th in reversed(list(layers)):
        zl = wave_impedance(eps_r, sigma, f)
        t = np.tan(wavenumber(eps_r, sigma, f) * th)
        z = zl * (z + 1j * zl * t) / (zl + 1j * z * t)
    return z


def through_power_lossless(layers, src, load, susceptance, f):
    """1 - |Gamma|^2 with a shunt jB at the source-side face.

    Valid only when every layer, both half-spaces and the shunt are lossless,
    which is exactly the golden-heatmap regime.
    """
    y_in = 1.0 / input_impedance(layers, load, f) + 1j * susceptance
    y_src = 1.0 / wave_impedance(*src, f)
    gamma = (y_src - y_in) / (y_src + y_in)
    return 1.0 - abs(gamma) ** 2


def optimal_susceptance(layers, load, f):
    """The shunt susceptance cancelling the input susceptance exactly."""
    return -float((1.0 / input_impedance(layers, load, f)).imag)


def best_subset_gain(h_env, h, s_on, s_off, s_bare):
    """Exhaustive best on/off assignment of a small channel, gain in dB."""
    n = len(h)
    best = -np.inf
    for code in range(2 ** n):
        s = np.array([s_on if (code >> i) & 1 else s_off for i in range(n)])
        best = max(best, abs(h_env + np.sum(s * h)))
    base = abs(h_env + s_bare * np.sum(h))
    return 20.0 * np.log10(best / base)


# ---------------------------------------------------------------------------
# golden heatmaps: through power (dB) for gap/fat vs susceptance grids

GOLDEN_SPECS = {
    "water_gap_susceptance.csv": {
        "axis1": np.arange(2.0, 12.0 + 1e-9, 1.0),          # gap, mm
        "axis2": np.arange(0.0, 0.12 + 1e-9, 0.002),        # susceptance, S
        "stack": lambda gap_mm: ([("air", gap_mm * 1e-3)], "water"),
    },
    "tissue_gap_susceptance.csv": {
        "axis1": np.arange(2.0, 12.0 + 1e-9, 1.0),
        "axis2": np.arange(0.0, 0.12 + 1e-9, 0.002),
        "stack": lambda gap_mm: ([("air", gap_mm * 1e-3), ("skin", 2.5e-3),
                                  ("fat", 15e-3)], "muscle"),
    },
    "tissue_fat_susceptance.csv": {
        "axis1": np.arange(5.0, 50.0 + 1e-9, 5.0),           # fat, mm
        "axis2": np.arange(0.0, 0.12 + 1e-9, 0.002),
        "stack": lambda fat_mm: ([("air", 6e-3), ("skin", 2.5e-3),
                                  ("fat", fat_mm * 1e-3)], "muscle"),
    },
}

FREQUENCY = 2.4e9
DB_FLOOR = -200.0


def golden_rows(spec):
    rows = []
    for a1 in spec["axis1"]:
        named_layers, load_name = spec["stack"](a1)
        layers = [MEDIA[n] + (th,) for n, th in named_layers]
        load = MEDIA[load_name]
        for a2 in spec["axis2"]:
            p = through_power_lossless(layers, MEDIA["air"], load, a2, FREQUENCY)
            db = 10.0 * np.log10(p) if p > 0 else DB_FLOOR
            rows.append((float(a1), float(a2), max(float(db), DB_FLOOR)))
    return rows


def write_goldens(directory):
    from pathlib import Path
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, spec in GOLDEN_SPECS.items():
        lines = ["axis1,axis2,through_power_db"]
        for a1, a2, db in golden_rows(spec):
            lines.append(f"{a1:.10g},{a2:.10g},{db:.10g}")
        (directory / name).write_text("\n".join(lines) + "\n")
        print(f"wrote {directory / name}")


if __name__ == "__main__":
    import argparse
    from pathlib import Path

    ap = argparse.ArgumentParser()
    ap.add_argument("--write-goldens", action="store_true")
    ap.add_argument("--out", default=str(Path(__file__).parent / "golden"))
    opts = ap.parse_args()
    if opts.write_goldens:
        write_goldens(opts.out)
