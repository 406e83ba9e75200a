#!/usr/bin/env python3
"""Writes the bundled reflection-dip spectra used by the fit configs.

dip_synthetic.csv: R(nu) = B (1 - (1 - R0) (k/2)^2 / ((nu - nu0)^2 + (k/2)^2)) on an
absolute GHz axis, contrast 0.954 and loaded Q 8.4e4 at 737 nm, no noise unless
--noise is given. flat_spectrum.csv: same axis, constant reflection.
"""
import argparse
import pathlib

import numpy as np

C_NM_GHZ = 299792458.0  # nm * GHz


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--contrast", type=float, default=0.954)
    ap.add_argument("--q", type=float, default=8.4e4)
    ap.add_argument("--wavelength-nm", type=float, default=737.0)
    ap.add_argument("--points", type=int, default=401)
    ap.add_argument("--noise", type=float, default=0.0, help="relative Gaussian noise")
    ap.add_argument("--seed", type=int, default=737)
    args = ap.parse_args()

    nu0 = C_NM_GHZ / args.wavelength_nm
    kappa = nu0 / args.q
    r0 = 1.0 - args.contrast
    nu = nu0 + np.linspace(-6.0, 6.0, args.points) * kappa
    h = 0.5 * kappa
    r = 1.0 - (1.0 - r0) * h * h / ((nu - nu0) ** 2 + h * h)
    if args.noise > 0:
        r = r * (1.0 + args.noise * np.random.default_rng(args.seed).standard_normal(r.size))
        r = np.clip(r, 0.0, None)

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def write(name, values):
        lines = ["# axis_kind: GHz", "axis,value"]
        lines += [f"{repr(float(x))},{repr(float(y))}" for x, y in zip(nu, values)]
        (out / name).write_text("\n".join(lines) + "\n")

    write("dip_synthetic.csv", r)
    write("flat_spectrum.csv", np.ones_like(nu))


if __name__ == "__main__":
    main()
