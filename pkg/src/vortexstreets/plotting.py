"""Deterministic gnuplot scripts for vortex configurations and curve overlays.

Data are inlined as here-document blocks, so a script is self-contained and
identical inputs give identical bytes.  Positive circulations are drawn red,
negative ones blue, point size growing with ``|Gamma|``.
"""
from __future__ import annotations

import math
from typing import Sequence

from .asymptotics import CurveSample
from .configuration import PERIOD, VortexConfiguration

RED = "#d62728"
BLUE = "#1f77b4"
CURVE = "#2ca02c"


def _fmt(x: float) -> str:
    return repr(float(x) + 0.0)


def _shift(config: VortexConfiguration) -> complex:
    return PERIOD if config.is_strip else 2 * config.lattice.omega1


def _points(config: VortexConfiguration, sign: int, periods: int) -> list[str]:
    order = sorted(range(config.n), key=lambda i: (config.positions[i].real, config.positions[i].imag))
    step = _shift(config)
    lines = []
    for p in range(periods):
        for i in order:
            g = int(config.circulations[i])
            if g * sign > 0:
                z = config.positions[i] + p * step
                lines.append(f"{_fmt(z.real)} {_fmt(z.imag)} {abs(g)}")
    return lines


def _curve_lines(curve: CurveSample, periods: int, branch: str) -> list[str]:
    ys = curve.y_plus if branch == "plus" else curve.y_minus
    lines = []
    for p in range(periods):
        for x, y in zip(curve.x, ys):
            lines.append(f"{_fmt(x + p * PERIOD)} {_fmt(y)}")
        lines.append("")
    return lines


def emit_gnuplot(configs: Sequence[tuple[str, VortexConfiguration]] = (),
                 curves: Sequence[tuple[str, CurveSample]] = (),
                 periods: int = 1, title: str = "", output: str | None = None) -> str:
    """Script text plotting every configuration and curve in one frame.

    ``periods`` copies of each configuration (and curve) are drawn, shifted
    by the strip period ``pi`` (or ``2 omega1`` on a lattice).  ``output``
    adds a png terminal writing to that path.
    """
    periods = max(1, int(periods))
    out = ["# gnuplot script", "set size ratio -1", "set key outside", "unset grid"]
    if output:
        out += ["set terminal pngcairo size 1200,600", f"set output '{output}'"]
    if title:
        out.append(f"set title '{title}'")
    plots = []
    for k, (label, cfg) in enumerate(configs):
        for sign, name, color in ((1, "pos", RED), (-1, "neg", BLUE)):
            block = f"$c{k}_{name}"
            out.append(f"{block} << EOD")
            out += _points(cfg, sign, periods)
            out.append("EOD")
            legend = f"{label} {'Gamma>0' if sign > 0 else 'Gamma<0'}"
            plots.append(f"{block} using 1:2:(0.6+0.4*$3) with points pt 7 ps variable lc rgb '{color}' "
                         f"title '{legend}'")
    for k, (label, curve) in enumerate(curves):
        for branch in ("plus", "minus"):
            block = f"$k{k}_{branch}"
            out.append(f"{block} << EOD")
            out += _curve_lines(curve, periods, branch)
            out.append("EOD")
            plots.append(f"{block} using 1:2 with lines lw 1.5 lc rgb '{CURVE}' "
                         f"title '{label} {branch}'")
    if all(cfg.is_strip for _, cfg in configs):
        out.append(f"set xrange [0:{_fmt(periods * PERIOD)}]")
    if plots:
        out.append("plot " + ", \\\n     ".join(plots))
    else:
        out.append(f"plot [0:{_fmt(periods * math.pi)}] NaN notitle")
    return "\n".join(out) + "\n"
