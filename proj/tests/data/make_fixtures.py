#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The NightForge Authors.
"""Regenerates the bundled test fixtures (deterministic, no inputs)."""

import pathlib

import numpy as np
from PIL import Image

HERE = pathlib.Path(__file__).resolve().parent


def write_pfm(path, data):
    data = np.asarray(data, dtype="<f4")
    channels = 1 if data.ndim == 2 else data.shape[2]
    h, w = data.shape[:2]
    with open(path, "wb") as f:
        f.write(f"{'Pf' if channels == 1 else 'PF'}\n{w} {h}\n-1.0\n".encode())
        f.write(np.flipud(data).tobytes())


def daylight(h=96, w=128):
    y, x = np.mgrid[0:h, 0:w].astype(np.float64)
    horizon = h * 0.45
    rgb = np.zeros((h, w, 3))
    sky = y < horizon
    t = y / horizon
    rgb[..., 0] = np.where(sky, 0.45 + 0.25 * t, 0.35 + 0.1 * np.sin(x / 9.0))
    rgb[..., 1] = np.where(sky, 0.6 + 0.2 * t, 0.45 + 0.05 * np.cos(y / 5.0))
    rgb[..., 2] = np.where(sky, 0.9 - 0.1 * t, 0.3)
    # two buildings
    for (x0, x1, top, col) in [(12, 40, 20, (0.55, 0.5, 0.45)), (80, 112, 28, (0.7, 0.65, 0.6))]:
        mask = (x >= x0) & (x < x1) & (y >= top) & (y < horizon + 10)
        rgb[mask] = col
    depth = np.where(sky, 80.0, 2.0 + 60.0 * (h - y) / (h - horizon + 1))
    depth = np.where((x >= 12) & (x < 40) & (y >= 20) & (y < horizon + 10), 25.0, depth)
    depth = np.where((x >= 80) & (x < 112) & (y >= 28) & (y < horizon + 10), 15.0, depth)
    return np.clip(rgb, 0, 1), depth


def glow(size=64, core=3.0, falloff=4.0):
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    r = np.hypot(y - size / 2, x - size / 2)
    v = np.where(r <= core, 1.0, np.exp(-((r - core) / falloff) ** 2))
    v[v < 1e-3] = 0.0
    rgb = np.stack([v, v * 0.9, v * 0.7], axis=-1)
    return rgb


def main():
    rgb, depth = daylight()
    Image.fromarray(np.round(rgb * 255).astype(np.uint8)).save(HERE / "daylight.png")
    write_pfm(HERE / "daylight_depth.pfm", depth.astype(np.float32))
    assets = HERE / "assets"
    assets.mkdir(exist_ok=True)
    g = glow()
    Image.fromarray(np.round(g * 255).astype(np.uint8)).save(assets / "glow.png")
    write_pfm(assets / "streak.pfm", glow(48, core=2.0, falloff=8.0))


if __name__ == "__main__":
    main()
