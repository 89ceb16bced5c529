"""Optional matplotlib rendering of run artifacts.

Imported lazily by the runner when figure output is requested, so matplotlib
stays off the import path of every numerical run.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render"]


def _save(fig, out: str, name: str, written: list[str]) -> None:
    fig.savefig(os.path.join(out, name), dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(name)


def render(out: str, title: str, data: dict) -> list[str]:
    """Render whatever the run collected; returns the written file names."""
    written: list[str] = []

    if "spectrum_cut" in data:
        kx_over_k0, s2 = data["spectrum_cut"]
        fig, ax = plt.subplots(figsize=(6, 3.5))
        floor = s2.max() * 1e-10 if s2.max() > 0 else 1.0
        ax.semilogy(kx_over_k0, np.maximum(s2, floor), lw=1.0)
        ax.set_xlabel(r"$k_x / k_0$")
        ax.set_ylabel(r"$|\tilde{E}_r|^2$")
        ax.set_title(f"{title}: reflected spectrum, $k_y = 0$ cut")
        ax.grid(True, alpha=0.3)
        _save(fig, out, "spectrum_cut.png", written)

    if "patterns" in data and data["patterns"]:
        fig, ax = plt.subplots(figsize=(6, 3.5))
        for route, pat in sorted(data["patterns"].items()):
            style = "-" if route == "numeric" else "--"
            ax.plot(pat.theta_deg, pat.db(), style, lw=1.2, label=route)
        ax.set_xlabel(r"$\theta$ (deg)")
        ax.set_ylabel("received power (dB rel. max)")
        ax.set_ylim(bottom=-60)
        ax.set_title(f"{title}: far-field pattern")
        ax.legend()
        ax.grid(True, alpha=0.3)
        _save(fig, out, "pattern.png", written)

    if "trace" in data:
        trace = data["trace"]
        fig, ax = plt.subplots(figsize=(6, 3.5))
        ax.plot(np.arange(len(trace)), trace, "o-", ms=3)
        ax.set_xlabel("sweep")
        ax.set_ylabel("objective")
        ax.set_title(f"{title}: fit objective per sweep")
        ax.grid(True, alpha=0.3)
        _save(fig, out, "trace.png", written)

    if "profiles" in data:
        zs, x_axis, amp = data["profiles"]
        fig, ax = plt.subplots(figsize=(6, 4))
        mesh = ax.pcolormesh(zs, x_axis, amp.T, shading="auto", cmap="inferno")
        fig.colorbar(mesh, ax=ax, label="|E|")
        ax.set_xlabel("z (m)")
        ax.set_ylabel("x (m)")
        ax.set_title(f"{title}: field magnitude along propagation")
        _save(fig, out, "profile_map.png", written)

    if "mask" in data:
        mask = data["mask"]
        g = mask.grid
        fig, axes = plt.subplots(1, 2, figsize=(9, 4))
        ext = [g.x[0], g.x[-1], g.y[0], g.y[-1]]
        im0 = axes[0].imshow(np.abs(mask.gamma), origin="lower", extent=ext, cmap="viridis")
        axes[0].set_title(r"$|\Gamma|$")
        fig.colorbar(im0, ax=axes[0], shrink=0.8)
        im1 = axes[1].imshow(
            np.angle(mask.gamma), origin="lower", extent=ext, cmap="twilight",
            vmin=-np.pi, vmax=np.pi,
        )
        axes[1].set_title(r"$\arg\Gamma$")
        fig.colorbar(im1, ax=axes[1], shrink=0.8)
        for ax in axes:
            ax.set_xlabel("x (m)")
            ax.set_ylabel("y (m)")
        fig.suptitle(f"{title}: surface reflection coefficient")
        _save(fig, out, "mask.png", written)

    return written
