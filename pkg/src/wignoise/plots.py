"""Figure rendering for the report commands.

Each renderer takes the rows a command emitted and draws the matching
figure next to the delimited output.  Rendering is optional and never
feeds back into the numbers.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _finite_rows(rows, key):
    return [r for r in rows if isinstance(r[key], float) and math.isfinite(r[key])]


def render_table1(rows, path):
    """Entropy and decoherence against the tone-ratio index."""
    finite = [r for r in rows if r["j"] != "inf"]
    golden = [r for r in rows if r["j"] == "inf"]
    js = [r["j"] for r in finite]
    fig, axes = plt.subplots(1, 3, figsize=(10.5, 3.2))
    panels = [("S", "entropy S (nats)"), ("eps_single", "epsilon, single packet"),
              ("eps_double", "epsilon, magnetic double")]
    for ax, (key, label) in zip(axes, panels):
        ax.plot(js, [r[key] for r in finite], "o-", color="#1f5fa8")
        if golden:
            ax.axhline(golden[0][key], ls="--", color="#b54708", lw=1,
                       label="golden mean")
            ax.legend(frameon=False, fontsize=8)
        ax.set_xlabel("j")
        ax.set_ylabel(label)
        ax.set_xticks(js)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep(rows, path):
    """Decoherence surface over packet width and noise strength."""
    deltas = sorted({r["delta"] for r in rows})
    sigmas = sorted({r["sigma"] for r in rows})
    eps = np.full((len(deltas), len(sigmas)), np.nan)
    di = {v: i for i, v in enumerate(deltas)}
    si = {v: i for i, v in enumerate(sigmas)}
    for r in rows:
        eps[di[r["delta"]], si[r["sigma"]]] = r["epsilon"]
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    mesh = ax.pcolormesh(sigmas, deltas, eps, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="epsilon")
    ax.set_xlabel("sigma (angstrom)")
    ax.set_ylabel("delta (angstrom)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_wigner(rows, path):
    """Panel per (case, sigma) of the averaged phase-space density."""
    cases = sorted({r["case"] for r in rows})
    sigmas = sorted({r["sigma"] for r in rows})
    fig, axes = plt.subplots(len(sigmas), len(cases),
                             figsize=(4.6 * len(cases), 2.6 * len(sigmas)),
                             squeeze=False)
    for ci, case in enumerate(cases):
        sub = [r for r in rows if r["case"] == case]
        xs = np.array(sorted({r["x"] for r in sub}))
        ks = np.array(sorted({r["k"] for r in sub}))
        xi = {v: i for i, v in enumerate(xs)}
        ki = {v: i for i, v in enumerate(ks)}
        for si, sigma in enumerate(sigmas):
            w = np.zeros((len(ks), len(xs)))
            for r in sub:
                if r["sigma"] == sigma:
                    w[ki[r["k"]], xi[r["x"]]] = r["W"]
            ax = axes[si][ci]
            span = max(abs(w.min()), abs(w.max())) or 1.0
            ax.pcolormesh(xs, ks, w, shading="nearest", cmap="RdBu_r",
                          vmin=-span, vmax=span)
            ax.set_title(f"{case}, sigma={sigma:g}", fontsize=8)
            ax.set_xlabel("x (angstrom)")
            ax.set_ylabel("k (1/angstrom)")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_dist(rows, path):
    """Trajectory window on top, shift density below."""
    traj = [r for r in rows if r["series"] == "trajectory"]
    dens = [r for r in rows if r["series"] == "density"]
    fig, (ax_t, ax_d) = plt.subplots(2, 1, figsize=(6.4, 5.2))
    ax_t.plot([r["arg"] for r in traj], [r["value"] for r in traj],
              lw=0.7, color="#1f5fa8")
    ax_t.set_xlabel("phase (rad)")
    ax_t.set_ylabel("shift (angstrom)")
    finite = [r for r in dens if not isinstance(r["value"], str)]
    ax_d.plot([r["arg"] for r in finite], [r["value"] for r in finite],
              lw=0.9, color="#1f5fa8")
    for r in dens:
        if isinstance(r["value"], str):
            ax_d.axvline(r["arg"], color="#b54708", lw=0.6, alpha=0.6)
    ax_d.set_xlabel("shift (angstrom)")
    ax_d.set_ylabel("density (1/angstrom)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
