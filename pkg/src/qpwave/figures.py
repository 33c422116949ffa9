"""Optional figure rendering for the CLI report paths.

All functions write PNG files next to the delimited output and return the
path; matplotlib is imported lazily with the Agg backend so headless runs
are fine.  Nothing here is needed by the numerical pipeline.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "save_profile_figure",
    "save_identities_figure",
    "save_scan_figure",
    "save_solution_figure",
    "save_samples_figure",
]


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _path(outdir: str, name: str) -> str:
    os.makedirs(outdir, exist_ok=True)
    return os.path.join(outdir, name)


def save_profile_figure(profile, outdir: str, name: str = "profile.png") -> str:
    """The calibrated profile and its equation residual over one period."""
    plt = _plt()
    xi = np.linspace(0.0, 2.0 * np.pi, 1025)
    beta = profile.beta(xi)
    grid = 2048
    xs = 2.0 * np.pi * np.arange(grid) / grid
    bs = profile.beta(xs)
    ab2 = float(np.mean(bs ** 2))
    ks = np.fft.rfftfreq(grid, d=1.0 / grid)
    keep = ks <= 128
    F = np.fft.rfft(bs)
    bpp = np.fft.irfft(np.where(keep, -(ks ** 2) * F, 0.0), n=grid)
    res = bpp + bs ** 3 + 3.0 * ab2 * bs

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.2))
    ax1.plot(xi, beta, lw=1.2)
    ax1.set_xlabel(r"$\xi$")
    ax1.set_ylabel(r"$\beta(\xi)$")
    ax1.set_title("calibrated profile")
    ax2.semilogy(xs, np.abs(res) + 1e-18, lw=0.8)
    ax2.set_xlabel(r"$\xi$")
    ax2.set_ylabel("|ODE residual|")
    ax2.set_title(r"$\beta'' + \beta^3 + 3\langle\beta^2\rangle\beta$")
    fig.tight_layout()
    out = _path(outdir, name)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def save_identities_figure(report, outdir: str, tol: float,
                           name: str = "identities.png") -> str:
    """Residual bars for the twelve identity checks."""
    plt = _plt()
    keys = list(report.identity_residuals)
    vals = [max(report.identity_residuals[k], 1e-18) for k in keys]
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.bar(range(len(keys)), vals, color="#4477aa")
    ax.set_yscale("log")
    ax.axhline(tol, color="#cc3311", lw=1.0, ls="--", label=f"tolerance {tol:g}")
    ax.set_xticks(range(len(keys)), keys, rotation=45)
    ax.set_ylabel("residual")
    ax.legend(frameon=False)
    fig.tight_layout()
    out = _path(outdir, name)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def save_scan_figure(params, n_max: int, outdir: str,
                     name: str = "divisor_scan.png") -> str:
    """Heatmap of log10 |D(m, n)| over the scanned index square."""
    plt = _plt()
    k = np.concatenate([np.arange(-n_max, 0), np.arange(1, n_max + 1)])
    M, Nn = np.meshgrid(k, k, indexing="ij")
    D = np.abs(params.divisor(M, Nn))
    fig, ax = plt.subplots(figsize=(4.6, 4.0))
    im = ax.imshow(np.log10(D), origin="lower",
                   extent=[-n_max, n_max, -n_max, n_max], cmap="viridis")
    fig.colorbar(im, ax=ax, label=r"$\log_{10}|D(m,n)|$")
    ax.set_xlabel("n")
    ax.set_ylabel("m")
    fig.tight_layout()
    out = _path(outdir, name)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def save_solution_figure(sol, outdir: str, name: str = "solution.png") -> str:
    """Kernel components r, s and the interior coefficient magnitudes."""
    plt = _plt()
    xi = np.linspace(0.0, 2.0 * np.pi, 513)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.2))
    ax1.plot(xi, sol.r(xi), label="r", lw=1.2)
    ax1.plot(xi, sol.s(xi), label="s", lw=1.2, ls="--")
    ax1.set_xlabel(r"$\varphi$")
    ax1.legend(frameon=False)
    ax1.set_title("kernel components")
    C = np.abs(sol.p.coeffs)
    N = sol.p.weights.N
    im = ax2.imshow(np.log10(C + 1e-20), origin="lower",
                    extent=[-N, N, -N, N], cmap="magma")
    fig.colorbar(im, ax=ax2, label=r"$\log_{10}|p_{mn}|$")
    ax2.set_title("interior coefficients")
    fig.tight_layout()
    out = _path(outdir, name)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def save_samples_figure(t, x, v, outdir: str, name: str = "samples.png") -> str:
    """Space-time heatmap of sampled field values (t, x on a product grid)."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(5.4, 4.0))
    im = ax.pcolormesh(x, t, v, shading="auto", cmap="RdBu_r")
    fig.colorbar(im, ax=ax, label="v(t, x)")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    fig.tight_layout()
    out = _path(outdir, name)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
