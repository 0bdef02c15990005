"""Figure rendering for CLI reports.

Figures are a convenience view of the delimited output the CLI already
emitted; nothing here feeds back into any computation.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def ladder_figure(rows, path, title=""):
    """Convergence figure for Monte Carlo ladders.

    rows: (N, statistic, mean, stderr) tuples.
    """
    stats = sorted({r[1] for r in rows})
    fig, ax = plt.subplots(figsize=(6, 4))
    for stat in stats:
        pts = sorted((r[0], r[2], r[3]) for r in rows if r[1] == stat)
        ns = [p[0] for p in pts]
        ax.errorbar(ns, [p[1] for p in pts], yerr=[3 * p[2] for p in pts],
                    marker="o", capsize=3, label=stat)
    ax.set_xscale("log", base=2)
    ax.set_xlabel("N")
    ax.set_ylabel("estimate")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def clt_figure(rows, path, title=""):
    """Error-decay figure for the exact CLT sweep.

    rows: (k, n, moment, limit) tuples; plots |moment - limit| against k.
    """
    orders = sorted({r[1] for r in rows})
    fig, ax = plt.subplots(figsize=(6, 4))
    for n in orders:
        pts = sorted((r[0], abs(float(r[2]) - float(r[3]))) for r in rows if r[1] == n)
        ks = [p[0] for p in pts]
        errs = [max(p[1], 1e-18) for p in pts]
        ax.plot(ks, errs, marker="o", label="n=%d" % n)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("k")
    ax.set_ylabel("|m_n - limit|")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
