"""Command-line interface.

Subcommands: enumerate, poset, laws, convolve, transform, simulate
(wigner|wishart), clt, selftest.  Exact rationals are rendered as
"num/den" strings; Monte Carlo reports are floats.  Exit codes: 0 success,
1 failed check, 2 usage error.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import sys
import tempfile
from fractions import Fraction

import click

from . import laws as laws_mod
from . import maps as maps_mod
from . import poset as poset_mod
from .distributions import (
    eval_map,
    free_poisson_on_maps,
    moment_n,
    semicircular_on_maps,
)
from .ensembles import EnsembleConfig, estimate_moments
from .series import (
    CumulantSeries,
    MomentSeries,
    cauchy_pair_check,
    cauchy_transform,
    clt_rescale,
    cumulants_from_moments,
    free_convolve,
    moments_from_cumulants,
    q_transform,
    r_transform,
    semicircular_series,
    free_poisson_series,
)


def _frac(x) -> str:
    f = Fraction(x)
    return "%d/%d" % (f.numerator, f.denominator)


def _parse_frac(s) -> Fraction:
    return Fraction(s)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


@click.group()
def main():
    """Workbench for tensorial free probability."""


@main.command("enumerate")
@click.option("--p", "p", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--cache-dir", default=None, help="atlas cache directory")
@click.option("--no-cache", is_flag=True, default=False)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("-o", "--output", default=None)
def enumerate_cmd(p, n, cache_dir, no_cache, fmt, output):
    """Enumerate the rooted connected maps B_n and print the atlas."""
    found = maps_mod.enumerate_Bn(p, n, cache_dir=cache_dir, use_cache=not no_cache)
    records = maps_mod.atlas_records(found, p, n)
    if fmt == "json":
        text = json.dumps({"p": p, "n": n, "count": len(records), "maps": records},
                          indent=2, sort_keys=True) + "\n"
    else:
        rows = [
            (" ".join(map(str, r["code"])), r["gamma"], " ".join(map(str, r["pairing"])))
            for r in records
        ]
        text = _csv_text(["code", "gamma", "pairing"], rows)
    _emit(text, output)


def _parse_pairing(p, spec):
    pairs = []
    for chunk in spec.split(","):
        a, _, b = chunk.partition("-")
        pairs.append((int(a), int(b)))
    m = 2 * len(pairs)
    if m % p:
        raise click.UsageError("pairing size %d is not a multiple of p" % m)
    cycles = maps_mod.canonical_cycles(p, m // p)
    return maps_mod.build_map(cycles, pairs)


@main.command("poset")
@click.option("--p", "p", type=int, required=True)
@click.option("--pairing", required=True,
              help="comma-separated half-edge pairs, e.g. 1-4,2-3")
@click.option("-o", "--output", default=None)
def poset_cmd(p, pairing, output):
    """Down-set, covers and Moebius values below a map."""
    top = _parse_pairing(p, pairing)
    adj = poset_mod.poset_adjacency(top)
    nodes = poset_mod.down_set(top)
    adj["moebius_to_top"] = [poset_mod.moebius(b, top) for b in nodes]
    adj["melonic"] = poset_mod.is_melonic(top)
    _emit(json.dumps(adj, indent=2, sort_keys=True) + "\n", output)


@main.command("laws")
@click.option("--family", type=click.Choice(
    ["semicircular", "free-poisson", "marchenko-pastur", "delta"]), required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--t", "t", default=None, help="rational parameter, e.g. 1/2")
@click.option("--tau", default=None, help="rational parameter for MP")
@click.option("--K", "K", type=int, default=12)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("-o", "--output", default=None)
def laws_cmd(family, p, t, tau, K, fmt, output):
    """Moment/cumulant table of a law."""
    t = _parse_frac(t) if t is not None else None
    tau = _parse_frac(tau) if tau is not None else None
    if family == "semicircular":
        coeffs = laws_mod.semicircular_moments(p, K)
    elif family == "free-poisson":
        coeffs = laws_mod.free_poisson_moments(p, t if t is not None else 1, K)
    elif family == "marchenko-pastur":
        if tau is None:
            raise click.UsageError("marchenko-pastur needs --tau")
        coeffs = laws_mod.marchenko_pastur_moments(p, tau, K)
    else:
        coeffs = laws_mod.delta_moments(p, t if t is not None else 1, K)
    m = MomentSeries(p, coeffs)
    kap = cumulants_from_moments(m).coeffs
    param = t if t is not None else tau
    if fmt == "json":
        text = json.dumps({
            "family": family, "p": p,
            "t": None if param is None else _frac(param),
            "moments": [_frac(x) for x in m.coeffs],
            "cumulants": [_frac(x) for x in kap],
        }, indent=2) + "\n"
    else:
        rows = [
            (family, p, "" if param is None else _frac(param), n, _frac(m.coeffs[n]), _frac(kap[n]))
            for n in range(K + 1)
        ]
        text = _csv_text(["law", "p", "t", "n", "m_n", "kappa_n"], rows)
    _emit(text, output)


def _load_series(path):
    with open(path) as fh:
        doc = json.load(fh)
    return MomentSeries(doc["p"], [_parse_frac(x) for x in doc["moments"]])


@main.command("convolve")
@click.argument("file_a")
@click.argument("file_b")
@click.option("--p", "p", type=int, default=None, help="check the common order")
@click.option("-o", "--output", default=None)
def convolve_cmd(file_a, file_b, p, output):
    """Tensorial free convolution of two moment files."""
    a, b = _load_series(file_a), _load_series(file_b)
    if p is not None and (a.order != p or b.order != p):
        raise click.UsageError("orders do not match --p")
    out = free_convolve(a, b)
    text = json.dumps({"p": out.order, "moments": [_frac(x) for x in out.coeffs]},
                      indent=2) + "\n"
    _emit(text, output)


@main.command("transform")
@click.argument("series_file")
@click.option("--op", type=click.Choice(["r", "q", "cauchy", "kg"]), required=True)
@click.option("--cumulants", "cumulants_file", default=None,
              help="independent cumulant file for the kg check")
@click.option("-o", "--output", default=None)
def transform_cmd(series_file, op, cumulants_file, output):
    """R/Q/Cauchy transforms and the K(G(z)) = z check of a moment file."""
    m = _load_series(series_file)
    if op == "kg":
        c = None
        if cumulants_file is not None:
            with open(cumulants_file) as fh:
                doc = json.load(fh)
            c = CumulantSeries(doc["p"], [_parse_frac(x) for x in doc["cumulants"]])
        ok = cauchy_pair_check(m, c)
        _emit(json.dumps({"p": m.order, "kg_identity": ok}) + "\n", output)
        if not ok:
            sys.exit(1)
        return
    if op == "r":
        coeffs = r_transform(cumulants_from_moments(m))
    elif op == "q":
        coeffs = q_transform(cumulants_from_moments(m))
    else:
        g = cauchy_transform(m)
        coeffs = g.coeffs
    text = json.dumps({"p": m.order, "op": op,
                       "coefficients": [_frac(x) for x in coeffs]}, indent=2) + "\n"
    _emit(text, output)


def _simulate(family, p, ns, trials, seed, entry_law, n_max, t, output):
    from .plotting import ladder_figure

    rows = []
    for N in ns:
        config = EnsembleConfig(family, p, N, entry_law=entry_law, t=t, seed=seed)
        report = estimate_moments(config, n_max, trials)
        for label, mean, err, var in report.rows:
            rows.append((N, label, mean, err, var))
    text = _csv_text(["N", "statistic", "mean", "stderr", "variance"], rows)
    _emit(text, output)
    if output:
        fig_path = output.rsplit(".", 1)[0] + ".png"
        ladder_figure([(r[0], r[1], r[2], r[3]) for r in rows], fig_path,
                      title="%s p=%d" % (family, p))


def _ladder(spec):
    return [int(x) for x in spec.split(",")]


@main.group("simulate")
def simulate_group():
    """Monte Carlo ladder reports."""


@simulate_group.command("wigner")
@click.option("--p", "p", type=int, required=True)
@click.option("--N", "ns", default="8,16,32", help="comma-separated ladder")
@click.option("--trials", type=int, default=200)
@click.option("--seed", type=int, default=0)
@click.option("--entry-law", type=click.Choice(["gaussian", "rademacher"]), default="gaussian")
@click.option("--n-max", type=int, default=4)
@click.option("-o", "--output", default=None)
def simulate_wigner(p, ns, trials, seed, entry_law, n_max, output):
    _simulate("wigner", p, _ladder(ns), trials, seed, entry_law, n_max, None, output)


@simulate_group.command("wishart")
@click.option("--p", "p", type=int, required=True)
@click.option("--N", "ns", default="8,16,32", help="comma-separated ladder")
@click.option("--trials", type=int, default=100)
@click.option("--seed", type=int, default=0)
@click.option("--entry-law", type=click.Choice(["gaussian", "rademacher"]), default="gaussian")
@click.option("--n-max", type=int, default=2)
@click.option("--t", "t", type=float, default=1.0)
@click.option("-o", "--output", default=None)
def simulate_wishart(p, ns, trials, seed, entry_law, n_max, t, output):
    _simulate("wishart", p, _ladder(ns), trials, seed, entry_law, n_max, t, output)


@main.command("clt")
@click.option("--p", "p", type=int, required=True)
@click.option("--K", "K", type=int, default=8)
@click.option("--ks", default="10,100,1000", help="superposition counts")
@click.option("-o", "--output", default=None)
def clt_cmd(p, K, ks, output):
    """Exact free CLT sweep: rescaled cumulants and moment errors."""
    from .plotting import clt_figure

    base = CumulantSeries(p, [1, 0, 1] + [1] * (K - 2))
    limit = semicircular_series(p, K)
    rows = []
    for k in _ladder(ks):
        m = moments_from_cumulants(clt_rescale(base, k))
        for n in range(K + 1):
            rows.append((k, n, _frac(m.coeffs[n]), _frac(limit.coeffs[n])))
    text = _csv_text(["k", "n", "m_n", "limit"], rows)
    _emit(text, output)
    if output:
        fig_path = output.rsplit(".", 1)[0] + ".png"
        clt_figure([(r[0], r[1], Fraction(r[2]), Fraction(r[3])) for r in rows
                    if r[1] in (2, 4)], fig_path, title="free CLT p=%d" % p)


def _atlas_checksum(found):
    blob = b"".join(maps_mod.canonical_code(b) for b in found)
    return hashlib.sha256(blob).hexdigest()


@main.command("selftest")
def selftest_cmd():
    """Exact identity checks plus cache coherence; exit 1 on any failure."""
    failures = []

    def check(name, ok):
        click.echo("%-34s %s" % (name, "ok" if ok else "FAIL"))
        if not ok:
            failures.append(name)

    for p in (2, 3, 4):
        s = semicircular_series(p, 10)
        want = laws_mod.semicircular_moments(p, 10)
        check("semicircular table p=%d" % p, s.coeffs == want)
    for order in (4, 6):
        for t in (Fraction(1, 2), Fraction(1), Fraction(2)):
            rec = moments_from_cumulants(CumulantSeries(order, [1] + [t] * 10))
            check("free poisson order %d t=%s" % (order, t),
                  rec.coeffs == free_poisson_series(order, t, 10).coeffs)
    rt = cumulants_from_moments(moments_from_cumulants(
        CumulantSeries(4, [Fraction(1)] + [Fraction(i, 7) for i in range(1, 13)])))
    check("moment/cumulant round-trip", rt.coeffs[1:] == tuple(Fraction(i, 7) for i in range(1, 13)))
    check("KG identity mu_4", cauchy_pair_check(semicircular_series(4, 8)))
    check("KG identity nu_4_1", cauchy_pair_check(free_poisson_series(4, 1, 8)))
    for q in (1, Fraction(3, 2), 2, 3):
        ok = True
        for n in range(0, 9):
            if Fraction(q) * n > 8:
                continue
            parts = laws_mod.enumerate_nc_multiple(q, n)
            for b in range(1, n + 1):
                ok = ok and laws_mod.fuss_narayana(q, n, b) == sum(
                    1 for pp in parts if len(pp) == b
                )
        check("NC oracle q=%s" % q, ok)
    for (p, n) in ((2, 2), (3, 2), (4, 2)):
        check("sum a_%d over B_%d" % (p, n),
              moment_n(semicircular_on_maps(p), n)
              == Fraction(laws_mod.fuss_catalan(p, n // 2)))
    t = Fraction(1, 3)
    check("sum b_4 over B_2",
          moment_n(free_poisson_on_maps(4, t), 2) == t + 2 * t ** 2)
    with tempfile.TemporaryDirectory() as tmp:
        fresh = maps_mod.enumerate_Bn(2, 3, use_cache=False)
        maps_mod.enumerate_Bn(2, 3, cache_dir=tmp, use_cache=True)
        cached = maps_mod.enumerate_Bn(2, 3, cache_dir=tmp, use_cache=True)
        check("cache coherence", _atlas_checksum(fresh) == _atlas_checksum(cached))
    if failures:
        click.echo("%d check(s) failed" % len(failures))
        sys.exit(1)
    click.echo("all checks passed")


if __name__ == "__main__":
    main()
