"""Experiment runners: grid sweeps, deterministic CSV emission, caching.

Each config kind maps to one runner producing a SweepTable whose rows
follow a fixed schema and a deterministic order (outer grid axes sorted
ascending).  Tables serialize to CSV with a '#' comment header that
echoes the canonicalized config and the tool version, so every output
file carries its full provenance.  run() caches finished CSVs under a
content digest of the config and skips recomputation on a clean hit.
"""

from __future__ import annotations

import hashlib
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._version import __version__
from .config import ExperimentConfig, parse_float, parse_int
from .dynamics import QuenchConfig, run_quench
from .fock import index_of, linear_site
from .hamiltonian import ModelParams, build_full, make_basis
from .operators import check_anyon_commutators
from .perturbation import (
    AB_SCATTERING,
    BB_SCATTERING,
    PathSpec,
    SingularManifoldError,
    ab_exchange_formula,
    bw_second_order,
    onset_threshold,
    path_amplitude,
    sector_projector,
    split,
)
from .spectral import (
    conjugation_asymmetry,
    count_complex,
    edge_correlation,
    eig,
    im_dos,
    max_im,
    polarization,
)
from .symmetry import build_K, residual


class NumericalError(RuntimeError):
    """Linear-algebra failure that should abort the run (exit code 2)."""


@dataclass(frozen=True)
class SweepTable:
    """Column names, flat rows, and extra provenance lines for one run."""

    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    meta: tuple[str, ...] = ()


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render_csv(table: SweepTable, config: ExperimentConfig) -> str:
    """Serialize a table; identical inputs give identical bytes."""
    lines = [f"# anyonladder {__version__}"]
    for line in config.canonical():
        lines.append(f"# {line}")
    for line in table.meta:
        lines.append(f"# {line}")
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def cache_key(config: ExperimentConfig) -> str:
    """Content digest of the canonicalized config.

    Respelled or permuted config files that mean the same experiment
    collide; any change of substance does not.
    """
    text = "\n".join(config.canonical())
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _eig_checked(H):
    try:
        return eig(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from None


def _pmap(fn, items, jobs: int | None):
    # ThreadPoolExecutor.map preserves submission order, so the merged
    # rows come back in grid order regardless of completion order.
    n = jobs if jobs is not None else (os.cpu_count() or 1)
    if n < 1:
        raise ValueError(f"jobs must be >= 1, got {n}")
    items = list(items)
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# -- kind runners --------------------------------------------------------


def _run_counts(config: ExperimentConfig, jobs) -> SweepTable:
    params = config.model_params()
    thetas = sorted(config.theta_grid())
    jps = config.jp_grid()
    basis = make_basis(params)

    def one(task):
        th, jp = task
        H = build_full(params.with_(theta=th, Jp=float(jp)), basis, keep_terms=False)
        spec = _eig_checked(H)
        return count_complex(spec), max_im(spec)

    tasks = [(th, jp) for th in thetas for jp in jps]
    results = _pmap(one, tasks, jobs)
    rows = [(th, float(jp), c, m) for (th, jp), (c, m) in zip(tasks, results)]
    return SweepTable(columns=("theta", "Jp", "count", "max_im"), rows=rows)


def _run_heatmap(config: ExperimentConfig, jobs) -> SweepTable:
    params = config.model_params()
    thetas = sorted(config.theta_grid())
    jps = config.jp_grid()
    basis = make_basis(params)

    def one(task):
        th, jp = task
        H = build_full(params.with_(theta=th, Jp=float(jp)), basis, keep_terms=False)
        return max_im(_eig_checked(H))

    tasks = [(th, jp) for th in thetas for jp in jps]
    results = _pmap(one, tasks, jobs)
    rows = [(th, float(jp), m) for (th, jp), m in zip(tasks, results)]
    return SweepTable(columns=("theta", "Jp", "max_im"), rows=rows)


def _run_threshold(config: ExperimentConfig, jobs) -> SweepTable:
    params = config.model_params()
    thetas = sorted(config.theta_grid())
    sizes = config.L_grid()
    jps = config.jp_grid()
    im_tol = parse_float(config.get("onset.im_tol", "1e-7"), "onset.im_tol")
    rel_width = parse_float(config.get("onset.rel_width", "0.10"), "onset.rel_width")

    def one(task):
        th, L = task
        p = params.with_(L=L, theta=th)
        res = onset_threshold(p, jps, im_tol=im_tol, rel_width=rel_width)
        return res.jp_star if res.found else float("nan")

    tasks = [(th, L) for th in thetas for L in sizes]
    results = _pmap(one, tasks, jobs)
    rows = [(th, L, star) for (th, L), star in zip(tasks, results)]
    return SweepTable(columns=("theta", "L", "Jp_star"), rows=rows)


def _run_spectrum(config: ExperimentConfig, jobs) -> SweepTable:
    params = config.model_params()
    jps = config.jp_grid()
    basis = make_basis(params)

    def one(jp):
        H = build_full(params.with_(Jp=float(jp)), basis, keep_terms=False)
        spec = _eig_checked(H)
        w = spec.eigenvalues
        return [
            (float(jp), n, float(w[n].real), float(w[n].imag),
             polarization(spec, n, basis), edge_correlation(spec, n, basis))
            for n in range(basis.dim)
        ]

    rows = []
    for chunk in _pmap(one, list(jps), jobs):
        rows.extend(chunk)
    return SweepTable(columns=("Jp", "index", "re", "im", "polarization", "edge_corr"), rows=rows)


def _run_quench(config: ExperimentConfig, jobs) -> SweepTable:
    params = config.model_params()
    j_ini = parse_float(config.require("quench.j_ini"), "quench.j_ini")
    j_final = parse_float(config.require("quench.j_final"), "quench.j_final")
    times = config.time_grid()
    qc = QuenchConfig(
        params_pre=params.with_(Jp=j_ini),
        params_post=params.with_(Jp=j_final),
        times=times,
    )
    try:
        res = run_quench(qc)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"quench evolution failed: {exc}") from None
    rows = [
        (float(t), float(c), float(pv), float(i), int(dn), float(ds))
        for t, c, pv, i, dn, ds in zip(
            res.times, res.C_series, res.P_series, res.ipr_series,
            res.dominant_n, res.dominant_share,
        )
    ]
    meta = (
        f"quench.initial_index = {res.initial_index}",
        f"quench.near_degenerate = {'true' if res.near_degenerate else 'false'}",
        f"quench.crossover = {res.crossover!r}",
    )
    return SweepTable(
        columns=("t", "C", "P", "ipr", "dominant_n", "c_dominant_sq"),
        rows=rows,
        meta=meta,
    )


def _run_im_dos(config: ExperimentConfig, jobs) -> SweepTable:
    params = config.model_params()
    bins = parse_int(config.get("dos.bins", "81"), "dos.bins")
    range_ = None
    if "dos.range" in config.values:
        lo, hi = (parse_float(p, "dos.range") for p in config.values["dos.range"].split(","))
        range_ = (lo, hi)
    H = build_full(params, keep_terms=False)
    spec = _eig_checked(H)
    counts, edges = im_dos(spec, bins, range_)
    rows = [(float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(bins)]
    return SweepTable(columns=("bin_lo", "bin_hi", "count"), rows=rows)


_RESIDUAL_TERMS = ("intra_A", "intra_B", "inter", "onsite", "full")


def _run_residuals(config: ExperimentConfig, jobs) -> SweepTable:
    params = config.model_params()
    thetas = sorted(config.theta_grid())
    basis = make_basis(params)

    def one(th):
        H = build_full(params.with_(theta=th), basis)
        K = build_K(basis, th)
        vals = [residual(K, H.term(t)) for t in _RESIDUAL_TERMS[:-1]]
        vals.append(residual(K, H.entries))
        vals.append(conjugation_asymmetry(_eig_checked(H.entries)))
        return vals

    results = _pmap(one, thetas, jobs)
    rows = []
    for th, vals in zip(thetas, results):
        for term, v in zip(_RESIDUAL_TERMS + ("spectrum_conjugation",), vals):
            rows.append((term, th, float(v)))
    return SweepTable(columns=("term", "theta", "residual"), rows=rows)


def _run_commutators(config: ExperimentConfig, jobs) -> SweepTable:
    params = config.model_params()
    thetas = sorted(config.theta_grid())

    def one(th):
        return check_anyon_commutators(params.L, params.cap, th)

    results = _pmap(one, thetas, jobs)
    rows = [(th, float(r)) for th, r in zip(thetas, results)]
    return SweepTable(columns=("theta", "residual"), rows=rows)


def _exchange_pairs(basis, L: int):
    """Index pairs (one particle per leg at rungs j != k) and leg-swapped images."""
    pairs = []
    for j in range(1, L + 1):
        for k in range(1, L + 1):
            if j == k:
                continue
            occ = np.zeros(2 * L, dtype=basis.states.dtype)
            occ[linear_site(j, "A", L) - 1] = 1
            occ[linear_site(k, "B", L) - 1] = 1
            swp = np.zeros_like(occ)
            swp[linear_site(k, "A", L) - 1] = 1
            swp[linear_site(j, "B", L) - 1] = 1
            pairs.append((j, k, index_of(basis, occ), index_of(basis, swp)))
    return pairs


def _run_perturbation(config: ExperimentConfig, jobs) -> SweepTable:
    params = config.model_params()
    if params.N != 2:
        raise NumericalError("perturbation_check needs N = 2 scattering manifolds")
    thetas = sorted(config.theta_grid())
    basis = make_basis(params)
    L = params.L
    A = lambda j: linear_site(j, "A", L) - 1
    B = lambda j: linear_site(j, "B", L) - 1

    def state(*slots):
        occ = np.zeros(2 * L, dtype=basis.states.dtype)
        for s in slots:
            occ[s] += 1
        return index_of(basis, occ)

    def one(th):
        p = params.with_(theta=th)
        H = build_full(p, basis)
        sp = split(p, basis, H)
        rung = H.term("inter")
        try:
            # leg-exchange block of the second-order effective matrix
            P = sector_projector(basis, AB_SCATTERING)
            pos = {int(i): n for n, i in enumerate(P.indices)}
            Heff = bw_second_order(sp, P, V=rung)
            worst = 0.0
            value = ref = 0j
            for j, k, a, b in _exchange_pairs(basis, L):
                el = complex(Heff[pos[a], pos[b]])
                formula = complex(ab_exchange_formula(p.Jp, p.mu, th, int(np.sign(j - k))))
                err = abs(el - formula)
                if (j, k) == (1, 2):
                    value, ref = el, formula
                worst = max(worst, float(err))
            ab_row = ("ab_exchange", th, value.real, value.imag, ref.real, ref.imag, worst)

            # four-step loop around one plaquette picks up the exchange phase
            loop = (
                state(B(1), B(2)), state(A(1), B(2)), state(A(1), B(1)),
                state(A(2), B(1)), state(B(1), B(2)),
            )
            amp = path_amplitude(sp, PathSpec(states=loop))
            plaq_ref = complex(
                -(p.J**2 * p.Jp**2 / (8 * p.mu**3)) * np.exp(-2 * p.alpha) * np.exp(1j * th)
            )
            plaq_row = ("plaquette_path", th, amp.value.real, amp.value.imag,
                        plaq_ref.real, plaq_ref.imag, float(abs(amp.value - plaq_ref)))

            # rung hopping cannot connect two states that both live on leg B
            PBB = sector_projector(basis, BB_SCATTERING)
            blk = float(np.abs(rung[np.ix_(PBB.indices, PBB.indices)]).max())
            bb_row = ("bb_block", th, blk, 0.0, 0.0, 0.0, blk)
        except (SingularManifoldError, ValueError, ZeroDivisionError) as exc:
            raise NumericalError(f"perturbation check failed at theta={th:g}: {exc}") from None
        return [ab_row, plaq_row, bb_row]

    rows = []
    for chunk in _pmap(one, thetas, jobs):
        rows.extend(chunk)
    return SweepTable(
        columns=("check", "theta", "value_re", "value_im",
                 "reference_re", "reference_im", "abs_err"),
        rows=rows,
    )


_RUNNERS = {
    "counts_vs_jp": _run_counts,
    "maxim_heatmap": _run_heatmap,
    "threshold_vs_L": _run_threshold,
    "spectrum_vs_jp": _run_spectrum,
    "quench": _run_quench,
    "im_dos": _run_im_dos,
    "symmetry_residuals": _run_residuals,
    "commutator_check": _run_commutators,
    "perturbation_check": _run_perturbation,
}


def run_table(config: ExperimentConfig, jobs: int | None = None) -> SweepTable:
    """Execute one config and return its table without touching disk."""
    return _RUNNERS[config.kind](config, jobs)


def _safe_label(label: str) -> str:
    out = re.sub(r"[^A-Za-z0-9._-]+", "_", label).strip("._")
    return out or "run"


def run(
    config: ExperimentConfig,
    out_dir: str | Path,
    label: str | None = None,
    jobs: int | None = None,
    force: bool = False,
) -> Path:
    """Run one experiment and write <label>.csv under out_dir.

    A sidecar <label>.csv.key records the config digest and the body
    digest; when both still match, the run is skipped.  A sidecar that
    disagrees with the file on disk counts as corruption and triggers a
    recompute.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if label is None:
        label = config.get("label") or config.kind
    path = out_dir / f"{_safe_label(label)}.csv"
    side = path.with_name(path.name + ".key")
    key = cache_key(config)
    if not force and path.exists() and side.exists():
        try:
            want_key, want_body = side.read_text().split()[:2]
            have_body = hashlib.sha256(path.read_bytes()).hexdigest()
            if want_key == key and want_body == have_body:
                return path
        except (ValueError, OSError):
            pass  # unreadable sidecar: recompute
    body = render_csv(run_table(config, jobs), config)
    path.write_bytes(body.encode("utf-8"))
    side.write_text(f"{key} {hashlib.sha256(body.encode('utf-8')).hexdigest()}\n")
    return path
