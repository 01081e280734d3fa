"""Named experiment presets.

Each preset is one or more labeled config mappings; bundles (like the
quench set) expand to several output files.  Values here are plain
config text values, so anything a preset does can be reproduced with a
config file.
"""

from __future__ import annotations

_STD = {
    "model.L": "10",
    "model.N": "2",
    "model.U": "16",
    "model.mu": "4",
}

# four quench pairs across the max-Im identity changes, one per angle
_QUENCH_PAIRS = (
    ("theta0", "0", "0.12", "0.124"),
    ("04pi", "0.4pi", "0.035", "0.045"),
    ("08pi", "0.8pi", "0.04", "0.06"),
    ("pi", "pi", "0.08", "0.09"),
)


def _counts(desc: str, **over) -> dict:
    cfg = {"kind": "counts_vs_jp", **_STD,
           "grid.theta": "0,0.4pi,0.8pi,pi", "grid.jp": "log:1e-5:1:60"}
    cfg.update(over)
    return {"description": desc, "configs": [("", cfg)]}


def _heatmap(desc: str, **over) -> dict:
    thetas = ",".join(f"{k/20:g}pi" for k in range(21))
    cfg = {"kind": "maxim_heatmap", **_STD,
           "grid.theta": thetas, "grid.jp": "log:1e-5:1:40"}
    cfg.update(over)
    return {"description": desc, "configs": [("", cfg)]}


def _threshold(desc: str, **over) -> dict:
    cfg = {"kind": "threshold_vs_L", **_STD,
           "grid.theta": "0.4pi", "grid.L": "6,8,10", "grid.jp": "log:1e-5:1:40"}
    cfg.update(over)
    return {"description": desc, "configs": [("", cfg)]}


def _spectrum(desc: str, **over) -> dict:
    cfg = {"kind": "spectrum_vs_jp", **_STD, "model.theta": "0.4pi",
           "grid.jp": "linear:0.03:0.05:41"}
    cfg.update(over)
    return {"description": desc, "configs": [("", cfg)]}


PRESETS: dict[str, dict] = {
    "fig2a": _counts(
        "complex-eigenvalue counts vs inter-leg coupling at four statistical angles "
        "(U=16, mu=4)"),
    "fig2b": _counts(
        "counts vs coupling in the weak-interaction regime (U=4, mu=0.2)",
        **{"model.U": "4", "model.mu": "0.2"}),
    "fig2b_mu0": _counts(
        "counts vs coupling at U=4 with the on-site tilt removed (mu=0)",
        **{"model.U": "4", "model.mu": "0"}),
    "fig2c": _heatmap(
        "max imaginary energy over the (angle, coupling) plane (U=16, mu=4)"),
    "fig2d": _threshold(
        "complex-onset coupling vs ladder length at theta=0.4pi (U=16, mu=4)"),
    "fig2e": _heatmap(
        "max imaginary energy over the (angle, coupling) plane (U=4, mu=0)",
        **{"model.U": "4", "model.mu": "0"}),
    "fig2e_mu02": _heatmap(
        "max imaginary energy over the (angle, coupling) plane (U=4, mu=0.2)",
        **{"model.U": "4", "model.mu": "0.2"}),
    "fig2f": _threshold(
        "complex-onset coupling vs ladder length (U=4, mu=0)",
        **{"model.U": "4", "model.mu": "0"}),
    "fig2f_mu02": _threshold(
        "complex-onset coupling vs ladder length (U=4, mu=0.2)",
        **{"model.U": "4", "model.mu": "0.2"}),
    "fig3_boson": _spectrum(
        "spectra with per-state observables across the bosonic max-Im crossing",
        **{"model.theta": "0", "grid.jp": "linear:0.10:0.14:41"}),
    "fig3_04pi": _spectrum(
        "spectra with per-state observables across the theta=0.4pi crossing"),
    "fig3_08pi": _spectrum(
        "spectra with per-state observables across the theta=0.8pi crossing",
        **{"model.theta": "0.8pi", "grid.jp": "linear:0.04:0.06:41"}),
    "fig3_pf": _spectrum(
        "spectra with per-state observables across the pseudofermion crossing",
        **{"model.theta": "pi", "grid.jp": "linear:0.075:0.095:41"}),
    "fig4": {
        "description": "normalized quench evolution for the four coupling pairs "
                       "across the max-Im identity changes",
        "configs": [
            (f"_{tag}", {
                "kind": "quench", **_STD,
                "model.theta": theta,
                "quench.j_ini": j_ini,
                "quench.j_final": j_final,
                "time.grid": "log:0.1:1e5:200",
            })
            for tag, theta, j_ini, j_final in _QUENCH_PAIRS
        ],
    },
    "smS1": _spectrum(
        "fine spectra around the theta=0.4pi crossing (top-Im near-degeneracy)",
        **{"grid.jp": "linear:0.030:0.060:61"}),
    "smS1_08pi": _spectrum(
        "fine spectra around the theta=0.8pi crossing (top-Im near-degeneracy)",
        **{"model.theta": "0.8pi", "grid.jp": "linear:0.040:0.070:61"}),
    "smS2_N3": _spectrum(
        "three-particle spectra vs coupling at theta=0.4pi",
        **{"model.N": "3", "grid.jp": "log:1e-4:0.5:16"}),
    "smS4": {
        "description": "imaginary-energy density of states at the post-quench coupling "
                       "(theta=0.4pi, Jp=0.045)",
        "configs": [("", {
            "kind": "im_dos", **_STD, "model.theta": "0.4pi", "model.Jp": "0.045",
            "dos.bins": "81", "dos.range": "-0.04,0.04",
        })],
    },
    "smS4_ini": {
        "description": "imaginary-energy density of states at the pre-quench coupling "
                       "(theta=0.4pi, Jp=0.035)",
        "configs": [("", {
            "kind": "im_dos", **_STD, "model.theta": "0.4pi", "model.Jp": "0.035",
            "dos.bins": "81", "dos.range": "-0.04,0.04",
        })],
    },
    "symcheck": {
        "description": "antiunitary-conjugation residuals per Hamiltonian term over a "
                       "grid of angles",
        "configs": [("", {
            "kind": "symmetry_residuals", **_STD, "model.Jp": "0.1",
            "grid.theta": "0,0.2pi,0.4pi,0.5pi,0.8pi,pi",
        })],
    },
    "commcheck": {
        "description": "deformed-exchange commutation residuals of the string-dressed "
                       "operators",
        "configs": [("", {
            "kind": "commutator_check",
            "model.L": "3", "model.N": "3", "model.n_cap": "3",
            "grid.theta": "0,0.3,0.5pi,0.8pi,pi",
        })],
    },
    "pertcheck": {
        "description": "second-order and path-amplitude values against closed forms",
        "configs": [("", {
            "kind": "perturbation_check",
            "model.L": "4", "model.N": "2", "model.U": "16", "model.mu": "4",
            "grid.theta": "0,0.3,0.5pi,0.8pi,pi",
        })],
    },
}


def list_presets() -> list[tuple[str, str]]:
    """(name, description) pairs in sorted order."""
    return [(name, PRESETS[name]["description"]) for name in sorted(PRESETS)]


def preset_configs(name: str) -> list[tuple[str, dict[str, str]]]:
    """Expand a preset into (label, raw-config) pairs."""
    if name not in PRESETS:
        raise KeyError(name)
    return [(name + suffix, dict(cfg)) for suffix, cfg in PRESETS[name]["configs"]]
