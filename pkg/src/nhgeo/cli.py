"""Command line front end: point evaluations, parameter sweeps, spectra and
the self-verification suite.

Output is CSV/JSON only; plotting is left to external tools.  Sweep points
that hit a singular configuration are recorded as NaN rows tagged with the
error name instead of aborting: the singular lines are usually exactly what
a sweep is looking for.
"""
from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from . import __version__
from .errors import NhgeoError
from .kitaev import (
    DissipativeKitaevModel,
    KitaevParams,
    dgamma_k_weak,
    gamma_k_weak,
    zeta_kitaev_sum,
    zeta_tilde_kitaev_sum,
)
from .linalg import load_matrix
from .liouville import (
    LiouvillianFamily,
    build_liouvillian,
    bures_metric,
    rapidities,
    zeta_ness,
    zeta_ness_k,
    zeta_tilde_gaussian,
    steady_state_dgamma,
    steady_state_gamma,
)
from .ssh import SSHParams, bloch_family, eps, zeta_finite_sum
from .tensors import (
    OperatorFamily,
    chi_hermitian,
    eta_tensor,
    zeta_limited,
    zeta_tensor,
)

TENSOR_KINDS = ("chi", "eta", "zeta", "zeta_limited", "zeta_limited_rescaled", "bures")


# ---------------------------------------------------------------------------
# model adapters
# ---------------------------------------------------------------------------

def _parse_value(name: str, raw: str):
    if name in ("L",):
        return int(raw)
    if name in ("weak_coupling",):
        return raw.lower() in ("1", "true", "yes")
    return float(raw)


class SSHAdapter:
    name = "nh-ssh"
    directions = ("t", "delta")
    defaults = {"t": 0.0, "delta": 0.0, "L": 64}
    sweepable = ("t", "delta")

    def params(self, values: dict) -> SSHParams:
        p = {**self.defaults, **values}
        return SSHParams(float(p["t"]), float(p["delta"]), int(p["L"]))

    def tensors(self, values, kinds, state, mu_reg) -> dict:
        p = self.params(values)
        out = {}
        for kind in kinds:
            if kind == "zeta":
                out[kind] = zeta_finite_sum(p).values
            elif kind in ("eta", "zeta_limited", "zeta_limited_rescaled"):
                n = 0 if state in (None, "ness") else int(state)
                total = np.zeros((2, 2), dtype=complex)
                for k in p.k_grid:
                    fam = bloch_family(p, k)
                    if kind == "eta":
                        total += eta_tensor(fam, [p.t, p.delta], n).values
                    else:
                        total += zeta_limited(
                            fam, [p.t, p.delta], n,
                            rescaled=(kind == "zeta_limited_rescaled"),
                        ).values
                out[kind] = total
            else:
                raise click.UsageError(f"model nh-ssh does not provide tensor {kind!r}")
        return out

    def spectrum(self, values) -> dict:
        p = self.params(values)
        bands = []
        for k in p.k_grid:
            se = np.sqrt(eps(p.t, p.delta, k))
            bands.append({"k": float(k), "values": [_c(se), _c(-se)]})
        flat = sorted(
            (complex(v["values"][i]["re"], v["values"][i]["im"]) for v in bands for i in (0, 1)),
            key=lambda z: (z.real, z.imag),
        )
        return {"per_k": bands, "sorted": [_c(z) for z in flat]}


class KitaevAdapter:
    name = "kitaev-dissipative"
    directions = ("h", "gamma")
    defaults = {
        "h": 0.0, "gamma": 1.0, "g": 0.1, "mu_plus": 1.0, "mu_minus": 0.6,
        "L": 64, "weak_coupling": True,
    }
    sweepable = ("h", "gamma", "g", "mu_plus", "mu_minus")

    def params(self, values: dict) -> KitaevParams:
        p = {**self.defaults, **values}
        return KitaevParams(
            float(p["h"]), float(p["gamma"]), float(p["g"]),
            float(p["mu_plus"]), float(p["mu_minus"]), int(p["L"]),
            bool(p["weak_coupling"]),
        )

    def tensors(self, values, kinds, state, mu_reg) -> dict:
        p = self.params(values)
        out = {}
        for kind in kinds:
            if kind == "zeta":
                if p.weak_coupling:
                    out[kind] = zeta_kitaev_sum(p).values
                else:
                    model = DissipativeKitaevModel(p.g, p.mu_plus, p.mu_minus)
                    out[kind] = zeta_ness_k(model, [p.h, p.gamma], p.L).values
            elif kind == "zeta_limited":
                if not p.weak_coupling:
                    raise click.UsageError(
                        "zeta_limited for kitaev-dissipative requires weak_coupling"
                    )
                out[kind] = zeta_tilde_kitaev_sum(p).values
            elif kind == "bures":
                if not p.weak_coupling:
                    raise click.UsageError(
                        "bures for kitaev-dissipative requires weak_coupling"
                    )
                vals = np.zeros((2, 2), dtype=complex)
                for k in p.k_grid:
                    gk = gamma_k_weak(p, k)
                    dgs = [dgamma_k_weak(p, k, mu) for mu in range(2)]
                    for mu in range(2):
                        for nu in range(2):
                            vals[mu, nu] += bures_metric(gk, dgs[mu], dgs[nu])
                out[kind] = vals
            else:
                raise click.UsageError(
                    f"model kitaev-dissipative does not provide tensor {kind!r}"
                )
        return out

    def spectrum(self, values) -> dict:
        p = self.params(values)
        model = DissipativeKitaevModel(p.g, p.mu_plus, p.mu_minus)
        xs = []
        for k in p.k_grid:
            xs.extend(np.linalg.eigvals(model.x_block(k, [p.h, p.gamma])))
        xs = sorted(xs, key=lambda z: (z.real, z.imag))
        min_re = min(z.real for z in xs) if xs else 0.0
        return {
            "rapidities": [_c(z) for z in xs],
            "min_re": float(min_re),
            "unique_steady_state": bool(min_re > 1e-12),
        }


class QuadLiouvilleAdapter:
    """Matrix-file driven quadratic generator: H(lam) = H0 + sum lam_mu dH_mu."""

    name = "quad-liouville"
    defaults: dict = {}
    sweepable = ()

    def __init__(self, hmat_file, bath_file, dhmat_files):
        if hmat_file is None or bath_file is None:
            raise click.UsageError(
                "model quad-liouville needs --hmat-file and --bath-file"
            )
        self.H0 = load_matrix(hmat_file)
        self.M, self.bath_vectors = _load_bath(bath_file)
        self.dH = [load_matrix(f) for f in dhmat_files]
        if self.H0.shape[0] % 2:
            raise click.UsageError("H matrix dimension must be even (2n)")
        self.n = self.H0.shape[0] // 2
        self.directions = tuple(f"lam{i}" for i in range(len(self.dH)))

    def family(self) -> LiouvillianFamily:
        def make(lam):
            H = self.H0 + sum(lam[m] * self.dH[m] for m in range(len(self.dH)))
            if self.M is not None:
                return build_liouvillian(self.n, H, M=self.M)
            return build_liouvillian(self.n, H, self.bath_vectors)

        return LiouvillianFamily(self.n, len(self.dH), make, name="quad-liouville")

    def tensors(self, values, kinds, state, mu_reg) -> dict:
        if not self.dH:
            raise click.UsageError(
                "tensor evaluation needs at least one --dhmat-file direction"
            )
        fam = self.family()
        lam = np.zeros(len(self.dH))
        out = {}
        need_gamma = {"zeta_limited", "bures"} & set(kinds)
        if need_gamma:
            liou = fam(lam)
            G = steady_state_gamma(liou).Gamma
            dG = []
            for mu in range(fam.num_params):
                dX, dY = fam.dxy(mu, lam)
                dG.append(steady_state_dgamma(liou, G, dX, dY))
        for kind in kinds:
            if kind == "zeta":
                out[kind] = zeta_ness(fam, lam).values
            elif kind == "zeta_limited":
                d = fam.num_params
                out[kind] = np.array(
                    [[zeta_tilde_gaussian(G, dG[a], dG[b]) for b in range(d)] for a in range(d)],
                    dtype=complex,
                )
            elif kind == "bures":
                d = fam.num_params
                out[kind] = np.array(
                    [[bures_metric(G, dG[a], dG[b]) for b in range(d)] for a in range(d)],
                    dtype=complex,
                )
            else:
                raise click.UsageError(
                    f"model quad-liouville does not provide tensor {kind!r}"
                )
        return out

    def spectrum(self, values) -> dict:
        liou = self.family()(np.zeros(len(self.dH)))
        x, _ = rapidities(liou)
        return {
            "rapidities": [_c(z) for z in x],
            "min_re": float(x.real.min()),
            "unique_steady_state": bool(x.real.min() > 1e-12),
        }


class MatrixFamilyAdapter:
    """Generic dense family K(lam) = K0 + sum lam_mu dK_mu, evaluated at lam = 0."""

    name = "matrix-file"
    defaults: dict = {}
    sweepable = ()

    def __init__(self, matrix_file, param_files):
        self.K0 = load_matrix(matrix_file)
        self.dK = [load_matrix(f) for f in param_files]
        for m in self.dK:
            if m.shape != self.K0.shape:
                raise click.UsageError("direction matrices must match the base shape")
        self.directions = tuple(f"lam{i}" for i in range(len(self.dK)))

    def family(self) -> OperatorFamily:
        return OperatorFamily(
            self.K0.shape[0], len(self.dK),
            lambda lam: self.K0 + sum(lam[m] * self.dK[m] for m in range(len(self.dK))),
            lambda mu, lam: self.dK[mu],
            name="matrix-file",
        )

    def tensors(self, values, kinds, state, mu_reg) -> dict:
        if not self.dK:
            raise click.UsageError("tensor evaluation needs at least one --param-file")
        fam = self.family()
        lam = np.zeros(len(self.dK))
        n = 0 if state in (None, "ness") else int(state)
        out = {}
        for kind in kinds:
            if kind == "chi":
                out[kind] = chi_hermitian(fam, lam, n).values
            elif kind == "eta":
                out[kind] = eta_tensor(fam, lam, n).values
            elif kind == "zeta":
                out[kind] = zeta_tensor(fam, lam, n, mu_reg=mu_reg or 0.0,
                                        route="agp" if mu_reg else "overlap").values
            elif kind == "zeta_limited":
                out[kind] = zeta_limited(fam, lam, n).values
            elif kind == "zeta_limited_rescaled":
                out[kind] = zeta_limited(fam, lam, n, rescaled=True).values
            else:
                raise click.UsageError(f"matrix families do not provide tensor {kind!r}")
        return out

    def spectrum(self, values) -> dict:
        from .linalg import eig_general

        dec = eig_general(self.K0)
        return {
            "eigenvalues": [_c(z) for z in dec.eigenvalues],
            "condition": dec.condition,
            "diagonalizable": dec.is_diagonalizable_estimate,
        }


MODELS = {"nh-ssh": SSHAdapter, "kitaev-dissipative": KitaevAdapter}


def _c(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _load_bath(path):
    with open(path) as fh:
        obj = json.load(fh)
    if "vectors" in obj:
        vecs = [np.array([complex(re, im) for re, im in v]) for v in obj["vectors"]]
        return None, vecs
    from .linalg import matrix_from_json

    return matrix_from_json(obj), None


def _parse_sets(sets) -> dict:
    out = {}
    for item in sets:
        if "=" not in item:
            raise click.UsageError(f"--set expects name=value, got {item!r}")
        name, raw = item.split("=", 1)
        out[name.strip()] = _parse_value(name.strip(), raw.strip())
    return out


def _make_adapter(model, matrix_file, param_files, hmat_file, bath_file, dhmat_files):
    if matrix_file is not None:
        return MatrixFamilyAdapter(matrix_file, list(param_files))
    if model is None:
        raise click.UsageError("pass --model or --matrix-file")
    if model == "quad-liouville":
        return QuadLiouvilleAdapter(hmat_file, bath_file, list(dhmat_files))
    if model not in MODELS:
        raise click.UsageError(
            f"unknown model {model!r}; available: {', '.join([*MODELS, 'quad-liouville'])}"
        )
    return MODELS[model]()


def _tensor_payload(values: dict, directions) -> dict:
    out = {}
    for kind, mat in values.items():
        out[kind] = {
            "directions": list(directions),
            "components": [[_c(mat[a, b]) for b in range(mat.shape[1])] for a in range(mat.shape[0])],
        }
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

@click.group()
@click.version_option(__version__, prog_name="nhgeo")
def main():
    """Geometric response tensors for non-Hermitian operator families."""


@main.command("tensor")
@click.option("--model", default=None, help="registered model name")
@click.option("--set", "sets", multiple=True, help="parameter assignment name=value")
@click.option("--tensors", default="zeta", help="comma-separated tensor kinds")
@click.option("--state", default=None, help="eigenstate index or 'ness'")
@click.option("--mu-reg", type=float, default=0.0, help="regularization cutoff")
@click.option("--matrix-file", default=None, type=click.Path(exists=True))
@click.option("--param-files", multiple=True, type=click.Path(exists=True))
@click.option("--hmat-file", default=None, type=click.Path(exists=True))
@click.option("--bath-file", default=None, type=click.Path(exists=True))
@click.option("--dhmat-files", multiple=True, type=click.Path(exists=True))
def cmd_tensor(model, sets, tensors, state, mu_reg, matrix_file, param_files,
               hmat_file, bath_file, dhmat_files):
    """Evaluate tensors at a single parameter point; JSON to stdout."""
    adapter = _make_adapter(model, matrix_file, param_files, hmat_file, bath_file, dhmat_files)
    kinds = [k.strip() for k in tensors.split(",") if k.strip()]
    for k in kinds:
        if k not in TENSOR_KINDS:
            raise click.UsageError(f"unknown tensor kind {k!r}")
    values = _parse_sets(sets)
    try:
        mats = adapter.tensors(values, kinds, state, mu_reg)
        spec = adapter.spectrum(values)
    except NhgeoError as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        sys.exit(3)
    payload = {
        "model": adapter.name,
        "params": values,
        "state": state,
        "tensors": _tensor_payload(mats, adapter.directions),
        "eigenvalue_summary": spec,
        "metadata": {"version": __version__, "mu_reg": mu_reg},
    }
    click.echo(json.dumps(payload, indent=2, allow_nan=False))


@main.command("spectrum")
@click.option("--model", default=None)
@click.option("--set", "sets", multiple=True)
@click.option("--matrix-file", default=None, type=click.Path(exists=True))
@click.option("--param-files", multiple=True, type=click.Path(exists=True))
@click.option("--hmat-file", default=None, type=click.Path(exists=True))
@click.option("--bath-file", default=None, type=click.Path(exists=True))
@click.option("--dhmat-files", multiple=True, type=click.Path(exists=True))
def cmd_spectrum(model, sets, matrix_file, param_files, hmat_file, bath_file, dhmat_files):
    """Eigenvalue / relaxation-rate summary; JSON to stdout."""
    adapter = _make_adapter(model, matrix_file, param_files, hmat_file, bath_file, dhmat_files)
    try:
        spec = adapter.spectrum(_parse_sets(sets))
    except NhgeoError as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        sys.exit(3)
    click.echo(json.dumps({"model": adapter.name, "spectrum": spec}, indent=2))


def _axis_points(axis: dict) -> np.ndarray:
    steps = int(axis["steps"])
    if steps < 2:
        raise click.UsageError("axis steps must be >= 2")
    return np.linspace(float(axis["min"]), float(axis["max"]), steps)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@main.command("sweep")
@click.option("--config", default=None, type=click.Path(exists=True),
              help="JSON scan specification")
@click.option("--model", default=None)
@click.option("--set", "sets", multiple=True)
@click.option("--axis", "axes_opt", multiple=True,
              help="axis spec name:min:max:steps (one or two)")
@click.option("--tensors", default=None)
@click.option("--state", default=None)
@click.option("--mu-reg", type=float, default=None)
@click.option("--output", default=None, type=click.Path())
@click.option("--format", "fmt", default=None, type=click.Choice(["csv", "json"]))
@click.option("--threads", default=None, type=int,
              help="worker threads (default NHGEO_THREADS or core count)")
def cmd_sweep(config, model, sets, axes_opt, tensors, state, mu_reg, output, fmt, threads):
    """Grid sweep over one or two named parameters; deterministic CSV/JSON."""
    spec = {}
    if config:
        with open(config) as fh:
            spec = json.load(fh)
    model = model or spec.get("model")
    if model not in MODELS:
        raise click.UsageError("sweep supports models: " + ", ".join(MODELS))
    adapter = MODELS[model]()
    fixed = dict(spec.get("params", {}))
    fixed.update(_parse_sets(sets))
    axes = list(spec.get("axes", []))
    for a in axes_opt:
        parts = a.split(":")
        if len(parts) != 4:
            raise click.UsageError("--axis expects name:min:max:steps")
        axes.append({"name": parts[0], "min": float(parts[1]),
                     "max": float(parts[2]), "steps": int(parts[3])})
    if not 1 <= len(axes) <= 2:
        raise click.UsageError("need one or two axes")
    for a in axes:
        if a["name"] not in adapter.sweepable:
            raise click.UsageError(f"axis {a['name']!r} not sweepable for {model}")
        if a["name"] in fixed:
            raise click.UsageError(f"axis {a['name']!r} also set as fixed parameter")
    kinds = [k.strip() for k in (tensors or spec.get("tensors", "zeta")
                                 if isinstance(spec.get("tensors", "zeta"), str)
                                 else ",".join(spec.get("tensors"))).split(",") if k.strip()]
    for k in kinds:
        if k not in TENSOR_KINDS:
            raise click.UsageError(f"unknown tensor kind {k!r}")
    state = state if state is not None else spec.get("state")
    mu_reg = mu_reg if mu_reg is not None else float(spec.get("mu_reg", 0.0))
    output = output or spec.get("output")
    if output is None:
        raise click.UsageError("sweep needs --output (or 'output' in the config)")
    fmt = fmt or spec.get("format", "csv")

    grids = [_axis_points(a) for a in axes]
    names = [a["name"] for a in axes]
    if len(grids) == 1:
        points = [(i,) for i in range(len(grids[0]))]
    else:
        points = [(i, j) for i in range(len(grids[0])) for j in range(len(grids[1]))]

    dirs = adapter.directions
    columns = list(names)
    for kind in kinds:
        for a in dirs:
            for b in dirs:
                columns.append(f"{kind}_{a}{b}_re")
                columns.append(f"{kind}_{a}{b}_im")
    columns.append("status")

    def evaluate(idx):
        values = dict(fixed)
        for name, grid, i in zip(names, grids, idx):
            values[name] = float(grid[i])
        row = [float(grid[i]) for grid, i in zip(grids, idx)]
        try:
            mats = adapter.tensors(values, kinds, state, mu_reg)
            for kind in kinds:
                m = mats[kind]
                for a in range(len(dirs)):
                    for b in range(len(dirs)):
                        row.extend([m[a, b].real, m[a, b].imag])
            row.append("ok")
        except (NhgeoError, FloatingPointError) as exc:
            row.extend([np.nan] * (2 * len(kinds) * len(dirs) ** 2))
            row.append(type(exc).__name__)
        return row

    nthreads = threads or int(os.environ.get("NHGEO_THREADS", "0")) or (os.cpu_count() or 1)
    if nthreads > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            rows = list(pool.map(evaluate, points))
    else:
        rows = [evaluate(idx) for idx in points]

    meta_items = [f"model={model}"]
    meta_items += [f"{k}={v}" for k, v in sorted(fixed.items())]
    meta_items += [f"axis={a['name']}:{a['min']}:{a['max']}:{a['steps']}" for a in axes]
    meta_items += [f"tensors={','.join(kinds)}", f"state={state}", f"mu_reg={mu_reg}"]
    header = f"# nhgeo v{__version__} " + " ".join(meta_items)

    if fmt == "csv":
        lines = [header, ",".join(columns)]
        for row in rows:
            cells = [_fmt(v) if isinstance(v, float) else str(v) for v in row]
            lines.append(",".join(cells))
        with open(output, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        payload = {
            "meta": {"version": __version__, "model": model, "params": fixed,
                     "axes": axes, "tensors": kinds, "state": state, "mu_reg": mu_reg},
            "columns": columns,
            "rows": [[None if isinstance(v, float) and np.isnan(v) else v for v in row]
                     for row in rows],
        }
        with open(output, "w") as fh:
            json.dump(payload, fh, indent=1, allow_nan=False)
    click.echo(f"wrote {len(rows)} rows to {output}")


@main.command("verify")
@click.option("--level", default="quick", type=click.Choice(["quick", "full"]))
@click.option("--only", default=None, help="comma-separated check names")
def cmd_verify(level, only):
    """Run the self-verification suite; exit 0 iff all checks pass."""
    from . import verify as verify_mod

    names = [n.strip() for n in only.split(",")] if only else None
    results = verify_mod.run(level, names=names)
    all_ok = True
    for r in results:
        mark = "PASS" if r.ok else "FAIL"
        click.echo(f"{mark} {r.name:26s} {r.seconds:7.2f}s  {r.detail}")
        all_ok &= r.ok
    click.echo(f"{'all checks passed' if all_ok else 'FAILURES present'} ({level})")
    sys.exit(0 if all_ok else 1)


if __name__ == "__main__":
    main()
