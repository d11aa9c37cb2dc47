"""Scenario runner: each scenario turns one config into data files.

Scenarios only orchestrate. The numerics live in the modules; this file
builds operators from the config, fans jobs out through the pool, and
hands every result to the Recorder so that it ends up in the manifest.
"""

import functools

import numpy as np
import scipy.linalg
import tqdm

from . import core
from . import dynamics
from . import errors
from . import gbz
from . import greens
from . import hierarchy
from . import lattice
from . import laurent
from . import outputs
from . import schema
from . import spectra

SPECTRUM_COLUMNS = ("re", "im", "source_tag")
GBZ_COLUMNS = ("re_beta", "im_beta", "re_energy", "im_energy", "branch")


def _symbol(value):
    if isinstance(value, str):
        return laurent.preset(value)
    return laurent.LaurentOperator.from_terms(value)


def symbols_from(config):
    x = _symbol(config.model.x)
    y = config.model.y
    y = x if y == "same" else _symbol(y)
    return x, y


def gauge_for(config, op):
    gauge = config.model.gauge
    if gauge == "auto":
        return gbz.gauge_estimate(op)
    if gauge == "none":
        return None
    return float(gauge)


def hop_range_from(config):
    x, y = symbols_from(config)
    return int(config.geometry.hop_range) or max(x.hop_range, y.hop_range, 1)


def chain(op, L, bc="open"):
    return lattice.build_1d(op, L, bc)


def planar(symbols, kind, R, cut, hop_range, L):
    g = lattice.make_geometry(kind, L, R or None, cut, hop_range)
    return lattice.build_2d(symbols, g)


def corner_perturbed(clean, delta):
    return lattice.add_onsite(clean, lattice.corner_onsite(clean.geometry, delta))


class Run:
    """Everything a scenario shares: config, pool, logger, timer, recorder."""

    def __init__(self, config):
        self.config = config
        self.recorder = outputs.Recorder(config.out_dir, config, config.svg)
        metrics = core.logger.JSONLOutput(config.out_dir, parallel=False)
        if metrics.filename.exists():
            metrics.filename.remove()
        self.logger = core.Logger([
            core.logger.TerminalOutput(name=config.scenario),
            metrics,
        ])
        self.recorder.register(metrics.filename.name, "jsonl")
        self.pool = core.Pool(config.strategy, config.threads or None)
        self.timer = core.Timer()
        self.job = None
        self.step = 0

    @property
    def planar(self):
        return self.config.geometry.kind != "interval"

    @property
    def symbols(self):
        x, y = symbols_from(self.config)
        return laurent.SeparableSymbol(x, y) if self.planar else laurent.SeparableSymbol(x)

    @property
    def mu(self):
        parts = [gauge_for(self.config, p) for p in self.symbols.parts]
        if any(m is None for m in parts):
            return None
        return parts[0] if len(parts) == 1 else tuple(parts)

    def builder(self):
        """Picklable L -> operator for the configured geometry."""
        symbols = self.symbols
        if not self.planar:
            return functools.partial(chain, symbols.parts[0])
        geometry = self.config.geometry
        return functools.partial(
            planar, symbols, geometry.kind, geometry.R, geometry.cut,
            hop_range_from(self.config),
        )

    def periodic(self, L):
        parts = [chain(p, L, "periodic") for p in self.symbols.parts]
        return parts[0] if len(parts) == 1 else lattice.kron_sum_2d(*parts)

    def log(self, metrics, prefix=None):
        metrics = {
            k: np.nan if v is None else v for k, v in metrics.items()
        }
        self.logger.add(metrics, prefix, step=self.step)
        self.logger.write()
        self.step += 1

    def close(self):
        self.logger.close()
        self.pool.close()


def _grid(re_range, im_range, shape):
    re = np.linspace(*re_range, int(shape[0]))
    im = np.linspace(*im_range, int(shape[1]))
    return re, im, (re[:, None] + 1j * im[None, :]).ravel()


def _clouds(run, prefix, clouds):
    for name, cloud in clouds.items():
        run.recorder.csv(f"{prefix}_{name}.csv", SPECTRUM_COLUMNS, cloud.rows(name))


def fig1_spectra(run):
    """Spectra of H[h]^2 and H[h^2] next to h^2 on the GBZs of h and h^2."""
    config = run.config
    op = run.symbols.parts[0]
    sq = laurent.product(op, op)
    L = config.spectra.L
    mu, mu_sq = gauge_for(config, op), gauge_for(config, sq)
    H = chain(op, L)
    run.job = "eig"
    with run.timer.scope("eig"):
        found = run.pool.map(spectra.eig, {
            "h": (H, mu, "H[h]"),
            "matrix_square": (greens.matrix_square(H), mu, "H[h]^2"),
            "symbol_square": (chain(sq, L), mu_sq, "H[h^2]"),
        })
    found["bloch"] = spectra.bloch_spectrum(op, config.spectra.bloch_grid)
    _clouds(run, "spectrum", found)

    run.job = "gbz"
    with run.timer.scope("gbz"):
        clouds = {
            "h": gbz.gbz_1d(op, found["h"], config.gbz.tol, run.pool),
            "symbol_square": gbz.gbz_1d(sq, found["symbol_square"], config.gbz.tol, run.pool),
        }
        if config.gbz.scan:
            values = found["symbol_square"].values
            frame = (
                (values.real.min(), values.real.max()),
                (values.imag.min(), values.imag.max()),
            )
            scan = gbz.scan_energy_grid(sq, *frame, config.gbz.scan_shape, config.gbz.tol, run.pool)
            clouds["symbol_square"] = clouds["symbol_square"].merge(scan)
        if config.gbz.densify:
            clouds = {k: gbz.densify(c, config.gbz.densify) for k, c in clouds.items()}
    for name, cloud in clouds.items():
        run.recorder.csv(f"gbz_{name}.csv", GBZ_COLUMNS, cloud.rows())

    nonbloch = {}
    for name, cloud in clouds.items():
        if len(cloud):
            nonbloch[name] = gbz.nonbloch_spectrum(sq, cloud, f"h^2 on GBZ[{name}]")
    _clouds(run, "nonbloch", nonbloch)

    metrics = {
        "gbz_h": len(clouds["h"]),
        "gbz_symbol_square": len(clouds["symbol_square"]),
        "max_imag_matrix_square": found["matrix_square"].max_imag,
        "max_imag_symbol_square": found["symbol_square"].max_imag,
    }
    if "h" in nonbloch:
        metrics["hausdorff_matrix_square"] = spectra.hausdorff(
            found["matrix_square"], nonbloch["h"]
        )
    if "symbol_square" in nonbloch:
        metrics["hausdorff_symbol_square"] = spectra.hausdorff(
            found["symbol_square"], nonbloch["symbol_square"]
        )
    run.log(metrics, "fig1_spectra")
    run.recorder.scatter("spectra.svg", {
        "H[h]^2": found["matrix_square"].values,
        "H[h^2]": found["symbol_square"].values,
    }, title=f"L = {L}")
    run.recorder.scatter("gbz.svg", {k: c.beta for k, c in clouds.items()}, title="GBZ")


def _lambda_map(run):
    config = run.config
    op = run.symbols.parts[0]
    knobs = config.greens
    H = chain(op, knobs.L)
    if knobs.mechanism == "squared":
        H = greens.matrix_square(H)
    with run.timer.scope("frame"):
        values = spectra.eig(H, gauge_for(config, op)).values
    re_range = (values.real.min() - knobs.pad, values.real.max() + knobs.pad)
    im_range = (values.imag.min() - knobs.pad, values.imag.max() + knobs.pad)
    re, im, omegas = _grid(re_range, im_range, knobs.grid)
    windows = (tuple(knobs.window_plus), tuple(knobs.window_minus))
    run.job = "lambda_map"
    with run.timer.scope("lambda_map"):
        lmap = greens.lambda_map(
            op, omegas, knobs.L, knobs.mechanism, knobs.source, windows,
            knobs.margin, run.pool,
        )
    return re, im, lmap


def fig1_lambda_map(run):
    """Fitted against predicted lambda+- over a frame around the spectrum."""
    re, im, lmap = _lambda_map(run)
    rows = []
    for omega, profile, pred in zip(lmap.omegas, lmap.profiles, lmap.predictions):
        fitted = (np.nan,) * 4 + ("none",)
        if profile is not None:
            fitted = (
                profile.lambda_plus, profile.lambda_minus,
                profile.r2_plus, profile.r2_minus, profile.shape,
            )
        predicted = (np.nan, np.nan) if pred is None else (pred.lambda_plus, pred.lambda_minus)
        rows.append((omega.real, omega.imag, *fitted, *predicted))
    run.recorder.csv("lambda_map.csv", (
        "re", "im", "lambda_plus", "lambda_minus", "r2_plus", "r2_minus",
        "shape", "pred_plus", "pred_minus",
    ), rows)
    agreement = lmap.agreement()
    representatives = lmap.representatives()
    run.recorder.json("lambda_summary.json", {
        "L": lmap.L,
        "mechanism": run.config.greens.mechanism,
        "agreement": agreement,
        "representatives": representatives,
    })
    run.log(agreement, "fig1_lambda_map")
    difference = lmap.vshape_map().values[:, 0].reshape(len(re), len(im))
    run.recorder.heatmap(
        "lambda_map.svg", re, im, difference,
        title="fitted lambda+ - lambda-", label="lambda+ - lambda-",
    )
    return lmap


def fig1_profiles(run):
    """One Green's function profile per shape class of the lambda map."""
    _, _, lmap = _lambda_map(run)
    knobs = run.config.greens
    H = chain(run.symbols.parts[0], knobs.L)
    if knobs.mechanism == "squared":
        H = greens.matrix_square(H)
    windows = (tuple(knobs.window_plus), tuple(knobs.window_minus))
    summary = {}
    for shape, omega in sorted(lmap.representatives().items()):
        run.job = f"profile {shape}"
        profile = greens.greens_profile(H, omega, knobs.source, windows, knobs.margin)
        run.recorder.csv(f"profile_{shape}.csv", ("x", "log_abs_g"), profile.rows())
        summary[shape] = {
            "omega": omega,
            "lambda_plus": profile.lambda_plus,
            "lambda_minus": profile.lambda_minus,
            "r2_plus": profile.r2_plus,
            "r2_minus": profile.r2_minus,
        }
        run.log({
            "lambda_plus": profile.lambda_plus,
            "lambda_minus": profile.lambda_minus,
        }, f"profile_{shape}")
    run.recorder.json("profiles.json", summary)


def fig2_geometry_spectra(run):
    """Open spectra of several geometries against the exact square spectrum."""
    config = run.config
    if not run.planar:
        raise ValueError("fig2_geometry_spectra needs a planar geometry kind.")
    symbols = run.symbols
    hx, hy = symbols.parts
    L = config.geometry.L
    hop = hop_range_from(config)
    mu = run.mu
    square = lattice.square(L, hop_range=hop)
    clean = lattice.build_2d(symbols, square)
    operators = {
        "square": clean,
        "corner_cut": lattice.build_2d(symbols, lattice.corner_cut(L, config.geometry.cut, hop)),
        "disk": lattice.build_2d(symbols, lattice.disk(L, config.geometry.R or None, hop)),
        "boundary_disorder": lattice.add_onsite(clean, lattice.boundary_disorder(
            square, config.geometry.disorder, config.seed,
        )),
    }
    run.job = "eig"
    with run.timer.scope("eig"):
        found = run.pool.map(spectra.eig, {
            name: (H, mu, name) for name, H in operators.items()
        })
        axis_mu = (None, None) if mu is None else mu
        exact = spectra.separable_spectrum_2d(
            spectra.eig(chain(hx, L), axis_mu[0]), spectra.eig(chain(hy, L), axis_mu[1])
        )
    found["bloch"] = spectra.bloch_spectrum(symbols, config.spectra.bloch_grid)
    found["separable"] = exact
    _clouds(run, "spectrum", found)

    metrics = {}
    for name in operators:
        metrics[name] = spectra.cloud_metrics(found[name], exact)
        run.log(metrics[name], name)
    metrics["noise_floor"] = spectra.noise_floor(found["square"], exact, clean.norm_inf)
    run.recorder.json("geometry_metrics.json", metrics)
    run.recorder.scatter("geometry_spectra.svg", {
        name: found[name].values for name in operators
    }, title=f"L = {L}")

    knobs = config.hierarchy
    re, im, omegas = _grid(knobs.re_range, knobs.im_range, knobs.grid)
    run.job = "amoeba"
    with run.timer.scope("amoeba"):
        verdicts = hierarchy.hierarchy_classify(
            symbols, omegas, pool=run.pool, **_search(config),
        )
    run.recorder.csv("amoeba_map.csv", ("re", "im", "zone"), [
        (v.omega.real, v.omega.imag, v.zone) for v in verdicts
    ])
    inside = np.array([v.zone == "inside_amoeba" for v in verdicts], dtype=float)
    run.recorder.heatmap(
        "amoeba_map.svg", re, im, inside.reshape(len(re), len(im)),
        title="inside amoebic spectrum", label="inside",
    )


def _search(config):
    knobs = config.hierarchy
    return {
        "mu_range": knobs.mu_range,
        "points": knobs.points,
        "levels": knobs.levels,
        "zoom": knobs.zoom,
        "eps": knobs.eps,
    }


def fig2_vshape_map(run):
    """ln I(omega) against L on a frequency grid and at the probe frequencies."""
    knobs = run.config.vshape
    builder = run.builder()
    sizes = tuple(knobs.sizes)
    re, im, omegas = _grid(knobs.re_range, knobs.im_range, knobs.grid)
    run.job = "vshape_map"
    with run.timer.scope("vshape_map"):
        vmap = greens.vshape_map(builder, omegas, sizes, run.pool, run.mu)
    run.recorder.csv("vshape_map.csv", ("re", "im", "log_proxy", "L"), vmap.rows())
    slopes = vmap.slopes
    if slopes is not None:
        run.recorder.csv("vshape_slopes.csv", ("re", "im", "slope"), [
            (w.real, w.imag, s) for w, s in zip(vmap.omegas, slopes)
        ])
        run.recorder.heatmap(
            "vshape_slopes.svg", re, im, slopes.reshape(len(re), len(im)),
            title="d ln I / d L", label="slope",
        )
        finite = slopes[np.isfinite(slopes)]
        run.log({
            "max_slope": finite.max() if len(finite) else np.nan,
            "growing": int((finite > 0).sum()),
        }, "vshape")

    run.job = "vshape_probes"
    probes = [complex(*p) for p in knobs.probes]
    probe_map = greens.vshape_map(builder, probes, sizes, run.pool, run.mu)
    summary = []
    probe_slopes = probe_map.slopes
    for i, omega in enumerate(probes):
        summary.append({
            "omega": omega,
            "log_proxy": probe_map.values[i],
            "slope": None if probe_slopes is None else probe_slopes[i],
        })
    run.recorder.json("vshape_probes.json", {"sizes": sizes, "probes": summary})


def fig2_greens_map(run):
    """Full Green's column at one frequency plus profile cuts through the source."""
    config = run.config
    knobs = config.greens
    omega = complex(*knobs.omega)
    if run.planar:
        H = run.builder()(config.geometry.L)
        source = H.geometry.center
    else:
        H = chain(run.symbols.parts[0], knobs.L)
        source = (knobs.source,)
    g = H.geometry
    run.job = "greens_column"
    with run.timer.scope("greens_column"):
        column = greens.greens_column(H, source, omega)
    values = greens.log_abs(column)
    if not run.planar:
        run.recorder.csv("greens_map.csv", ("x", "log_abs_g"), [
            (*site, v) for site, v in zip(g.sites, values)
        ])
        windows = (tuple(knobs.window_plus), tuple(knobs.window_minus))
        profile = greens.greens_profile(H, omega, knobs.source, windows, knobs.margin)
        cuts = {"x": profile}
    else:
        run.recorder.csv("greens_map.csv", ("x", "y", "log_abs_g"), [
            (*site, v) for site, v in zip(g.sites, values)
        ])
        Lx, Ly = g.shape
        grid = np.full((Lx, Ly), np.nan)
        for site, v in zip(g.sites, values):
            grid[site[0] - 1, site[1] - 1] = v
        run.recorder.heatmap(
            "greens_map.svg", np.arange(1, Lx + 1), np.arange(1, Ly + 1), grid,
            title=f"ln|G(r, r0)| at omega = {omega}", label="ln|G|",
            xlabel="x", ylabel="y",
        )
        cuts = {}
        for axis in ("x", "y", "antidiagonal"):
            run.job = f"cut {axis}"
            cuts[axis] = greens.profile_cut(
                H, omega, source, axis, knobs.pad_cut, knobs.margin
            )
            columns = ("x", "y", "log_abs_g")
            run.recorder.csv(f"cut_{axis}.csv", columns, cuts[axis].rows())
    summary = {}
    for axis, profile in cuts.items():
        summary[axis] = {
            "lambda_plus": profile.lambda_plus,
            "lambda_minus": profile.lambda_minus,
            "r2_plus": profile.r2_plus,
            "r2_minus": profile.r2_minus,
            "shape": profile.shape,
        }
        run.log({
            "lambda_plus": profile.lambda_plus,
            "lambda_minus": profile.lambda_minus,
        }, f"cut_{axis}")
    run.recorder.json("greens_cuts.json", {"omega": omega, "source": source, "cuts": summary})


def fig2_dynamics(run):
    """Probe amplitude growth with and without boundaries and a corner term."""
    config = run.config
    knobs = config.dynamics
    clean = run.builder()(knobs.L)
    operators = {
        "open": clean,
        "periodic": run.periodic(knobs.L),
        "corner": corner_perturbed(clean, knobs.delta),
    }
    source = clean.geometry.center
    dt = knobs.dt or None
    run.job = "evolve"
    with run.timer.scope("evolve"):
        trajectories = run.pool.map(dynamics.evolve, {
            name: (H, source, knobs.T, dt) for name, H in operators.items()
        })
    with run.timer.scope("eig"):
        abscissa = run.pool.map(_max_imag, {
            name: (H, None if name == "periodic" else run.mu)
            for name, H in operators.items()
        })
    summary = {}
    for name, tr in trajectories.items():
        run.job = f"growth {name}"
        run.recorder.csv(
            f"trajectory_{name}.csv", ("t", "re_amp", "im_amp", "norm"), tr.rows()
        )
        summary[name] = {
            "growth_rate": dynamics.growth_rate(tr),
            "norm_growth_rate": dynamics.growth_rate(tr, observable="norm"),
            "max_imag": abscissa[name],
        }
        if knobs.halving:
            summary[name].update(dynamics.halving_check(operators[name], source, knobs.T, dt))
        run.log(summary[name], name)
    run.recorder.json("dynamics_summary.json", {
        "L": knobs.L, "T": knobs.T, "probe": source, "runs": summary,
    })
    run.recorder.scatter("dynamics.svg", {
        name: tr.times + 1j * greens.log_abs(tr.probe_amp)
        for name, tr in trajectories.items()
    }, title="probe amplitude", xlabel="t", ylabel="ln|amp|")


def _max_imag(H, mu):
    return spectra.eig(H, mu).max_imag


def fig2_delta_sweep(run):
    """Corner perturbation strength at which the open spectrum turns complex."""
    config = run.config
    knobs = config.sweep
    if not run.planar:
        raise ValueError("fig2_delta_sweep needs a planar geometry kind.")
    builder = run.builder()
    mu = run.mu
    axis_mu = (None, None) if mu is None else mu
    deltas = np.concatenate([
        [0.0], np.logspace(np.log10(knobs.delta_min), np.log10(knobs.delta_max), knobs.count)
    ])
    results = []
    for L in tqdm.tqdm(knobs.sizes, desc="sweep", leave=False):
        run.job = f"L={L}"
        clean = builder(L)
        hx, hy = run.symbols.parts
        with run.timer.scope("sweep"):
            reference = spectra.separable_spectrum_2d(
                spectra.eig(chain(hx, L), axis_mu[0]),
                spectra.eig(chain(hy, L), axis_mu[1]),
            )
            result = dynamics.delta_sweep(
                functools.partial(corner_perturbed, clean), deltas, reference,
                mu, run.pool, L,
            )
        results.append(result)
        run.recorder.csv(f"sweep_L{L}.csv", ("delta", "max_imag"), result.rows())
        run.log(result.summary(), "sweep")
    scaling = dynamics.delta_c_scaling(results)
    run.recorder.json("sweep_summary.json", {
        "sweeps": [r.summary() for r in results],
        "scaling": scaling,
    })
    run.recorder.scatter("sweep.svg", {
        f"L = {r.size}": np.log10(r.deltas[1:]) + 1j * np.log10(
            np.maximum(np.abs(r.max_imag[1:]), 1e-300)
        )
        for r in results
    }, title="max Im E", xlabel="log10 delta", ylabel="log10 max Im E")


def hierarchy_table(run):
    """Zones of a frequency grid, spectral enclosure and fragile-mode scans."""
    config = run.config
    knobs = config.hierarchy
    symbols = run.symbols
    builder = run.builder()
    re, im, omegas = _grid(knobs.re_range, knobs.im_range, knobs.grid)
    sizes = tuple(knobs.sizes) if knobs.cross_check else ()
    run.job = "classify"
    with run.timer.scope("classify"):
        verdicts = hierarchy.hierarchy_classify(
            symbols, omegas, builder if sizes else None, sizes,
            config.greens.margin, run.pool, **_search(config),
        )
    _verdict_table(run, "hierarchy.csv", verdicts, symbols.dim)
    counts = {zone: sum(v.zone == zone for v in verdicts) for zone in hierarchy.ZONES}
    run.log(counts, "zones")
    run.recorder.scatter("hierarchy.svg", {
        zone: [v.omega for v in verdicts if v.zone == zone] for zone in hierarchy.ZONES
    }, title="zones")

    run.job = "enclosure"
    H = builder(knobs.L)
    values = np.sort_complex(spectra.eig(H, run.mu).values)
    if knobs.enclosure and len(values) > knobs.enclosure:
        values = values[np.linspace(0, len(values) - 1, knobs.enclosure).astype(int)]
    with run.timer.scope("enclosure"):
        enclosed = hierarchy.hierarchy_classify(
            symbols, values, pool=run.pool, **_search(config)
        )
    outside = [v.omega for v in enclosed if v.zone != "inside_amoeba"]
    run.log({"checked": len(enclosed), "outside_amoeba": len(outside)}, "enclosure")

    scans, bounds = [], []
    candidates = [v for v in verdicts if v.zone == "outside_amoeba_inside_bloch"]
    for verdict in candidates[:knobs.probes]:
        run.job = f"fragile {verdict.omega}"
        plain = hierarchy.fragile_mode_scan(builder, verdict.omega, knobs.sizes, None, run.pool)
        gauged = hierarchy.fragile_mode_scan(
            builder, verdict.omega, knobs.sizes, verdict.mu_star, run.pool
        )
        scans.append({
            "omega": verdict.omega,
            "mu_star": verdict.mu_star,
            "sizes": plain.sizes,
            "sigma_min": plain.sigma_min,
            "decay_rate": plain.decay_rate,
            "sigma_min_gauged": gauged.sigma_min,
            "decay_rate_gauged": gauged.decay_rate,
        })
        try:
            bound = hierarchy.gauge_bound_check(H, symbols, verdict.omega, verdict.mu_star)
        except (errors.InvalidCertificateError, errors.NearSpectrumError) as e:
            bound = {"bound_holds": None, "error": str(e)}
        bounds.append({"omega": verdict.omega, "mu_star": verdict.mu_star, **bound})
    counts_enclosure = {
        zone: sum(v.zone == zone for v in enclosed) for zone in hierarchy.ZONES
    }
    run.recorder.json("hierarchy_summary.json", {
        "zones": counts,
        "zones_present": [zone for zone, count in counts.items() if count],
        "enclosure": {
            "L": knobs.L,
            "checked": len(enclosed),
            "zones": counts_enclosure,
            "outside_amoeba": outside,
        },
        "fragile_mode_scans": scans,
        "gauge_bounds": bounds,
    })


def _verdict_table(run, name, verdicts, dim):
    axes = "xy"[:dim]
    columns = (
        "re", "im", "zone",
        *(f"winding_{a}" for a in axes), *(f"mu_{a}" for a in axes),
        "min_dist_mu0", "min_dist_mu_star", "proxy_slope", "consistent",
    )
    rows = []
    for v in verdicts:
        windings = v.windings_mu0 or (None,) * dim
        mu = v.mu_star or (None,) * dim
        c = v.certificates
        rows.append((
            v.omega.real, v.omega.imag, v.zone, *windings, *mu,
            c.get("min_dist_mu0"), c.get("min_dist_mu_star"),
            c.get("proxy_slope"), c.get("consistent"),
        ))
    run.recorder.csv(name, columns, rows)


def custom(run):
    """Spectra of the configured model followed by its zone table."""
    if run.planar:
        fig2_geometry_spectra(run)
    else:
        fig1_spectra(run)
    hierarchy_table(run)


SCENARIOS = {
    "fig1_spectra": fig1_spectra,
    "fig1_lambda_map": fig1_lambda_map,
    "fig1_profiles": fig1_profiles,
    "fig2_geometry_spectra": fig2_geometry_spectra,
    "fig2_vshape_map": fig2_vshape_map,
    "fig2_greens_map": fig2_greens_map,
    "fig2_dynamics": fig2_dynamics,
    "fig2_delta_sweep": fig2_delta_sweep,
    "hierarchy_table": hierarchy_table,
    "custom": custom,
}
assert set(SCENARIOS) == set(schema.SCENARIOS)

MODULE_ERRORS = (ValueError, ArithmeticError, KeyError, scipy.linalg.LinAlgError)


def run_scenario(config):
    """Validates the config, runs its scenario and returns the manifest."""
    if not isinstance(config, core.Config):
        config = core.Config(config)
    diagnostics = schema.validate_config(config)
    if diagnostics:
        raise errors.ConfigError(diagnostics)
    run = Run(config)
    core.print_(f"Scenario {config.scenario} -> {config.out_dir}", "bold")
    try:
        with run.timer.scope(config.scenario):
            SCENARIOS[config.scenario](run)
    except MODULE_ERRORS as e:
        raise errors.ScenarioError(
            f"Scenario {config.scenario} failed at job {run.job!r}: "
            f"{type(e).__name__}: {e}"
        ) from e
    finally:
        run.close()
    return run.recorder.manifest(config.scenario, config.seed, run.timer.stats())
