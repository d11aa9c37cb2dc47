"""Wavepacket evolution under i d/dt psi = H psi and the corner-term sweep.

Steps are classical fourth-order Runge-Kutta. The default step sits well
below the stability bound so that halving it moves the final probe
amplitude by less than 1e-6 relative.
"""

import dataclasses
import math

import numpy as np
import scipy.sparse
from scipy import stats

from . import errors
from . import spectra


@dataclasses.dataclass(frozen=True)
class Trajectory:

    times: np.ndarray
    probe_amp: np.ndarray
    probe: tuple
    norm_trace: np.ndarray

    def __post_init__(self):
        assert len(self.times) == len(self.probe_amp) == len(self.norm_trace)
        assert np.all(np.diff(self.times) > 0), "Times must increase."

    def __len__(self):
        return len(self.times)

    def rows(self):
        return [
            (float(t), float(a.real), float(a.imag), float(n))
            for t, a, n in zip(self.times, self.probe_amp, self.norm_trace)
        ]


STEP_BOUND = 0.1
DEFAULT_STEP = 0.025


def max_step(H):
    return STEP_BOUND / max(H.norm_inf, 1e-300)


def default_step(H):
    return DEFAULT_STEP / max(H.norm_inf, 1e-300)


def evolve(H, psi0, T=60.0, dt=None, probe=None):
    """Integrates i d/dt psi = H psi with the classical fourth-order scheme.

    `psi0` is a site or a full vector. The step is shortened so that an
    integer number of steps reaches T exactly.
    """
    limit = max_step(H)
    dt = default_step(H) if dt is None else dt
    if dt > limit * (1 + 1e-12):
        raise errors.StepSizeError(
            f"Step {dt:.3g} exceeds 0.1 / |H|_inf = {limit:.3g}."
        )
    g = H.geometry
    if np.ndim(psi0) == 0 or (np.ndim(psi0) == 1 and len(psi0) == g.dim):
        start = np.zeros(H.dim, dtype=complex)
        start[g.row(psi0)] = 1.0
        probe = psi0 if probe is None else probe
    else:
        start = np.asarray(psi0, dtype=complex)
        assert start.shape == (H.dim,), start.shape
        probe = g.center if probe is None else probe
    row = g.row(probe)
    steps = math.ceil(T / dt - 1e-9)
    dt = T / steps
    every = max(1, int(T / (1000 * dt)))
    A = scipy.sparse.csr_matrix(-1j * H.entries)
    psi = start
    times, amps, norms = [0.0], [psi[row]], [np.linalg.norm(psi)]
    for step in range(1, steps + 1):
        k1 = A @ psi
        k2 = A @ (psi + 0.5 * dt * k1)
        k3 = A @ (psi + 0.5 * dt * k2)
        k4 = A @ (psi + dt * k3)
        psi = psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if step % every == 0 or step == steps:
            times.append(step * dt)
            amps.append(psi[row])
            norms.append(np.linalg.norm(psi))
    return Trajectory(
        np.array(times), np.array(amps), tuple(g.sites[row]), np.array(norms)
    )


def growth_rate(tr, window=None, min_samples=50, observable="probe"):
    """Slope of ln|<probe|psi(t)>| over `window`, by default the last third.

    With observable="norm" the slope of ln|psi(t)| is fitted instead. On a
    torus the probe amplitude sums wrapped images and beats, while the norm
    follows the spectral abscissa smoothly.
    """
    assert observable in ("probe", "norm"), observable
    if window is None:
        window = (tr.times[-1] * 2 / 3, tr.times[-1])
    mask = (tr.times >= window[0]) & (tr.times <= window[1])
    if mask.sum() < min_samples:
        raise errors.FitWindowError(
            f"Window {window} holds {mask.sum()} samples, fewer than {min_samples}."
        )
    trace = tr.probe_amp if observable == "probe" else tr.norm_trace
    amp = np.abs(trace[mask])
    if np.any(amp < 1e-280):
        raise errors.AmplitudeUnderflowError(f"Probe amplitude underflows in {window}.")
    return float(stats.linregress(tr.times[mask], np.log(amp)).slope)


def halving_check(H, psi0, T=60.0, dt=None, probe=None):
    """Compares a run against one with half the step size."""
    dt = default_step(H) if dt is None else dt
    coarse = evolve(H, psi0, T, dt, probe)
    fine = evolve(H, psi0, T, dt / 2, probe)
    a, b = coarse.probe_amp[-1], fine.probe_amp[-1]
    return {
        "amp_rel_diff": float(abs(a - b) / max(abs(b), 1e-300)),
        "rate_diff": abs(growth_rate(coarse) - growth_rate(fine)),
    }


@dataclasses.dataclass(frozen=True)
class SweepResult:

    deltas: np.ndarray
    max_imag: np.ndarray
    noise_floor: float
    delta_c: float = None
    size: int = None

    def rows(self):
        return [(float(d), float(m)) for d, m in zip(self.deltas, self.max_imag)]

    def summary(self):
        return {
            "size": self.size,
            "noise_floor": self.noise_floor,
            "delta_c": self.delta_c,
        }


def _max_imag(builder, delta, mu):
    return spectra.eig(builder(delta), mu).max_imag


def delta_sweep(builder, deltas, reference=None, mu=None, pool=None, size=None):
    """Largest imaginary part of the spectrum of builder(delta) per delta.

    The first delta must be 0. Its spectrum, compared with the exactly known
    `reference` cloud, fixes the noise floor; delta_c is the first delta
    whose maximal imaginary part exceeds ten times that floor.
    """
    deltas = np.asarray(deltas, dtype=float)
    if deltas[0] != 0 or np.any(deltas < 0) or np.any(np.diff(deltas) <= 0):
        raise ValueError("Deltas must start at 0 and increase strictly.")
    clean = builder(0.0)
    dense = spectra.eig(clean, mu)
    jobs = {i: (builder, d, mu) for i, d in enumerate(deltas) if i}
    if pool is None:
        found = {i: _max_imag(*args) for i, args in jobs.items()}
    else:
        found = pool.map(_max_imag, jobs)
    found[0] = dense.max_imag
    max_imag = np.array([found[i] for i in range(len(deltas))])
    if reference is None:
        reference = spectra.SpectrumCloud(dense.values.real)
    floor = spectra.noise_floor(dense, reference, clean.norm_inf)
    above = np.nonzero(max_imag[1:] > 10 * floor)[0]
    delta_c = float(deltas[1:][above[0]]) if len(above) else None
    return SweepResult(deltas, max_imag, floor, delta_c, size)


def delta_c_scaling(results):
    """Linear fit of ln delta_c against size over sweeps that found one."""
    points = [(r.size, np.log(r.delta_c)) for r in results if r.delta_c]
    if len(points) < 3:
        return None
    sizes, logs = zip(*points)
    fit = stats.linregress(sizes, logs)
    return {
        "slope": float(fit.slope),
        "intercept": float(fit.intercept),
        "r2": float(fit.rvalue**2),
    }
