"""Configuration checks that run before any computation.

`validate_config` accepts a YAML file or an already merged Config and
returns a list of diagnostics; an empty list means the run may start.
Files are parsed in round-trip mode so findings carry line numbers.
"""

import copy
import dataclasses
import io
import numbers

import ruamel.yaml as yaml

from . import core
from . import errors
from . import laurent

SCENARIOS = (
    "fig1_spectra",
    "fig1_lambda_map",
    "fig1_profiles",
    "fig2_geometry_spectra",
    "fig2_vshape_map",
    "fig2_greens_map",
    "fig2_dynamics",
    "fig2_delta_sweep",
    "hierarchy_table",
    "custom",
)

GEOMETRIES = ("interval", "square", "corner_cut", "disk")
STRATEGIES = ("blocking", "thread", "process")
MECHANISMS = ("plain", "squared")


@dataclasses.dataclass(frozen=True)
class Diagnostic:

    key: str
    message: str
    line: int = None

    def __str__(self):
        where = f"line {self.line}: " if self.line is not None else ""
        return f"{where}{self.key}: {self.message}"


def load_presets():
    filename = core.Path(__file__).parent / "configs.yaml"
    return yaml.YAML(typ="safe", pure=True).load(filename.read())


def recursive_update(base, update):
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            recursive_update(base[key], value)
        else:
            base[key] = value
    return base


def _line_numbers(tree, prefix=""):
    lines = {}
    if not hasattr(tree, "items"):
        return lines
    for key, value in tree.items():
        name = f"{prefix}{key}"
        try:
            lines[name] = tree.lc.key(key)[0] + 1
        except (AttributeError, KeyError, TypeError):
            pass
        if isinstance(value, dict):
            lines.update(_line_numbers(value, name + "."))
    return lines


def validate_config(source, base=None):
    """Diagnostics for a config file path or a merged mapping."""
    defaults = load_presets()["defaults"]
    if isinstance(source, (str, core.Path)):
        try:
            text = core.Path(source).read()
        except OSError as e:
            return [Diagnostic("<file>", f"cannot read {source}: {e}")]
        try:
            tree = yaml.YAML(typ="rt").load(io.StringIO(text))
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            line = mark.line + 1 if mark is not None else None
            return [Diagnostic("<file>", f"parse error: {e}", line)]
        tree = tree or {}
        if not isinstance(tree, dict):
            return [Diagnostic("<file>", "top level must be a mapping", 1)]
        lines = _line_numbers(tree)
        loaded = yaml.YAML(typ="safe", pure=True).load(io.StringIO(text)) or {}
        merged = recursive_update(copy.deepcopy(base or defaults), loaded)
        unknown = _unknown_keys(loaded, defaults, lines)
    else:
        merged = source.plain() if isinstance(source, core.Config) else dict(source)
        lines = {}
        unknown = _unknown_keys(merged, defaults, lines)
    if any(d.message == "expected a mapping" for d in unknown):
        return unknown
    return unknown + _check(merged, defaults, lines)


def _unknown_keys(loaded, defaults, lines, prefix=""):
    found = []
    for key, value in loaded.items():
        name = f"{prefix}{key}"
        if key not in defaults:
            found.append(Diagnostic(name, "unknown key", lines.get(name)))
        elif isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                found.append(Diagnostic(name, "expected a mapping", lines.get(name)))
            else:
                found += _unknown_keys(value, defaults[key], lines, name + ".")
    return found


def _flat(mapping, prefix=""):
    result = {}
    for key, value in mapping.items():
        if isinstance(value, dict):
            result.update(_flat(value, f"{prefix}{key}."))
        else:
            result[f"{prefix}{key}"] = value
    return result


def _type_ok(default, value):
    if isinstance(default, bool):
        return isinstance(value, bool)
    if isinstance(default, int):
        return isinstance(value, numbers.Integral) and not isinstance(value, bool) or (
            isinstance(value, float) and value.is_integer()
        )
    if isinstance(default, float):
        return isinstance(value, numbers.Real) and not isinstance(value, bool)
    if isinstance(default, str):
        return isinstance(value, (str, list, tuple, numbers.Real))
    if isinstance(default, (list, tuple)):
        return isinstance(value, (list, tuple))
    return True


def _symbol(value, key, report):
    if value is None or value == [] or value == ():
        report(key, "missing model coefficients")
        return None
    if isinstance(value, str):
        try:
            return laurent.preset(value)
        except KeyError:
            report(key, f"unknown symbol preset {value!r}")
            return None
    if not isinstance(value, (list, tuple)):
        report(key, "expected a preset name or a list of (power, re, im) triples")
        return None
    try:
        for term in value:
            if not isinstance(term, (list, tuple)) or len(term) != 3:
                raise errors.MalformedOperatorError(f"term {term} is not a triple")
            if not all(isinstance(x, numbers.Real) for x in term):
                raise errors.MalformedOperatorError(f"term {term} is not numeric")
        return laurent.LaurentOperator.from_terms(value)
    except errors.MalformedOperatorError as e:
        report(key, f"malformed symbol: {e}")
        return None


def _check(merged, defaults, lines):
    found = []
    flat = _flat(merged)
    flat_defaults = _flat(defaults)

    def report(key, message):
        found.append(Diagnostic(key, message, lines.get(key)))

    for key, value in flat.items():
        if key in flat_defaults and key not in ("model.y", "model.x"):
            if not _type_ok(flat_defaults[key], value):
                kind = type(flat_defaults[key]).__name__
                report(key, f"expected {kind} but got {value!r}")
    if found:
        return found

    def positive(key, strict=True):
        value = flat.get(key)
        if value is not None and (value <= 0 if strict else value < 0):
            report(key, f"must be {'positive' if strict else 'non-negative'}")

    if flat["scenario"] not in SCENARIOS:
        report("scenario", f"unknown scenario {flat['scenario']!r}")
    if flat["strategy"] not in STRATEGIES:
        report("strategy", f"unknown strategy {flat['strategy']!r}")
    if flat["geometry.kind"] not in GEOMETRIES:
        report("geometry.kind", f"unknown geometry {flat['geometry.kind']!r}")
    if flat["greens.mechanism"] not in MECHANISMS:
        report("greens.mechanism", f"unknown mechanism {flat['greens.mechanism']!r}")
    gauge = flat["model.gauge"]
    if gauge not in ("auto", "none"):
        try:
            float(gauge)
        except (TypeError, ValueError):
            report("model.gauge", "must be 'auto', 'none' or a number")
    for key in ("threads", "seed", "geometry.cut", "geometry.hop_range",
                "geometry.R", "geometry.disorder", "dynamics.dt", "dynamics.delta"):
        positive(key, strict=False)
    for key in ("gbz.tol", "greens.margin", "hierarchy.mu_range", "hierarchy.eps",
                "dynamics.T", "sweep.delta_min", "sweep.delta_max"):
        positive(key)
    if flat["spectra.bloch_grid"] < 64:
        report("spectra.bloch_grid", "needs at least 64 points per axis")
    if flat["sweep.delta_min"] >= flat["sweep.delta_max"]:
        report("sweep.delta_min", "must be below sweep.delta_max")
    if flat["sweep.count"] < 2:
        report("sweep.count", "needs at least 2 deltas")
    if flat["hierarchy.points"] < 3 or flat["hierarchy.zoom"] < 2:
        report("hierarchy.points", "search needs >= 3 points and zoom >= 2")
    for key in ("greens.grid", "vshape.grid", "hierarchy.grid", "gbz.scan_shape"):
        if not _numbers(flat[key], 2, integral=True) or min(flat[key]) < 1:
            report(key, "expected two positive grid counts")
    for key in ("vshape.re_range", "vshape.im_range", "hierarchy.re_range",
                "hierarchy.im_range", "greens.omega"):
        if not _numbers(flat[key], 2):
            report(key, "expected two numbers")
    probes = flat["vshape.probes"]
    if not probes or not all(_numbers(p, 2) for p in probes):
        report("vshape.probes", "expected a list of [re, im] pairs")
    sized = []
    for key in ("vshape.sizes", "hierarchy.sizes", "sweep.sizes"):
        sizes = flat[key]
        if not sizes or not _numbers(sizes, integral=True):
            report(key, "expected a list of integer sizes")
        elif list(sizes) != sorted(set(sizes)):
            report(key, "sizes must be increasing")
        else:
            sized.append(key)
    windows = {}
    for key in ("greens.window_plus", "greens.window_minus"):
        if _numbers(flat[key], 2, integral=True):
            windows[key] = flat[key]
        else:
            report(key, "expected two integer site indices")

    x = _symbol(flat.get("model.x"), "model.x", report)
    y = flat.get("model.y")
    y = x if y == "same" else _symbol(y, "model.y", report)
    if x is None or y is None:
        return found

    span = max(x.m + x.n, y.m + y.n)
    chains = ["geometry.L", "spectra.L", "greens.L", "dynamics.L", "hierarchy.L"]
    for key in chains:
        if flat[key] <= span:
            report(key, f"chain length {flat[key]} must exceed the hopping range {span}")
    for key in sized:
        if any(L <= span for L in flat[key]):
            report(key, f"every size must exceed the hopping range {span}")

    if len(windows) < 2:
        return found
    L, source = flat["greens.L"], flat["greens.source"]
    for key, (lo, hi) in windows.items():
        if hi - lo + 1 < 10:
            report(key, "fit windows need at least 10 sites")
        if lo < 1 or hi > L:
            report(key, f"window leaves the chain of length {L}")
    if not (windows["greens.window_minus"][1] < source < windows["greens.window_plus"][0]):
        report("greens.source", "source must lie between the two fit windows")
    return found


def _numbers(value, count=None, integral=False):
    """True for a list of `count` real (or integral) numbers, booleans excluded."""
    if not isinstance(value, (list, tuple)):
        return False
    if count is not None and len(value) != count:
        return False
    kind = numbers.Integral if integral else numbers.Real
    return all(isinstance(v, kind) and not isinstance(v, bool) for v in value)
