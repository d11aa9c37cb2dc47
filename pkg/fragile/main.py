import argparse
import copy
import sys

import ruamel.yaml as yaml

from . import core
from . import errors
from . import scenarios
from . import schema


def load_config(argv=None):
    """Composes defaults, named presets, a config file and flag overrides.

    Returns the merged Config together with the parsed top-level arguments.
    Raises ConfigError with line-level diagnostics for a bad file.
    """
    parser = argparse.ArgumentParser(description="Non-Hermitian lattice scenarios.")
    parser.add_argument("--config", default=None, help="YAML file with overrides.")
    parser.add_argument("--configs", nargs="+", default=[], help="Preset names.")
    parser.add_argument("--validate-only", action="store_true")
    args, remaining = parser.parse_known_args(argv)

    presets = schema.load_presets()
    merged = copy.deepcopy(presets["defaults"])
    for name in args.configs:
        if name not in presets or name == "defaults":
            raise errors.ConfigError([schema.Diagnostic("--configs", f"unknown preset {name!r}")])
        schema.recursive_update(merged, presets[name])
    if args.config:
        diagnostics = schema.validate_config(args.config, base=merged)
        if diagnostics:
            raise errors.ConfigError(diagnostics)
        text = core.Path(args.config).read()
        loaded = yaml.YAML(typ="safe", pure=True).load(text) or {}
        schema.recursive_update(merged, loaded)

    try:
        config = core.Flags(merged).parse(remaining)
    except (ValueError, TypeError) as e:
        raise errors.ConfigError([schema.Diagnostic("<flags>", str(e))]) from e
    diagnostics = schema.validate_config(config)
    if diagnostics:
        raise errors.ConfigError(diagnostics)
    return config, args


def main(argv=None):
    try:
        config, args = load_config(argv)
    except errors.ConfigError as e:
        core.print_(str(e), "red")
        return 2
    if args.validate_only:
        core.print_("Config is valid.", "green")
        return 0
    try:
        scenarios.run_scenario(config)
    except errors.ScenarioError as e:
        core.print_(str(e), "red")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
