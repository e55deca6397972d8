"""INI run configurations.

Example::

    [dataset]
    format = edge_list
    path = edges.txt
    colors = colors.txt
    objective = coverage

    [bounds]
    recipe = additive
    lower_slack = 0.05
    upper_slack = 0.05
    null_color = null

    [experiment]
    k = 5, 10
    algorithms = fair-ck, sieve
    seeds = 0, 1, 2
    order = shuffled

    [output]
    dir = results

Relative paths are resolved against the config file's directory.  The
``FAIRSTREAM_OUTPUT_DIR`` environment variable overrides ``[output] dir``.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field
from pathlib import Path

from fairstream.algorithms import get_algorithm
from fairstream.cli.ingest import FORMATS, DatasetBundle, ingest, resolve
from fairstream.core import FairnessSpec, check_instance
from fairstream.harness.bounds import proportional_bounds
from fairstream.harness.experiment import ORDER_POLICIES

OUTPUT_ENV = "FAIRSTREAM_OUTPUT_DIR"
RECIPES = ("additive", "multiplicative", "explicit", "none")


class ConfigError(ValueError):
    pass


def _ints(text, what):
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"{what} must be a list of integers, got {text!r}") from None


def _names(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _pairs(text, what, convert):
    """``label:value, label:value`` or a bare list in color-id order."""
    items = _names(text)
    if all(":" not in item for item in items):
        try:
            return [convert(x) for x in items]
        except ValueError:
            raise ConfigError(f"bad value in {what}: {text!r}") from None
    out = {}
    for item in items:
        label, sep, value = item.rpartition(":")
        if not sep or not label.strip():
            raise ConfigError(f"{what}: expected 'label:value', got {item!r}")
        try:
            out[label.strip()] = convert(value.strip())
        except ValueError:
            raise ConfigError(f"{what}: bad value {value!r} for {label!r}") from None
    return out


@dataclass
class RunConfig:
    path: Path
    dataset: dict
    bounds: dict
    ks: list[int]
    algorithms: list[str]
    seeds: list[int]
    order: str
    output_dir: Path
    timing: bool = False
    raw: dict = field(default_factory=dict)

    @property
    def base(self) -> Path:
        return self.path.parent

    def load_dataset(self) -> DatasetBundle:
        d = self.dataset
        return ingest(
            resolve(self.base, d["path"]),
            d["format"],
            resolve(self.base, d["colors"]) if d.get("colors") else None,
            objective=d.get("objective"),
            directed=d.get("directed", True),
            epsilon=d.get("epsilon", 0.1),
            alpha=d.get("alpha", 0.85),
        )

    def spec_for(self, bundle: DatasetBundle, k: int) -> FairnessSpec:
        """Resolve the bounds for one ``k``; raises on infeasible bounds."""
        b = self.bounds
        recipe = b["recipe"]
        C = bundle.ground.num_colors
        if recipe == "none":
            spec = FairnessSpec.cardinality_only(C, k)
        elif recipe == "explicit":
            lower = self._per_color(bundle, b.get("lower", ""), 0, "lower")
            upper = self._per_color(bundle, b.get("upper", ""), k, "upper")
            spec = FairnessSpec(tuple(lower), tuple(upper), k)
        else:
            null = b.get("null_color")
            proportions = b.get("proportions")
            if isinstance(proportions, dict):
                proportions = [proportions.get(label, 0.0) for label in bundle.labels]
            spec = proportional_bounds(
                bundle.ground, k, b["lower_slack"], b["upper_slack"], mode=recipe,
                null_color=None if null is None else bundle.color_id(null),
                proportions=proportions,
            )
        check_instance(spec, bundle.ground)
        return spec

    @staticmethod
    def _per_color(bundle, values, default, what):
        C = bundle.ground.num_colors
        if values == "":
            return [default] * C
        if isinstance(values, dict):
            out = [default] * C
            for label, v in values.items():
                try:
                    out[bundle.color_id(label)] = v
                except KeyError as exc:
                    raise ConfigError(f"bounds.{what}: {exc.args[0]}") from None
            return out
        if len(values) != C:
            raise ConfigError(f"bounds.{what} lists {len(values)} values for {C} colors")
        return list(values)


def load_config(path) -> RunConfig:
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    for section in ("dataset", "experiment"):
        if not parser.has_section(section):
            raise ConfigError(f"{path}: missing [{section}] section")

    ds = parser["dataset"]
    try:
        dataset = {"format": ds["format"], "path": ds["path"], "colors": ds.get("colors")}
    except KeyError as exc:
        raise ConfigError(f"{path}: [dataset] needs {exc.args[0]!r}") from None
    if dataset["format"] not in FORMATS:
        raise ConfigError(f"{path}: unknown dataset format {dataset['format']!r}")
    try:
        if "objective" in ds:
            dataset["objective"] = ds["objective"]
        if "directed" in ds:
            dataset["directed"] = ds.getboolean("directed")
        if "epsilon" in ds:
            dataset["epsilon"] = ds.getfloat("epsilon")
        if "alpha" in ds:
            dataset["alpha"] = ds.getfloat("alpha")
    except ValueError as exc:
        raise ConfigError(f"{path}: [dataset] {exc}") from None

    bounds: dict = {"recipe": "none"}
    if parser.has_section("bounds"):
        bs = parser["bounds"]
        recipe = bs.get("recipe", "none")
        if recipe not in RECIPES:
            raise ConfigError(f"{path}: bounds recipe must be one of {RECIPES}, got {recipe!r}")
        bounds["recipe"] = recipe
        if recipe in ("additive", "multiplicative"):
            for key in ("lower_slack", "upper_slack"):
                if key not in bs:
                    raise ConfigError(f"{path}: recipe {recipe!r} needs {key}")
                bounds[key] = bs[key]
            if "null_color" in bs:
                bounds["null_color"] = bs["null_color"]
            if "proportions" in bs:
                bounds["proportions"] = _pairs(bs["proportions"], "proportions", float)
        elif recipe == "explicit":
            bounds["lower"] = _pairs(bs.get("lower", ""), "lower", int) if bs.get("lower") else ""
            bounds["upper"] = _pairs(bs.get("upper", ""), "upper", int) if bs.get("upper") else ""

    ex = parser["experiment"]
    if "k" not in ex:
        raise ConfigError(f"{path}: [experiment] needs k")
    ks = _ints(ex["k"], "k")
    if not ks or any(k <= 0 for k in ks):
        raise ConfigError(f"{path}: k values must be positive integers")
    algorithms = _names(ex.get("algorithms", "fair-ck"))
    for name in algorithms:
        try:
            get_algorithm(name)
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    seeds = _ints(ex.get("seeds", "0"), "seeds") or [0]
    order = ex.get("order", "shuffled")
    if order not in ORDER_POLICIES:
        raise ConfigError(f"{path}: order must be one of {sorted(ORDER_POLICIES)}")

    out_dir = "results"
    timing = False
    if parser.has_section("output"):
        out_dir = parser["output"].get("dir", out_dir)
        try:
            timing = parser["output"].getboolean("timing", False)
        except ValueError as exc:
            raise ConfigError(f"{path}: [output] {exc}") from None
    out_dir = os.environ.get(OUTPUT_ENV, out_dir)

    raw = {s: dict(parser[s]) for s in parser.sections()}
    return RunConfig(
        path=path, dataset=dataset, bounds=bounds, ks=ks, algorithms=algorithms,
        seeds=seeds, order=order, output_dir=resolve(path.parent, out_dir),
        timing=timing, raw=raw,
    )
