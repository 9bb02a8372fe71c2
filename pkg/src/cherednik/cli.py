"""Command-line driver: load a session config, run analyses, write reports.

The config is a TOML file naming a reflection group, exact parameters per
reflection class, and a list of analyses.  Each analysis writes one JSON
report, and the session writes a combined markdown summary.  Given the same
seed, re-running a config reproduces the report files byte for byte.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - python < 3.11
    import tomli as tomllib

from .completion import (
    CentralizerModel,
    InvariantShift,
    cuspidal_reduction_report,
    dimension_ledger,
    ideal_image_check,
    mirror_base_point,
    verify_relations,
)
from .cyclotomic import parse_scalar
from .groups import (
    Group,
    build_group,
    cyclic_group,
    dihedral_group,
    irreducible_representations,
)
from .invariants import fundamental_invariants, leaf_census_c0
from .rca import Algebra
from .restricted import BabyVerma, RestrictedAlgebra, cm_families

ANALYSES = (
    "group-info",
    "leaf-census-c0",
    "restricted-blocks",
    "be-check",
    "main-check",
)

DEFAULT_DIM_CAP = 1728


class ConfigError(Exception):
    """The config file is missing, malformed, or inconsistent."""


class ComputationError(Exception):
    """An analysis ran but a checked invariant failed."""


@dataclass
class SessionConfig:
    """A parsed and validated session description."""

    name: str
    group: Group
    params: list
    analyses: list[str]
    seed: int
    out: Path
    options: dict = field(default_factory=dict)


def _build_group(table) -> Group:
    if not isinstance(table, dict):
        raise ConfigError("[group] must be a table")
    family = table.get("family")
    if family == "cyclic":
        size = table.get("order")
        if not isinstance(size, int) or size < 2:
            raise ConfigError("cyclic group needs an integer order >= 2")
        return cyclic_group(size)
    if family == "dihedral":
        size = table.get("order")
        if not isinstance(size, int) or size < 2:
            raise ConfigError("dihedral group needs an integer order >= 2 (the m in I2(m))")
        return dihedral_group(size)
    if family is not None:
        raise ConfigError(f"unknown group family {family!r}; use 'cyclic' or 'dihedral'")
    gens = table.get("generators")
    conductor = table.get("conductor")
    if gens is None:
        raise ConfigError("[group] needs either a family or explicit generators")
    if not isinstance(conductor, int) or conductor < 1:
        raise ConfigError("explicit generators need an integer conductor")
    try:
        matrices = [
            [[parse_scalar(entry, conductor) for entry in row] for row in mat] for mat in gens
        ]
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"could not parse a generator entry: {exc}") from exc
    try:
        return build_group(matrices, conductor, table.get("name", "custom"))
    except (ValueError, ArithmeticError) as exc:
        raise ConfigError(f"generators do not close into a finite group: {exc}") from exc


def load_config(path: str) -> SessionConfig:
    """Parse and validate a session config file."""
    p = Path(path)
    try:
        raw = tomllib.loads(p.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc

    group = _build_group(raw.get("group", {}))
    n_classes = len({r.class_index for r in group.reflections})

    params = raw.get("params")
    if params is None:
        raise ConfigError("config needs a 'params' list of exact scalars, one per reflection class")
    if not isinstance(params, list) or len(params) != n_classes:
        raise ConfigError(
            f"'params' must list one scalar per reflection class ({n_classes} for this group)"
        )
    for v in params:
        if not isinstance(v, (str, int)):
            raise ConfigError(f"parameter {v!r} must be an exact scalar string")

    analyses = raw.get("analyses")
    if not isinstance(analyses, list) or not analyses:
        raise ConfigError(f"config needs a nonempty 'analyses' list; known: {', '.join(ANALYSES)}")
    for a in analyses:
        if a not in ANALYSES:
            raise ConfigError(f"unknown analysis {a!r}; known: {', '.join(ANALYSES)}")

    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError("'seed' must be a nonnegative integer")

    options = {}
    for a in analyses:
        table = raw.get(a, {})
        if not isinstance(table, dict):
            raise ConfigError(f"[{a}] must be a table of options")
        order = table.get("order")
        if order is not None and (not isinstance(order, int) or order < 1):
            raise ConfigError(f"[{a}] order must be an integer >= 1")
        options[a] = table

    name = raw.get("name", p.stem)
    out = Path(raw.get("out", "reports"))
    return SessionConfig(
        name=name,
        group=group,
        params=list(params),
        analyses=list(analyses),
        seed=seed,
        out=out,
        options=options,
    )


# -- analyses -----------------------------------------------------------------------


def _analysis_group_info(cfg: SessionConfig, options: dict) -> dict:
    group = cfg.group
    classes = {}
    for r in group.reflections:
        rec = classes.setdefault(
            r.class_index,
            {"index": r.class_index, "size": 0, "eigenvalue": r.eigenvalue.text()},
        )
        rec["size"] += 1
    return {
        "group": group.name,
        "order": group.order,
        "rank": group.n,
        "conductor": group.conductor,
        "reflection_count": len(group.reflections),
        "reflection_classes": [classes[i] for i in sorted(classes)],
        "invariant_degrees_x": [p.degree() for p in fundamental_invariants(group, side="x")],
        "invariant_degrees_y": [p.degree() for p in fundamental_invariants(group, side="y")],
        "parameters": [str(v) for v in cfg.params],
    }


def _analysis_leaf_census(cfg: SessionConfig, options: dict) -> dict:
    rows = leaf_census_c0(cfg.group, seed=cfg.seed)
    dims = sorted((r.leaf_dim for r in rows), reverse=True)
    for r in rows:
        if r.leaf_dim != r.expected_dim:
            raise ComputationError(
                f"leaf dimension {r.leaf_dim} disagrees with the stratum count "
                f"{r.expected_dim} for the parabolic class of order {r.parabolic_order}"
            )
    return {
        "class_count": len(rows),
        "leaf_dims": dims,
        "rows": [r.as_dict() for r in rows],
    }


def _analysis_restricted_blocks(cfg: SessionConfig, options: dict, max_dim: int) -> dict:
    order3 = cfg.group.order**3
    if order3 > max_dim:
        raise ComputationError(
            f"restricted dimension {order3} exceeds the --max-dim guard {max_dim}"
        )
    alg = Algebra(cfg.group, cfg.params)
    res = RestrictedAlgebra(alg, dim_cap=max_dim)
    if res.dim != order3:
        raise ComputationError(f"restricted dimension {res.dim} is not |W|^3 = {order3}")
    verma = {}
    for rep in irreducible_representations(cfg.group):
        module = BabyVerma(res, rep)
        if module.dim != cfg.group.order * rep.dim:
            raise ComputationError(
                f"standard module for {rep.label} has dimension {module.dim}, "
                f"expected {cfg.group.order * rep.dim}"
            )
        verma[rep.label] = module.dim
    families = cm_families(res, mix_seed=cfg.seed)
    return {
        "dimension": res.dim,
        "verma_dimensions": verma,
        "families": [sorted(f) for f in families],
        "family_count": len(families),
    }


def _analysis_be_check(cfg: SessionConfig, options: dict) -> dict:
    alg = Algebra(cfg.group, cfg.params)
    order = options.get("order", 2)
    if "base_point" in options:
        pt = options["base_point"]
        if not isinstance(pt, list) or len(pt) != cfg.group.n:
            raise ConfigError("base_point must list one scalar per coordinate")
        base = [parse_scalar(str(v), alg.conductor) for v in pt]
    else:
        if not cfg.group.reflections:
            raise ComputationError("the group has no reflections, so no mirror base point")
        base = mirror_base_point(cfg.group, cfg.group.reflections[0].element)
    model = CentralizerModel(alg, base, order)

    records = verify_relations(model)
    failed = [r for r in records if not r["ok"]]
    if failed:
        raise ComputationError(
            f"defining-relation residual did not vanish for pair {failed[0]['pair']}"
        )
    ledger = dimension_ledger(model)
    if not ledger["equal"]:
        raise ComputationError(
            f"rank ledger mismatch: parent {ledger['parent_rank']} != model {ledger['matrix_rank']}"
        )
    shift = InvariantShift(model)
    ideal_checks = []
    for j in range(1, min(2, order) + 1):
        result = ideal_image_check(model, j)
        if not result["ok"]:
            raise ComputationError(f"ideal correspondence failed at power {j}")
        ideal_checks.append(result)
    return {
        "base_point": [v.text() for v in model.base_point],
        "truncation_order": order,
        "matrix_size": model.r,
        "stabilizer_order": model.sub_group.order,
        "relations": {"checked": len(records), "failed": 0},
        "t0_exact": all(r.get("t0_exact", True) for r in records),
        "ledger": ledger,
        "ideal_checks": ideal_checks,
        "shift_certified": bool(shift.certified),
    }


def _analysis_main_check(cfg: SessionConfig, options: dict) -> dict:
    alg = Algebra(cfg.group, cfg.params)
    order = options.get("order", 2)
    cls = options.get("reflection_class", 0)
    candidates = [r for r in cfg.group.reflections if r.class_index == cls]
    if not candidates:
        raise ConfigError(f"the group has no reflection class {cls}")
    report = cuspidal_reduction_report(alg, order=order, reflection=candidates[0].element)
    if report.relation_summary and report.relation_summary.get("failed"):
        raise ComputationError("defining-relation residuals did not vanish in the matrix model")
    if report.ledger and not report.ledger.get("equal"):
        raise ComputationError("rank ledger mismatch in the matrix model")
    if report.notes:
        raise ComputationError("; ".join(report.notes))
    for rec in report.simple_modules:
        if not rec["function_action_is_representation"]:
            raise ComputationError(f"{rec['label']} does not act on the coset functions")
        if not rec["character_matches_induction"]:
            raise ComputationError(f"{rec['label']} has the wrong induced character")
    return report.as_dict()


def run_analysis(name: str, cfg: SessionConfig, max_dim: int) -> dict:
    """Run one named analysis and return its JSON-ready report."""
    options = cfg.options.get(name, {})
    if name == "group-info":
        return _analysis_group_info(cfg, options)
    if name == "leaf-census-c0":
        return _analysis_leaf_census(cfg, options)
    if name == "restricted-blocks":
        return _analysis_restricted_blocks(cfg, options, max_dim)
    if name == "be-check":
        return _analysis_be_check(cfg, options)
    if name == "main-check":
        return _analysis_main_check(cfg, options)
    raise ConfigError(f"unknown analysis {name!r}")


# -- report rendering ---------------------------------------------------------------


def _md_group_info(result: dict) -> list[str]:
    classes = ", ".join(
        f"class {c['index']}: {c['size']} reflections (eigenvalue {c['eigenvalue']})"
        for c in result["reflection_classes"]
    )
    return [
        f"- group {result['group']}: order {result['order']}, rank {result['rank']}, "
        f"conductor {result['conductor']}",
        f"- reflections: {result['reflection_count']} ({classes})",
        f"- invariant degrees: x {result['invariant_degrees_x']}, "
        f"y {result['invariant_degrees_y']}",
        f"- parameters: {result['parameters']}",
    ]


def _md_leaf_census(result: dict) -> list[str]:
    lines = [
        f"- {result['class_count']} classes of parabolic subgroups; "
        f"leaf dimensions {result['leaf_dims']}",
        "",
        "| parabolic order | rank | class size | leaf dim |",
        "| --- | --- | --- | --- |",
    ]
    for row in result["rows"]:
        lines.append(
            f"| {row['parabolic_order']} | {row['parabolic_rank']} "
            f"| {row['class_size']} | {row['leaf_dim']} |"
        )
    return lines


def _md_restricted_blocks(result: dict) -> list[str]:
    lines = [
        f"- restricted algebra dimension {result['dimension']}",
        f"- {result['family_count']} families: "
        + "; ".join("{" + ", ".join(f) + "}" for f in result["families"]),
        "",
        "| irreducible | standard module dim |",
        "| --- | --- |",
    ]
    for label in sorted(result["verma_dimensions"]):
        lines.append(f"| {label} | {result['verma_dimensions'][label]} |")
    return lines


def _md_be_check(result: dict) -> list[str]:
    checks = ", ".join(
        f"power {c['power']}: {'ok' if c['ok'] else 'failed'}" for c in result["ideal_checks"]
    )
    return [
        f"- base point ({', '.join(result['base_point'])}) with stabilizer of order "
        f"{result['stabilizer_order']}",
        f"- matrix size {result['matrix_size']}, truncation order {result['truncation_order']}",
        f"- relations: {result['relations']['checked']} checked, "
        f"{result['relations']['failed']} failed"
        + ("; all exact at t = 0" if result["t0_exact"] else ""),
        f"- rank ledger: parent {result['ledger']['parent_rank']}, "
        f"matrix model {result['ledger']['matrix_rank']}",
        f"- ideal correspondence: {checks}" if checks else "- ideal correspondence: not run",
        f"- invariant shift certified: {'yes' if result['shift_certified'] else 'no'}",
    ]


def _md_main_check(result: dict) -> list[str]:
    simples = "; ".join(
        f"{m['label']} (degree {m['degree']})" for m in result["simple_modules"]
    )
    return [
        f"- base point ({', '.join(result['base_point'])}), matrix size {result['matrix_size']}",
        f"- core quotient dimension {result['core_quotient_dim']}; "
        f"predicted block dimension {result['predicted_dim']}",
        f"- simple modules: {simples}",
        f"- relations: {result['relation_summary']['checked']} checked, "
        f"{result['relation_summary']['failed']} failed"
        if result.get("relation_summary")
        else "- relations: not checked",
    ]


_MD_RENDERERS = {
    "group-info": _md_group_info,
    "leaf-census-c0": _md_leaf_census,
    "restricted-blocks": _md_restricted_blocks,
    "be-check": _md_be_check,
    "main-check": _md_main_check,
}


def render_summary(cfg: SessionConfig, results: dict, errors: dict) -> str:
    """Combined markdown summary over all analyses, stable line order."""
    lines = [f"# Session report: {cfg.name}", ""]
    lines.append(f"- group: {cfg.group.name} (order {cfg.group.order})")
    lines.append(f"- parameters: {[str(v) for v in cfg.params]}")
    lines.append(f"- seed: {cfg.seed}")
    lines.append("")
    for name in cfg.analyses:
        if name not in results and name not in errors:
            continue
        lines.append(f"## {name}")
        lines.append("")
        if name in errors:
            lines.append(f"- FAILED: {errors[name]}")
        else:
            lines.extend(_MD_RENDERERS[name](results[name]))
        lines.append("")
    return "\n".join(lines)


def run_session(cfg: SessionConfig, only=None, max_dim: int = DEFAULT_DIM_CAP) -> int:
    """Run the configured analyses and write reports; return the exit code."""
    selected = list(cfg.analyses)
    if only:
        for name in only:
            if name not in cfg.analyses:
                raise ConfigError(f"--only {name!r} is not in the configured analyses")
        selected = [a for a in cfg.analyses if a in set(only)]

    cfg.out.mkdir(parents=True, exist_ok=True)
    results, errors = {}, {}
    for name in selected:
        try:
            results[name] = run_analysis(name, cfg, max_dim)
        except ComputationError as exc:
            errors[name] = str(exc)
        except (ValueError, ArithmeticError, NotImplementedError) as exc:
            errors[name] = str(exc)

    for name, result in results.items():
        path = cfg.out / f"{name}.json"
        path.write_text(json.dumps(result, indent=2, sort_keys=True) + "\n")

    summary = render_summary(cfg, results, errors)
    (cfg.out / "summary.md").write_text(summary)

    for name in selected:
        if name in errors:
            print(f"{name}: FAILED - {errors[name]}", file=sys.stderr)
        else:
            print(f"{name}: ok -> {cfg.out / (name + '.json')}")
    return 1 if errors else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cherednik",
        description="Exact computations with rational Cherednik algebras at t = 0.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the analyses described by a TOML session config")
    run.add_argument("config", help="path to the session config")
    run.add_argument(
        "--only",
        action="append",
        metavar="ANALYSIS",
        help="run only this analysis (repeatable; must appear in the config)",
    )
    run.add_argument("--out", help="directory for report files (overrides the config)")
    run.add_argument("--seed", type=int, help="seed for randomized certificates")
    run.add_argument(
        "--max-dim",
        type=int,
        default=DEFAULT_DIM_CAP,
        help="refuse restricted-algebra work above this dimension "
        f"(default {DEFAULT_DIM_CAP})",
    )
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        if args.out is not None:
            cfg.out = Path(args.out)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("'--seed' must be a nonnegative integer")
            cfg.seed = args.seed
        return run_session(cfg, only=args.only, max_dim=args.max_dim)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
