"""Command-line interface: ``cogdim <command> [file] [options]``.

Every command reads one JSON document (a file path, or stdin when the path is
omitted or ``-``) and writes one JSON document to stdout. Exit codes: 0 on
success, 2 on invalid input, 3 when a size guard aborts the computation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from .bestvina_builder import build_bestvina, build_bestvina_Z, standard_panel_complex
from .development import bredon_cochain_oracle, check_development, develop, development_homology, verify_model_hypothesis
from .errors import CogdimError, SizeGuardError, ValidationError
from .example_generators import (
    action_join,
    action_product,
    action_scog,
    coxeter_semidirect_scog,
    graph_product_scog,
    moore_action,
    named_complex,
    projective_small_cover,
    sphere0_action,
    trivial_action,
    validate_reflection_like,
)
from .invariants import (
    block_cd,
    bredon_formula,
    cd_upper_bound,
    local_cohomological_dimension,
    reflike_counterexample_report,
    tree_criterion,
    vcd_racg,
)
from .poset_core import Poset
from .scog_core import SimpleComplexOfGroups, compute_blocks, is_thin, scog_from_json, thinning
from .simplicial import SimplicialComplex, jsonable

FORMAT = 1
DEFAULT_MAX_CELLS = 1_000_000
DEFAULT_MAX_GROUP_ORDER = 10_000


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    output: str = "json"
    max_cells: int = DEFAULT_MAX_CELLS
    max_group_order: int = DEFAULT_MAX_GROUP_ORDER
    explain: bool = False
    oracle_crosscheck: bool = False
    threads: int = 1

    def __post_init__(self) -> None:
        if self.max_cells <= 0 or self.max_group_order <= 0 or self.threads <= 0:
            raise ValidationError("size guards and thread counts must be positive")


class InputError(ValidationError):
    pass


# ---------------------------------------------------------------------- IO helpers


def _read_doc(path: str | None) -> dict:
    try:
        if path in (None, "-"):
            text = sys.stdin.read()
            where = "<stdin>"
        else:
            with open(path) as fh:
                text = fh.read()
            where = path
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected a JSON object")
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise InputError(f"{where}: unsupported format {fmt!r}")
    return doc


def _load_scog(path: str | None) -> SimpleComplexOfGroups:
    doc = _read_doc(path)
    if "scog" in doc and isinstance(doc["scog"], dict):
        doc = doc["scog"]
    return scog_from_json(doc)


def _load_poset(path: str | None) -> Poset:
    doc = _read_doc(path)
    if "poset" in doc and isinstance(doc["poset"], dict):
        doc = doc["poset"]
    return Poset.from_json(doc)


def _load_complex(path: str | None) -> SimplicialComplex:
    doc = _read_doc(path)
    if "complex" in doc and isinstance(doc["complex"], dict):
        doc = doc["complex"]
    return SimplicialComplex.from_json(doc)


def _parse_id(text: str) -> Any:
    try:
        val = json.loads(text)
    except json.JSONDecodeError:
        return text
    return _freeze(val)


def _freeze(x: Any) -> Any:
    if isinstance(x, list):
        return tuple(_freeze(y) for y in x)
    return x


def _groups_text(groups: Sequence, letter: str) -> list[str]:
    return [f"{letter}{n} = {g}" for n, g in enumerate(groups)]


def _guard_group(scog: SimpleComplexOfGroups, cfg: RunConfig) -> None:
    G = scog.ambient if scog.backend == "subgroup" else (scog.morphism.target if scog.morphism else None)
    if G is not None and G.order > cfg.max_group_order:
        raise SizeGuardError(f"group of order {G.order} exceeds --max-group-order {cfg.max_group_order}")


def _psi(scog: SimpleComplexOfGroups):
    return scog.morphism if scog.backend == "explicit" else None


# ---------------------------------------------------------------------- commands


def cmd_validate(cfg: RunConfig, args: argparse.Namespace) -> dict:
    scog = _load_scog(args.file)
    return {
        "valid": True,
        "backend": scog.backend,
        "elements": len(scog.poset),
        "thin": is_thin(scog),
        "all_finite": scog.all_finite(),
    }


def cmd_thin(cfg: RunConfig, args: argparse.Namespace) -> dict:
    scog = _load_scog(args.file)
    bp = compute_blocks(scog)
    R = thinning(scog)
    return {
        "blocks": [
            {"representative": jsonable(bp.representatives[b]), "members": [jsonable(scog.poset.elements[i]) for i in members]}
            for b, members in enumerate(bp.blocks)
        ],
        "thin": R.to_json(),
    }


def cmd_db(cfg: RunConfig, args: argparse.Namespace) -> dict:
    Q = _load_poset(args.file)
    return {"d_B": local_cohomological_dimension(Q).to_json()}


def cmd_bestvina(cfg: RunConfig, args: argparse.Namespace) -> dict:
    Q = _load_poset(args.file)
    B = build_bestvina_Z(Q) if args.acyclic else build_bestvina(Q)
    B.check()
    if B.complex.num_cells > cfg.max_cells:
        raise SizeGuardError(f"Bestvina complex has {B.complex.num_cells} cells, above --max-cells")
    return {"bestvina": B.to_json()}


def cmd_develop(cfg: RunConfig, args: argparse.Namespace) -> Any:
    scog = _load_scog(args.file)
    _guard_group(scog, cfg)
    panel = standard_panel_complex(scog.poset) if args.panel == "standard" else build_bestvina(scog.poset)
    dev = develop(panel, scog, _psi(scog), max_cells=cfg.max_cells)
    if args.out == "off":
        return dev.to_off()
    hs = development_homology(dev)
    return {
        "panel": args.panel,
        "development": dev.to_json(),
        "check": check_development(dev),
        "homology": [g.to_json() for g in hs],
        "summary": _groups_text(hs, "H"),
        "model": verify_model_hypothesis(dev),
    }


def cmd_cd(cfg: RunConfig, args: argparse.Namespace) -> dict:
    scog = _load_scog(args.file)
    rep = block_cd(scog, explain=cfg.explain)
    return {"cd": rep.to_json(), "upper_bound_d_B_R": cd_upper_bound(scog)}


def cmd_bredon(cfg: RunConfig, args: argparse.Namespace) -> dict:
    scog = _load_scog(args.file)
    J = _parse_id(args.J)
    if J not in scog.poset:
        raise InputError(f"unknown element {args.J!r}")
    groups = bredon_formula(scog, _psi(scog), J)
    out: dict[str, Any] = {"J": jsonable(J), "cohomology": [g.to_json() for g in groups], "summary": _groups_text(groups, "H^")}
    if cfg.oracle_crosscheck:
        _guard_group(scog, cfg)
        dev = develop(standard_panel_complex(scog.poset), scog, _psi(scog), check=False, max_cells=cfg.max_cells)
        oracle = bredon_cochain_oracle(dev, J)
        n = max(len(groups), len(oracle))
        pad = lambda xs: [str(x) for x in xs] + ["0"] * (n - len(xs))  # noqa: E731
        out["oracle"] = [g.to_json() for g in oracle]
        out["oracle_agrees"] = pad(groups) == pad(oracle)
    return out


def cmd_vcd_racg(cfg: RunConfig, args: argparse.Namespace) -> dict:
    L = _load_complex(args.file)
    return {"vcd": vcd_racg(L).to_json()}


def cmd_tree(cfg: RunConfig, args: argparse.Namespace) -> dict:
    scog = _load_scog(args.file)
    out = tree_criterion(scog)
    if out["cd_le_1"]:
        B = build_bestvina(scog.poset)
        out["bestvina_dim"] = B.dim
    return out


def cmd_report(cfg: RunConfig, args: argparse.Namespace) -> dict:
    scog = _load_scog(args.file)
    bp = compute_blocks(scog)
    Q = scog.poset
    out: dict[str, Any] = {
        "elements": len(Q),
        "backend": scog.backend,
        "thin": is_thin(scog),
        "blocks": len(bp.blocks),
        "d_B_Q": local_cohomological_dimension(Q).to_json(),
        "d_B_R": cd_upper_bound(scog),
        "cd": block_cd(scog, explain=cfg.explain).to_json(),
        "tree": tree_criterion(scog),
    }
    return out


# ---------------------------------------------------------------------- generators


def _action_from_spec(spec: str):
    name, _, param = spec.partition(":")
    try:
        p = int(param) if param else None
    except ValueError as exc:
        raise InputError(f"bad action parameter in {spec!r}") from exc
    if name == "moore":
        return moore_action(p or 2)
    if name == "projective":
        return projective_small_cover(p or 3)
    if name == "sphere0":
        return sphere0_action()
    if name == "trivial":
        return trivial_action(p or 1)
    raise InputError(f"unknown action {spec!r} (moore:k, projective:n, sphere0, trivial:n)")


def _gen_doc(scog: SimpleComplexOfGroups, generator: str, params: dict) -> dict:
    doc = scog.to_json()
    meta = dict(doc.get("metadata", {}))
    meta["generator"] = generator
    meta["params"] = jsonable(params)
    doc["metadata"] = meta
    return doc


def cmd_gen(cfg: RunConfig, args: argparse.Namespace) -> dict:
    kind = args.kind
    if kind == "moore":
        A = moore_action(args.k)
        return _gen_doc(action_scog(A), kind, {"k": args.k})
    if kind == "projective":
        A = projective_small_cover(args.n)
        return _gen_doc(action_scog(A), kind, {"n": args.n})
    if kind in ("product", "join"):
        if len(args.factors) != 2:
            raise InputError(f"{kind} needs exactly two --factors")
        X, Y = (_action_from_spec(s) for s in args.factors)
        A = action_product(X, Y) if kind == "product" else action_join(X, Y)
        if A.group.order > cfg.max_group_order:
            raise SizeGuardError(f"group of order {A.group.order} exceeds --max-group-order")
        return _gen_doc(action_scog(A), kind, {"factors": args.factors})
    if kind == "graph-product":
        L = _load_complex(args.L) if args.L.endswith(".json") else named_complex(args.L)
        orders = None
        if args.orders:
            orders = [int(x) for x in args.orders.split(",")]
            if len(orders) == 1:
                orders = orders * len(L.labels)
            if len(orders) != len(L.labels):
                raise InputError("--orders needs one entry per vertex, or a single entry")
        return _gen_doc(graph_product_scog(L, vertex_orders=orders), kind, {"L": args.L, "orders": args.orders})
    if kind == "coxeter-semidirect":
        A = _action_from_spec(args.action)
        validate_reflection_like(A)
        return _gen_doc(coxeter_semidirect_scog(A, model=args.model), kind, {"action": args.action, "model": args.model})
    raise InputError(f"unknown generator {kind!r}")


def cmd_reflike(cfg: RunConfig, args: argparse.Namespace) -> dict:
    factors = args.factors
    actions = [_action_from_spec(s) for s in factors]
    A = actions[0]
    for B in actions[1:]:
        A = action_product(A, B)
    return {"reflike": reflike_counterexample_report(A, model=args.model)}


# ---------------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output", choices=["json", "text"], default="json", help="output format")
    common.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS, help="size guard on complexes")
    common.add_argument("--max-group-order", type=int, default=DEFAULT_MAX_GROUP_ORDER, help="size guard on concrete groups")
    common.add_argument("--explain", action="store_true", help="add cell counts and invariant factors to dimension reports")
    p = argparse.ArgumentParser(prog="cogdim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name: str, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.add_argument("file", nargs="?", default="-", help="input JSON (default: stdin)")
        return sp

    with_file("validate", "validate a scog document")
    with_file("thin", "block partition and thinned scog")
    with_file("db", "d_B of a poset")
    sp = with_file("bestvina", "Bestvina panel complex of a poset")
    sp.add_argument("--acyclic", action="store_true", help="acyclic panels (B^Z) instead of contractible ones")
    sp = with_file("develop", "basic construction of a finite scog")
    sp.add_argument("--panel", choices=["standard", "bestvina"], default="standard")
    sp.add_argument("--out", choices=["json", "off"], default="json")
    with_file("cd", "Bredon cohomological dimension via blocks")
    sp = with_file("bredon", "Bredon cohomology with coefficients at one element")
    sp.add_argument("--J", required=True, help="element id (JSON value or bare string)")
    sp.add_argument("--oracle-crosscheck", action="store_true", help="recompute from the development's cochains")
    with_file("vcd-racg", "vcd of the right-angled Coxeter group of a flag complex")
    with_file("tree", "tree criterion (cd <= 1)")
    with_file("report", "all invariants of a scog")

    sp = sub.add_parser("gen", help="emit an example scog document", parents=[common])
    sp.add_argument("kind", choices=["moore", "projective", "product", "join", "graph-product", "coxeter-semidirect"])
    sp.add_argument("--k", type=int, default=2, help="Moore space parameter")
    sp.add_argument("--n", type=int, default=3, help="projective space parameter (acts on RP^(n-1))")
    sp.add_argument("--factors", nargs="+", default=["moore:2", "moore:3"], help="actions such as moore:3 or projective:3")
    sp.add_argument("--L", default="path4", help="flag complex: pathN, cycleN, simplexN, pointsN, octahedron, or a .json file")
    sp.add_argument("--orders", default=None, help="comma-separated vertex group orders (default 2)")
    sp.add_argument("--action", default="moore:2", help="reflection-like action, e.g. moore:2")
    sp.add_argument("--model", choices=["cubical", "literal"], default="cubical")

    sp = sub.add_parser("reflike", help="dimension report for W_L x| F over a product of reflection-like actions", parents=[common])
    sp.add_argument("factors", nargs="+", help="actions such as moore:2 moore:3")
    sp.add_argument("--model", choices=["cubical", "literal"], default="cubical")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "thin": cmd_thin,
    "db": cmd_db,
    "bestvina": cmd_bestvina,
    "develop": cmd_develop,
    "cd": cmd_cd,
    "bredon": cmd_bredon,
    "vcd-racg": cmd_vcd_racg,
    "tree": cmd_tree,
    "report": cmd_report,
    "gen": cmd_gen,
    "reflike": cmd_reflike,
}


def _threads_from_env() -> int:
    raw = os.environ.get("COGDIM_THREADS", "1")
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"COGDIM_THREADS must be an integer, got {raw!r}") from exc


def _render_text(doc: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(doc, dict):
        lines = []
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(doc, list):
        return "\n".join(f"{pad}- {json.dumps(x)}" if not isinstance(x, (dict, list)) else f"{pad}-\n{_render_text(x, indent + 1)}" for x in doc)
    return f"{pad}{doc}"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            inputs=[getattr(args, "file", None) or "-"],
            output=args.output,
            max_cells=args.max_cells,
            max_group_order=args.max_group_order,
            explain=args.explain,
            oracle_crosscheck=getattr(args, "oracle_crosscheck", False),
            threads=_threads_from_env(),
        )
        result = COMMANDS[args.command](cfg, args)
    except SizeGuardError as exc:
        print(f"cogdim {args.command}: size guard: {exc}", file=sys.stderr)
        return 3
    except CogdimError as exc:
        where = getattr(args, "file", None)
        ctx = f" ({where})" if where not in (None, "-") else ""
        print(f"cogdim {args.command}{ctx}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, str):
        sys.stdout.write(result)
        return 0
    if args.command != "gen":
        result = {"format": FORMAT, "command": args.command, **result}
    if cfg.output == "text":
        sys.stdout.write(_render_text(result) + "\n")
    else:
        sys.stdout.write(json.dumps(result, indent=1, sort_keys=False) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
