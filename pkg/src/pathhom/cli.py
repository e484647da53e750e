"""Command-line front end.

Every command prints the dimensions of ``Ω`` and, per certified degree, the
homology as ``{rank, torsion}``.  ``--format json`` emits a deterministic
JSON document (sorted keys) that :func:`load_report` reads back.

Exit codes: 0 success, 1 invalid input, 2 parse error, 3 a
theorem-guaranteed check failed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from . import formats
from .errors import InvariantBreach, PathHomError, UnsupportedCombination, ValidationError
from .exactalg import HomologyGroup, Ring, kunneth
from .gradedpairs import dual_pair, omega, omega_prime, verify_les
from .groupsub import (
    Group,
    PointedSubset,
    coacyclic_check,
    omega_group,
    parse_builtin,
    parse_cayley,
    pontryagin,
    union_split_check,
    wedge_check,
)
from .hochschild import BimodulePresentation, PointedSubmodule, hochschild_pair, load_algebra
from .nerve import Quiver, QuiverMorphism, ez_aw, verify_homotopy
from .quiverhom import (
    Digraph,
    box,
    cohomology_ring,
    compare_sc_glmy,
    free_cat,
    glmy,
    kpower,
    path_complex_omega,
    sc,
    simplicial_digraph,
)
from .tokens import Identity

DEFAULT_NMAX = 5


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    ring: Ring
    n_max: int = DEFAULT_NMAX
    output: str = "text"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_max < 1:
            raise ValidationError("--nmax must be at least 1")


# ---------------------------------------------------------------------------
# report helpers


def homology_entries(groups: Sequence[HomologyGroup]) -> list[dict]:
    return [{"degree": n, **h.to_dict()} for n, h in enumerate(groups)]


def complex_report(cx, **extra) -> dict:
    """Dimensions, truncation and homology of an ``OmegaComplex`` or ``BoundedComplex``."""
    out = {
        "dims": list(cx.dims),
        "n_max": cx.n_max,
        "certified_max": cx.certified_max,
        "homology": homology_entries(cx.homology_all()),
    }
    out.update(extra)
    return out


def _field_guard(cfg: RunConfig) -> None:
    if cfg.options.get("torsion") and cfg.ring.is_field:
        raise UnsupportedCombination(f"torsion is not defined over the field {cfg.ring}")


# ---------------------------------------------------------------------------
# loaders


def _graph(path: str):
    text, source = formats.read_text(path)
    return formats.parse_graph_like(text, source)


def _digraph(path: str) -> Digraph:
    G = _graph(path)
    if not isinstance(G, Digraph):
        raise ValidationError(f"{path} is a quiver file; this command needs a digraph")
    return G


def load_group(name: str) -> Group:
    """A built-in family such as ``dihedral(4)``, or a Cayley-table file."""
    if name.startswith("builtin:") or re.fullmatch(r"\s*\w+\s*\(.*\)\s*(x .*)?", name):
        try:
            return parse_builtin(name)
        except PathHomError:
            if name.startswith("builtin:"):
                raise
    text, source = formats.read_text(name)
    return parse_cayley(text, source)


def _theory(name: str, G, ring: Ring, n_max: int, k: int | None = None):
    if name == "sc":
        return sc(G, ring, n_max)
    if name == "glmy":
        if not isinstance(G, Digraph):
            raise ValidationError("GLMY homology needs a digraph")
        return glmy(G, ring, n_max)
    if name == "free":
        return free_cat(G, ring, n_max)
    if name == "kpower":
        if k is None:
            raise ValidationError("--k is required for the k-power theory")
        return kpower(G, k, ring, n_max)
    raise ValidationError(f"unknown theory {name!r}")


# ---------------------------------------------------------------------------
# commands


def cmd_glmy(cfg: RunConfig) -> dict:
    return complex_report(glmy(_digraph(cfg.inputs[0]), cfg.ring, cfg.n_max), theory="glmy")


def cmd_sc(cfg: RunConfig) -> dict:
    return complex_report(sc(_graph(cfg.inputs[0]), cfg.ring, cfg.n_max), theory="sc")


def cmd_kpower(cfg: RunConfig) -> dict:
    k = cfg.options["k"]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        om = kpower(_graph(cfg.inputs[0]), k, cfg.ring, cfg.n_max)
    notes = sorted({str(w.message) for w in caught})
    return complex_report(om, theory="kpower", k=k, warnings=notes)


def cmd_free(cfg: RunConfig) -> dict:
    return complex_report(free_cat(_graph(cfg.inputs[0]), cfg.ring, cfg.n_max), theory="free")


def cmd_pathcomplex(cfg: RunConfig) -> dict:
    text, source = formats.read_text(cfg.inputs[0])
    P = formats.parse_path_complex(text, source)
    route = cfg.options.get("route", "regular")
    return complex_report(path_complex_omega(P, cfg.ring, cfg.n_max, route=route), theory="pathcomplex",
                          route=route)


def cmd_simplicial(cfg: RunConfig) -> dict:
    text, source = formats.read_text(cfg.inputs[0])
    S = formats.parse_facets(text, source)
    variant = cfg.options.get("variant", "G")
    theory = cfg.options.get("theory", "sc")
    G = simplicial_digraph(S, variant)
    return complex_report(_theory(theory, G, cfg.ring, cfg.n_max), theory=theory, variant=variant,
                          vertices=len(G.vertices), edges=len(G.edges))


def _subset(G: Group, text: str) -> PointedSubset:
    return PointedSubset.parse(G, text)


def cmd_group(cfg: RunConfig) -> dict:
    G = load_group(cfg.inputs[0])
    p = _subset(G, cfg.options["subset"])
    return complex_report(omega_group(p, cfg.ring, cfg.n_max), group=G.name,
                          subset=[G.format(x) for x in p.elements])


def cmd_coacyclic(cfg: RunConfig) -> dict:
    if cfg.ring.kind != "Z":
        raise UnsupportedCombination("coacyclicity is defined over Z only")
    G = load_group(cfg.inputs[0])
    p = _subset(G, cfg.options["subset"])
    r = coacyclic_check(p, cfg.n_max)
    return {
        "group": G.name,
        "subset": [G.format(x) for x in p.elements],
        "n_max": cfg.n_max,
        "certified_max": len(r.computed) - 1,
        "homology": homology_entries(r.computed),
        "reference": homology_entries(r.reference),
        "reference_source": r.reference_source,
        "coacyclic": r.coacyclic,
        "first_failure": r.first_failure,
    }


def cmd_wedge(cfg: RunConfig) -> dict:
    G1, G2 = load_group(cfg.inputs[0]), load_group(cfg.inputs[1])
    p, q = _subset(G1, cfg.options["subset"]), _subset(G2, cfg.options["subset2"])
    r = wedge_check(p, q, cfg.ring, cfg.n_max)
    return {
        "group": r.subset.group.name,
        "n_max": cfg.n_max,
        "certified_max": len(r.homology) - 1,
        "dims": r.ez_dims,
        "homology": homology_entries(r.homology),
        "kunneth": homology_entries(r.expected),
    }


def cmd_union_split(cfg: RunConfig) -> dict:
    G = load_group(cfg.inputs[0])
    X = _subset(G, cfg.options["x"]).elements
    Y = _subset(G, cfg.options["y"]).elements
    r = union_split_check(G, X, Y, cfg.ring, cfg.n_max)
    return {
        "group": G.name,
        "n_max": cfg.n_max,
        "certified_max": len(r.union) - 1,
        "homology": homology_entries(r.union),
        "homology_x": homology_entries(r.left),
        "homology_y": homology_entries(r.right),
        "split_degrees": r.degrees,
    }


def cmd_pontryagin(cfg: RunConfig) -> dict:
    G = load_group(cfg.inputs[0])
    p = _subset(G, cfg.options["subset"])
    alg = pontryagin(p, cfg.ring, cfg.n_max)
    table = [
        {"left": [a, i], "right": [b, j], "product": [str(x) for x in vec]}
        for (a, i, b, j), vec in sorted(alg.table.items())
    ]
    return {
        "group": G.name,
        "n_max": cfg.n_max,
        "certified_max": len(alg.dims) - 1,
        "homology": [{"degree": n, "rank": d, "torsion": []} for n, d in enumerate(alg.dims)],
        "products": table,
        "checks": ["unit", "associative", "graded-commutative"],
    }


def _parse_submodule(A, text: str) -> PointedSubmodule:
    vecs = []
    for item in _split_items(text):
        vec: dict = {}
        for term in item.split("+"):
            term = term.strip()
            coeff, _, label = term.rpartition("*")
            if label not in A.labels:
                raise ValidationError(f"unknown basis element {label!r} in the submodule")
            c = int(coeff) if coeff else 1
            i = A.labels.index(label)
            vec[i] = vec.get(i, 0) + c
        vecs.append(vec)
    return PointedSubmodule(A, vecs)


def _split_items(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def cmd_hochschild(cfg: RunConfig) -> dict:
    cfg.ring.require_field("Hochschild homology")
    text, source = formats.read_text(cfg.inputs[0])
    A, M = load_algebra(text, cfg.ring, source)
    if cfg.options.get("bimodule"):
        btext, bsource = formats.read_text(cfg.options["bimodule"])
        M = BimodulePresentation.from_json(A, formats.parse_json(btext, bsource))
    sub = cfg.options.get("submodule")
    V = _parse_submodule(A, sub) if sub else PointedSubmodule.whole(A)
    pair = hochschild_pair(A, V, M, cfg.ring, cfg.n_max)
    return complex_report(omega(pair), algebra=A.labels)


def cmd_box(cfg: RunConfig) -> dict:
    A, B = _graph(cfg.inputs[0]), _graph(cfg.inputs[1])
    if isinstance(A, Digraph) != isinstance(B, Digraph):
        A = A.to_quiver() if isinstance(A, Digraph) else A
        B = B.to_quiver() if isinstance(B, Digraph) else B
    theory = cfg.options.get("theory", "sc")
    return complex_report(_theory(theory, box(A, B), cfg.ring, cfg.n_max, cfg.options.get("k")), theory=theory)


def cmd_kunneth_check(cfg: RunConfig) -> dict:
    A, B = _graph(cfg.inputs[0]), _graph(cfg.inputs[1])
    theory = cfg.options.get("theory", "sc")
    k = cfg.options.get("k")
    E = _theory(theory, A, cfg.ring, cfg.n_max, k)
    F = _theory(theory, B, cfg.ring, cfg.n_max, k)
    ez = ez_aw(E, F, cfg.n_max)
    H = ez.box.homology_all()
    HE, HF = E.homology_all(), F.homology_all()
    top = min(len(H), len(HE), len(HF))
    if cfg.ring.is_field:
        expected = [HomologyGroup(sum(HE[i].rank * HF[n - i].rank for i in range(n + 1))) for n in range(top)]
    else:
        expected = [kunneth(HE, HF, n) for n in range(top)]
    if H[:top] != expected:
        raise InvariantBreach("the Künneth sequence does not match the box product")
    return complex_report(ez.box, theory=theory, kunneth=homology_entries(expected), mutually_inverse=True)


def cmd_compare(cfg: RunConfig) -> dict:
    if cfg.options.get("which") != "sc-glmy":
        raise ValidationError("only 'compare sc-glmy' is available")
    G = _digraph(cfg.inputs[0])
    r = compare_sc_glmy(G, cfg.ring, cfg.n_max)
    return {
        "n_max": cfg.n_max,
        "certified_max": len(r.sc_homology) - 1,
        "sc_dims": r.sc_dims,
        "glmy_dims": r.glmy_dims,
        "homology": homology_entries(r.sc_homology),
        "glmy_homology": homology_entries(r.glmy_homology),
        "induced_ranks": r.homology_ranks,
        "isomorphic": r.isomorphic,
        "triangle_free": r.triangle_free,
        "two_cycle_free": r.two_cycle_free,
    }


def cmd_cohomology(cfg: RunConfig) -> dict:
    cfg.ring.require_field("cohomology rings")
    theory = cfg.options.get("theory", "sc")
    E = _theory(theory, _graph(cfg.inputs[0]), cfg.ring, cfg.n_max, cfg.options.get("k"))
    cr = cohomology_ring(E)
    dims = cr.cohomology_dims()
    return {
        "theory": theory,
        "dims": list(E.dims),
        "n_max": cfg.n_max,
        "certified_max": len(dims) - 1,
        "homology": homology_entries(E.homology_all()),
        "cohomology": [{"degree": n, "rank": d, "torsion": []} for n, d in enumerate(dims)],
        "checks": ["diagonal injective", "dimension inequality", "Leibniz rule"],
    }


def _arrow_ref(Q: Quiver, text):
    """Arrow labels in JSON: quiver labels as written, digraph edges as ``"u->v"``."""
    if text is None:
        return None
    if text in Q.arrows:
        return text
    if isinstance(text, str) and "->" in text:
        u, v = (s.strip() for s in text.split("->", 1))
        if (u, v) in Q.arrows:
            return (u, v)
    raise ValidationError(f"unknown arrow {text!r}")


def _morphism(data: dict, Q: Quiver, Qp: Quiver) -> QuiverMorphism:
    vmap = {v: data["vertices"][v] for v in Q.vertices if v in data.get("vertices", {})}
    amap = {}
    for key, val in data.get("arrows", {}).items():
        a = _arrow_ref(Q, key)
        b = _arrow_ref(Qp, val)
        t = Q.arrows[a][0]
        amap[a] = Identity(vmap.get(t)) if b is None else b
    return QuiverMorphism(vmap, amap)


def cmd_homotopy_check(cfg: RunConfig) -> dict:
    src = cfg.options.get("source")
    tgt = cfg.options.get("target")
    if not src or not tgt:
        raise ValidationError("--source and --target quivers are required")
    A, B = _graph(src), _graph(tgt)
    theory = cfg.options.get("theory", "sc")
    E = _theory(theory, A, cfg.ring, cfg.n_max, cfg.options.get("k"))
    F = _theory(theory, B, cfg.ring, cfg.n_max, cfg.options.get("k"))
    Q, Qp = E.quiver, F.quiver
    docs = []
    for path in cfg.inputs[:3]:
        text, source = formats.read_text(path)
        docs.append(formats.parse_json(text, source))
    f, g = _morphism(docs[0], Q, Qp), _morphism(docs[1], Q, Qp)
    phi = {}
    for v in Q.vertices:
        ref = docs[2].get(v)
        phi[v] = Identity(f.vertex_map[v]) if ref is None else _arrow_ref(Qp, ref)
    r = verify_homotopy(f, g, phi, E, F)
    return {
        "theory": theory,
        "n_max": cfg.n_max,
        "certified_max": max(r.degrees) if r.degrees else -1,
        "homology": homology_entries(E.homology_all()),
        "natural": r.natural,
        "equal_on_homology": r.equal_on_homology,
        "degrees": r.degrees,
    }


def cmd_les_check(cfg: RunConfig) -> dict:
    cfg.ring.require_field("the long exact sequence check")
    text, source = formats.read_text(cfg.inputs[0])
    p = formats.parse_graded_pair(text, cfg.ring, source)
    r = verify_les(p)
    d = dual_pair(p)
    return {
        "n_max": p.n_max,
        "certified_max": max(r.degrees) if r.degrees else -1,
        "homology": homology_entries(omega(p).homology_all()),
        "omega_prime_homology": homology_entries(omega_prime(p).homology_all()),
        "nodes": {str(n): list(v) for n, v in r.nodes.items()},
        "maps": {str(n): list(v) for n, v in r.maps.items()},
        "exact": r.exact,
        "dual_psi_dims": d.psi_dims,
    }


COMMANDS = {
    "glmy": cmd_glmy,
    "sc": cmd_sc,
    "kpower": cmd_kpower,
    "free": cmd_free,
    "pathcomplex": cmd_pathcomplex,
    "simplicial": cmd_simplicial,
    "group": cmd_group,
    "coacyclic": cmd_coacyclic,
    "wedge": cmd_wedge,
    "union-split": cmd_union_split,
    "pontryagin": cmd_pontryagin,
    "hochschild": cmd_hochschild,
    "box": cmd_box,
    "kunneth-check": cmd_kunneth_check,
    "compare": cmd_compare,
    "cohomology": cmd_cohomology,
    "homotopy-check": cmd_homotopy_check,
    "les-check": cmd_les_check,
}


# ---------------------------------------------------------------------------
# argument parsing and output


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default="Z", help="Z, Q or Fp:p (default Z)")
    common.add_argument("--nmax", type=int, default=DEFAULT_NMAX, help="truncation degree (default 5)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--torsion", action="store_true", help="require torsion information")

    parser = argparse.ArgumentParser(prog="pathhom", description="Homology of path pairs, quivers and groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, *positionals, help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        for p in positionals:
            sp.add_argument(p)
        return sp

    add("glmy", "input", help="path homology of a digraph")
    add("sc", "input", help="square-commutative homology of a quiver or digraph")
    add("kpower", "input", help="k-power homology").add_argument("--k", type=int, required=True)
    add("free", "input", help="homology in the free category")
    add("pathcomplex", "input", help="path homology of a path complex").add_argument(
        "--route", choices=("regular", "nerve"), default="regular")
    sp = add("simplicial", "input", help="homology of the digraph of a simplicial complex")
    sp.add_argument("--variant", choices=("G", "G2"), default="G")
    sp.add_argument("--theory", choices=("sc", "glmy"), default="sc")
    add("group", "group", help="homology of a pointed subset of a group").add_argument("--subset", required=True)
    add("coacyclic", "group", help="compare H(G, X) with H(G) over Z").add_argument("--subset", required=True)
    sp = add("wedge", "group", "group2", help="wedge of two pointed subsets")
    sp.add_argument("--subset", required=True)
    sp.add_argument("--subset2", required=True)
    sp = add("union-split", "group", help="splitting of H(G, X ∪ Y)")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    add("pontryagin", "group", help="Pontryagin product on H(G, X)").add_argument("--subset", required=True)
    sp = add("hochschild", "input", help="Hochschild homology of a pointed submodule")
    sp.add_argument("--submodule")
    sp.add_argument("--bimodule")
    for name in ("box", "kunneth-check"):
        sp = add(name, "input", "input2", help="box product" if name == "box" else "Eilenberg-Zilber and Künneth")
        sp.add_argument("--theory", choices=("sc", "glmy", "free", "kpower"), default="sc")
        sp.add_argument("--k", type=int)
    add("compare", "which", "input", help="compare sc with GLMY (use: compare sc-glmy FILE)")
    sp = add("cohomology", "input", help="cohomology with cup-product checks (field)")
    sp.add_argument("--theory", choices=("sc", "glmy", "free", "kpower"), default="sc")
    sp.add_argument("--k", type=int)
    sp = add("homotopy-check", "f", "g", "phi", help="natural transformation gives equal maps on homology")
    sp.add_argument("--source")
    sp.add_argument("--target")
    sp.add_argument("--theory", choices=("sc", "glmy", "free", "kpower"), default="sc")
    sp.add_argument("--k", type=int)
    add("les-check", "input", help="long exact sequence and duality for a graded pair (field)")
    return parser


_POSITIONALS = ("input", "input2", "group", "group2", "f", "g", "phi")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    ring = Ring.parse(args.ring)
    ns = vars(args)
    inputs = [ns[k] for k in _POSITIONALS if ns.get(k) is not None]
    skip = set(_POSITIONALS) | {"command", "ring", "nmax", "format"}
    options = {k: v for k, v in ns.items() if k not in skip and v is not None}
    return RunConfig(args.command, inputs, ring, args.nmax, args.format, options)


def run(cfg: RunConfig) -> dict:
    _field_guard(cfg)
    body = COMMANDS[cfg.command](cfg)
    report = {"command": cfg.command, "ring": str(cfg.ring), "inputs": list(cfg.inputs)}
    report.update(body)
    return report


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_report(text: str) -> dict:
    return json.loads(text)


def group_text(rank: int, torsion: Sequence[int], ring: str) -> str:
    """``Z^2 + Z/3`` over Z; ``Q^2`` or ``Fp:5^2`` over a field."""
    symbol = "Z" if ring == "Z" else ring
    parts = []
    if rank:
        parts.append(symbol if rank == 1 else f"{symbol}^{rank}")
    parts += [f"Z/{t}" for t in torsion]
    return " + ".join(parts) if parts else "0"


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}", f"ring: {report['ring']}"]
    if "dims" in report:
        lines.append("dims: " + " ".join(str(d) for d in report["dims"]))
    if "certified_max" in report:
        lines.append(f"certified degrees: 0..{report['certified_max']}")
    for entry in report.get("homology", []):
        text = group_text(entry["rank"], entry["torsion"], report["ring"])
        lines.append(f"H_{entry['degree']}: rank {entry['rank']}, torsion {entry['torsion']}  ({text})")
    skip = {"command", "ring", "inputs", "dims", "certified_max", "homology"}
    for key in sorted(report):
        if key not in skip:
            lines.append(f"{key}: {json.dumps(report[key], sort_keys=True, ensure_ascii=False)}")
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        report = run(cfg)
    except PathHomError as e:
        print(f"error ({type(e).__name__}): {e}", file=sys.stderr)
        witnesses = getattr(e, "witnesses", None)
        if witnesses:
            for w in witnesses:
                print(f"  witness: {w}", file=sys.stderr)
        return e.exit_code
    out = render_json(report) if cfg.output == "json" else render_text(report)
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
