"""Batch command line front end.

Every subcommand prints a JSON document (the canonical machine format) or
a plain-text table derived from it.  Identical inputs produce
byte-identical output.  Domain errors exit with status 1 and a
machine-readable error object; malformed input exits with status 2.
"""

from __future__ import annotations

import json
import sys

import click

from . import permgroup as pg
from .errors import OrbcatError
from .linalg import GF, QQ, ZZ
from .orbitcat import (build_orbit_category, constant_module,
                       truncated_constant_module)


def ring_from_spec(spec):
    s = spec.strip().upper()
    if s == "Z":
        return ZZ
    if s == "Q":
        return QQ
    if s.startswith("F"):
        return GF(int(s[1:]))
    raise ValueError(f"cannot parse ring spec {spec!r}")


def degrees_from_spec(spec):
    s = spec.strip()
    if ".." in s:
        lo, hi = s.split("..")
        lo, hi = int(lo), int(hi)
    else:
        lo, hi = 0, int(s)
    if lo != 0:
        raise ValueError("degree ranges must start at 0")
    if hi < 0:
        raise ValueError("degree bound must be >= 0")
    return hi


def emit(data, fmt):
    if fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        _emit_table(data)


def _emit_table(data, indent=0):
    pad = "  " * indent
    if isinstance(data, dict):
        for k in sorted(data):
            v = data[k]
            if isinstance(v, (dict, list)):
                click.echo(f"{pad}{k}:")
                _emit_table(v, indent + 1)
            else:
                click.echo(f"{pad}{k}: {v}")
    elif isinstance(data, list):
        for v in data:
            if isinstance(v, (dict, list)):
                _emit_table(v, indent + 1)
            else:
                click.echo(f"{pad}{v}")
    else:
        click.echo(f"{pad}{data}")


def run_guarded(fn):
    try:
        fn()
    except OrbcatError as exc:
        click.echo(json.dumps({"error": {"type": type(exc).__name__,
                                         "message": str(exc)}},
                              sort_keys=True))
        sys.exit(1)
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        click.echo(json.dumps({"error": {"type": "BadInput",
                                         "message": str(exc)}},
                              sort_keys=True))
        sys.exit(2)


def coefficient_module(cat, ring, spec):
    from .catmod import free_module
    s = spec.strip().lower()
    if s == "constant":
        return constant_module(cat, ring)
    if s.startswith("truncated:"):
        return truncated_constant_module(cat, ring, int(s.split(":")[1]))
    if s.startswith("free:"):
        sub = pg.subgroup_from_spec(cat.group, s.split(":", 1)[1])
        return free_module(cat, ring, cat.object_index(sub), "contra")
    raise ValueError(f"cannot parse coefficient spec {spec!r}")


group_opt = click.option("--group", "group_spec", required=True,
                         help="preset (C4, S3, D4, C2xC2), cycles, or JSON")
family_opt = click.option("--family", "family_spec", default="all",
                          show_default=True,
                          help="all | triv | p:<prime>")
ring_opt = click.option("--ring", "ring_spec", default="Z",
                        show_default=True, help="Z | Q | F<p>")
fmt_opt = click.option("--format", "fmt", default="json",
                       type=click.Choice(["json", "table"]),
                       show_default=True)


@click.group()
def main():
    """Exact computations in the orbit, span, and double-coset categories
    of a finite permutation group, and in Houghton's groups."""


@main.group()
def group():
    """Inspect the ambient permutation group."""


@group.command("info")
@group_opt
@fmt_opt
def group_info(group_spec, fmt):
    def go():
        G = pg.group_from_spec(group_spec)
        classes = pg.subgroups_up_to_conjugacy(G)
        data = {
            "degree": G.degree,
            "order": G.order,
            "generators": [pg.cycle_string(p) for p in G.generators],
            "subgroup_classes": [
                {"order": H.order,
                 "generators": [pg.cycle_string(G.elements[g])
                                for g in _gens_of(H)]}
                for H in classes],
        }
        emit(data, fmt)
    run_guarded(go)


def _gens_of(H):
    from .orbitcat import _small_generating_set
    return _small_generating_set(H) or [H.parent.id]


def _hom_tables(cat, source, target):
    i = cat.object_index(source)
    j = cat.object_index(target)
    basis = cat.hom_basis(i, j)
    comp = []
    if i == j:
        for b1 in basis:
            for b2 in basis:
                prod = cat.compose(b2, b1)
                comp.append({
                    "first": basis.index(b1),
                    "then": basis.index(b2),
                    "result": {str(basis.index(k)): v
                               for k, v in prod.items()},
                })
    return i, j, basis, comp


@main.group()
def orbit():
    """The category of transitive G-sets."""


@orbit.command("homs")
@group_opt
@family_opt
@click.option("--source", default="triv", show_default=True)
@click.option("--target", default="triv", show_default=True)
@fmt_opt
def orbit_homs(group_spec, family_spec, source, target, fmt):
    def go():
        G = pg.group_from_spec(group_spec)
        fam = pg.family_from_spec(G, family_spec)
        cat = build_orbit_category(G, fam)
        src = pg.subgroup_from_spec(G, source)
        tgt = pg.subgroup_from_spec(G, target)
        i, j, basis, comp = _hom_tables(cat, src, tgt)
        data = {"objects": cat.object_names,
                "source": cat.object_names[i],
                "target": cat.object_names[j],
                "basis": [{"coset": pg.cycle_string(G.elements[b.coset])}
                          for b in basis],
                "composition": comp}
        emit(data, fmt)
    run_guarded(go)


@main.group()
def mackey():
    """The category of spans (Mackey morphisms)."""


@mackey.command("homs")
@group_opt
@family_opt
@click.option("--source", default="triv", show_default=True)
@click.option("--target", default="triv", show_default=True)
@fmt_opt
def mackey_homs(group_spec, family_spec, source, target, fmt):
    def go():
        from .mackeycat import build_mackey_category
        G = pg.group_from_spec(group_spec)
        fam = pg.family_from_spec(G, family_spec)
        cat = build_mackey_category(G, fam)
        src = pg.subgroup_from_spec(G, source)
        tgt = pg.subgroup_from_spec(G, target)
        i, j, basis, comp = _hom_tables(cat, src, tgt)
        data = {"objects": cat.object_names,
                "source": cat.object_names[i],
                "target": cat.object_names[j],
                "basis": [{"coset": pg.cycle_string(G.elements[b.coset]),
                           "tube_order": b.tube.order}
                          for b in basis],
                "composition": comp}
        emit(data, fmt)
    run_guarded(go)


@main.group()
def hecke():
    """The double-coset category of permutation-module maps."""


@hecke.command("homs")
@group_opt
@family_opt
@click.option("--source", default="triv", show_default=True)
@click.option("--target", default="triv", show_default=True)
@click.option("--debug-oracle", is_flag=True, default=False,
              help="check the counting formula against permutation "
                   "matrices")
@fmt_opt
def hecke_homs(group_spec, family_spec, source, target, debug_oracle, fmt):
    def go():
        from .heckecat import build_hecke_category
        G = pg.group_from_spec(group_spec)
        fam = pg.family_from_spec(G, family_spec)
        cat = build_hecke_category(G, fam, debug_oracle=debug_oracle)
        src = pg.subgroup_from_spec(G, source)
        tgt = pg.subgroup_from_spec(G, target)
        i, j, basis, comp = _hom_tables(cat, src, tgt)
        data = {"objects": cat.object_names,
                "source": cat.object_names[i],
                "target": cat.object_names[j],
                "basis": [{"rep": pg.cycle_string(G.elements[b.rep])}
                          for b in basis],
                "composition": comp}
        emit(data, fmt)
    run_guarded(go)


@main.group()
def bredon():
    """Cohomology over the orbit category."""


@bredon.command("cohomology")
@group_opt
@family_opt
@ring_opt
@click.option("--degrees", default="0..4", show_default=True)
@click.option("--coeff", default="constant", show_default=True,
              help="constant | truncated:<k> | free:<subgroup>")
@fmt_opt
def bredon_cohomology_cmd(group_spec, family_spec, ring_spec, degrees,
                          coeff, fmt):
    def go():
        from .catmod import bredon_cohomology
        G = pg.group_from_spec(group_spec)
        fam = pg.family_from_spec(G, family_spec)
        ring = ring_from_spec(ring_spec)
        depth = degrees_from_spec(degrees)
        cat = build_orbit_category(G, fam)
        M = coefficient_module(cat, ring, coeff)
        values = bredon_cohomology(cat, M, depth)
        emit({"group_order": G.order,
              "family": family_spec,
              "ring": str(ring),
              "cohomology": [str(v) for v in values]}, fmt)
    run_guarded(go)


@main.command("ext")
@group_opt
@family_opt
@ring_opt
@click.option("--degrees", default="0..4", show_default=True)
@click.option("--source-coeff", default="constant", show_default=True)
@click.option("--target-coeff", default="constant", show_default=True)
@fmt_opt
def ext_cmd(group_spec, family_spec, ring_spec, degrees, source_coeff,
            target_coeff, fmt):
    def go():
        from .catmod import ext
        G = pg.group_from_spec(group_spec)
        fam = pg.family_from_spec(G, family_spec)
        ring = ring_from_spec(ring_spec)
        depth = degrees_from_spec(degrees)
        cat = build_orbit_category(G, fam)
        A = coefficient_module(cat, ring, source_coeff)
        B = coefficient_module(cat, ring, target_coeff)
        values = ext(A, B, depth)
        emit({"ext": [str(v) for v in values]}, fmt)
    run_guarded(go)


@main.command("induce")
@group_opt
@family_opt
@ring_opt
@click.option("--target", "target_cat", default="mackey",
              type=click.Choice(["mackey", "hecke"]), show_default=True)
@fmt_opt
def induce_cmd(group_spec, family_spec, ring_spec, target_cat, fmt):
    def go():
        G = pg.group_from_spec(group_spec)
        fam = pg.family_from_spec(G, family_spec)
        ring = ring_from_spec(ring_spec)
        ocat = build_orbit_category(G, fam)
        const = constant_module(ocat, ring)
        if target_cat == "mackey":
            from .mackeycat import build_mackey_category, induce_to_mackey
            tcat = build_mackey_category(G, fam)
            ind = induce_to_mackey(const, ocat, tcat)
        else:
            from .heckecat import build_hecke_category, induce_to_hecke
            tcat = build_hecke_category(G, fam)
            ind = induce_to_hecke(const, ocat, tcat)
        emit({"target": target_cat,
              "objects": tcat.object_names,
              "values": [str(ind.value(i).invariants())
                         for i in range(tcat.n_objects)]}, fmt)
    run_guarded(go)


@main.command("dual")
@group_opt
@family_opt
@ring_opt
@click.option("--object", "object_spec", default="triv", show_default=True)
@fmt_opt
def dual_cmd(group_spec, family_spec, ring_spec, object_spec, fmt):
    def go():
        from .catmod import dual_module, free_module
        G = pg.group_from_spec(group_spec)
        fam = pg.family_from_spec(G, family_spec)
        ring = ring_from_spec(ring_spec)
        cat = build_orbit_category(G, fam)
        idx = cat.object_index(pg.subgroup_from_spec(G, object_spec))
        M = free_module(cat, ring, idx, "contra")
        MD = dual_module(M)
        cov = free_module(cat, ring, idx, "cov")
        emit({"object": cat.object_names[idx],
              "dual_values": [str(MD.value(i).invariants())
                              for i in range(cat.n_objects)],
              "corepresentable_values": [str(cov.value(i).invariants())
                                         for i in range(cat.n_objects)]},
             fmt)
    run_guarded(go)


@main.group()
def houghton():
    """Houghton's groups of eventual translations."""


def _load_element(path):
    from .houghton import HoughtonElement
    with open(path) as fh:
        return HoughtonElement.from_json(json.load(fh))


@houghton.command("centraliser")
@click.option("--element", "paths", multiple=True, required=True,
              type=click.Path(exists=True),
              help="JSON file; repeat for a subgroup, use --infinite for "
                   "the cyclic part")
@click.option("--infinite", "infinite_path", default=None,
              type=click.Path(exists=True),
              help="infinite-order part for a virtually cyclic subgroup")
@fmt_opt
def houghton_centraliser(paths, infinite_path, fmt):
    def go():
        from .houghton import (centraliser_of_element,
                               centraliser_of_finite_subgroup,
                               centraliser_of_vcyc)
        elements = [_load_element(p) for p in paths]
        if infinite_path is not None:
            w = _load_element(infinite_path)
            shape = centraliser_of_vcyc(elements, w)
        elif len(elements) == 1:
            shape = centraliser_of_element(elements[0])
        else:
            shape = centraliser_of_finite_subgroup(elements)
        emit(shape.to_json(), fmt)
    run_guarded(go)


@houghton.command("conjugate")
@click.argument("first", type=click.Path(exists=True))
@click.argument("second", type=click.Path(exists=True))
@fmt_opt
def houghton_conjugate(first, second, fmt):
    def go():
        from .houghton import are_conjugate_finite, cycle_type
        q1 = _load_element(first)
        q2 = _load_element(second)
        emit({"conjugate": are_conjugate_finite(q1, q2),
              "cycle_types": [list(cycle_type(q1)),
                              list(cycle_type(q2))]}, fmt)
    run_guarded(go)


@houghton.command("gamma")
@click.option("--element", "path", required=True,
              type=click.Path(exists=True))
@fmt_opt
def houghton_gamma(path, fmt):
    def go():
        from .houghton import gamma_graph
        q = _load_element(path)
        vertices, edges, J, comps = gamma_graph(q)
        emit({"vertices": vertices,
              "edges": [list(e) for e in edges],
              "eventually_fixed_rays": list(J),
              "components": comps,
              "component_count": len(comps)}, fmt)
    run_guarded(go)


if __name__ == "__main__":
    main()
