"""Command-line entry point.

Subcommands: ``gen``, ``dist``, ``audit``, ``retrieve``, ``demo-robots`` and
``sweep-r``. Exit status is 0 on success, 1 when ``--strict`` audits find
violations and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .contour import (feature_sequence, generate_shape, load_contour,
                      resample_uniform, save_contour)
from .elastic import CostModel, load_cost_model, nem_r, nem_sigma, nem_sigma_cyclic
from .metric_audit import (audit_dissimilarity, audit_nem_r_bound,
                           relaxation_modulus, sample_triples,
                           theta_surrogate_nem_sigma)
from .retrieval import (RobotSpec, SceneSpec, distance_matrix, knn_query,
                        load_manifest, robot_scenario, save_matrix)

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[float]:
    """``start:stop:step`` with ``stop`` included, or a comma list."""
    if ":" not in text:
        return [float(v) for v in text.split(",")]
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected start:stop:step") from None
    if step <= 0 or stop < start:
        raise UsageError(f"empty range {text!r}")
    count = int(round((stop - start) / step)) + 1
    return [start + k * step for k in range(count)]


def sweep_r(X, Y, r_values) -> list[tuple[float, float, float, float]]:
    """Rows ``(r, total, stretch_part, distance_part)`` of constant-penalty
    matching, one per ``r``."""
    r_values = list(r_values)
    if not r_values:
        raise ValueError("empty r range")
    rows = []
    for r in r_values:
        rep = nem_r(X, Y, r)
        rows.append((float(r), rep.total, rep.stretch_part, rep.distance_part))
    return rows


def _model(path):
    return CostModel() if path is None else load_cost_model(path)


def _write_json(doc, out):
    text = json.dumps(doc, indent=1)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_gen(args):
    params = {k: getattr(args, k) for k in ("radius", "a", "b", "sides", "p", "noise")
              if getattr(args, k) is not None}
    attrs = {} if args.velocity is None else {"velocity": args.velocity}
    c = generate_shape(args.kind, args.n, name=args.name, seed=args.seed,
                       rotation=args.rotation, attrs=attrs, **params)
    save_contour(args.out, c)
    return 0


def _load_seq(path, resample):
    c = load_contour(path)
    if resample:
        c = resample_uniform(c, resample)
    return feature_sequence(c)


def cmd_dist(args):
    cm = _model(args.model)
    X, Y = _load_seq(args.x, args.resample), _load_seq(args.y, args.resample)
    if args.cyclic:
        res = nem_sigma_cyclic(X, Y, cm)
        rep, rotation = res.report, res.best_rotation
    else:
        rep, rotation = nem_sigma(X, Y, cm), None
    doc = {"total": rep.total, "stretch_part": rep.stretch_part,
           "distance_part": rep.distance_part, "m": rep.m, "n": rep.n}
    if rotation is not None:
        doc["best_rotation"] = rotation
    if args.json:
        print(json.dumps(doc))
    else:
        print(f"total {rep.total!r}")
        print(f"stretch_part {rep.stretch_part!r}")
        print(f"distance_part {rep.distance_part!r}")
        if rotation is not None:
            print(f"best_rotation {rotation}")
    return 0


def cmd_audit(args):
    corpus = load_manifest(args.manifest)
    if args.mode == "nem-r":
        rep = audit_nem_r_bound(list(corpus.contours), args.r, corpus.resample_n,
                                args.trials, args.seed)
        doc = rep.to_dict()
        doc["mode"] = "nem-r"
        doc["r"] = args.r
    else:
        cm = corpus.cost_model
        seqs = list(corpus.sequences)
        D = distance_matrix(corpus).values
        triples = sample_triples(len(seqs), args.trials, args.seed)

        def d(x, y):
            return nem_sigma(x, y, cm).total

        rep = audit_dissimilarity(
            d, seqs, lambda x, z: theta_surrogate_nem_sigma(x, z, cm), triples,
            names=list(corpus.names), D=D)
        doc = rep.to_dict()
        doc["mode"] = "nem-sigma"
        doc["theta_hat"] = relaxation_modulus(
            d, seqs, triples, names=list(corpus.names), D=D).theta_hat
    _write_json(doc, args.out)
    if args.out:
        status = "ok" if rep.ok else f"{len(rep.violations)} violation(s)"
        print(f"audit {doc['mode']}: {status}, max_ratio {rep.max_ratio}")
    return 1 if args.strict and not rep.ok else 0


def cmd_retrieve(args):
    corpus = load_manifest(args.manifest)
    query = load_contour(args.query)
    for name, dist in knn_query(corpus, query, args.k):
        print(f"{name},{dist!r}")
    if args.matrix_out:
        save_matrix(args.matrix_out, distance_matrix(corpus, args.jobs))
    return 0


def _triple(text, name):
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 3:
        raise UsageError(f"--{name} needs three comma-separated values")
    return vals


def cmd_demo_robots(args):
    xs = _triple(args.positions, "positions")
    vs = _triple(args.velocities, "velocities")
    radii = _triple(args.radii, "radii")
    robots = tuple(
        RobotSpec(name, {"kind": "circle", "radius": rad}, x, v)
        for name, rad, x, v in zip(("green", "blue", "purple"), radii, xs, vs))
    scene = SceneSpec(robots, t=args.t, r0=args.r0, r1=args.r1)
    res = robot_scenario(scene)
    names = [rb.name for rb in robots]
    doc = {
        "t": args.t,
        "names": names,
        "gap": res.gaps.tolist(),
        "gap_audit": res.gap_audit.to_dict(),
        "nem_sigma": res.nem_sigma.tolist(),
        "nem_sigma_audit": res.nem_sigma_audit.to_dict(),
        "theta_hat": res.theta_hat,
        "overlapping": res.overlapping,
    }
    _write_json(doc, args.out)
    g = res.gaps
    print(f"gap(green,blue) + gap(blue,purple) = {g[0, 1] + g[1, 2]!r}; "
          f"gap(green,purple) = {g[0, 2]!r}")
    print(f"gap triangle violations: {len(res.gap_audit.violations)}; "
          f"NEM_sigma relaxed-triangle violations: "
          f"{len(res.nem_sigma_audit.violations)}")
    return 0


def cmd_sweep_r(args):
    X, Y = _load_seq(args.x, args.resample), _load_seq(args.y, args.resample)
    rows = sweep_r(X, Y, parse_range(args.r))
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(["r", "total", "stretch_part", "distance_part"])
        for row in rows:
            w.writerow([repr(v) for v in row])
    finally:
        if args.out:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = argparse.ArgumentParser(prog="nemsigma", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[seeded], help="generate a contour file")
    g.add_argument("--kind", required=True,
                   choices=["circle", "ellipse", "regular_polygon", "superellipse",
                            "perturbed"])
    g.add_argument("--n", type=int, default=64)
    for name in ("radius", "a", "b", "p", "noise", "velocity"):
        g.add_argument(f"--{name}", type=float)
    g.add_argument("--sides", type=int)
    g.add_argument("--rotation", type=float, default=0.0)
    g.add_argument("--name")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("dist", help="elastic distance between two contours")
    d.add_argument("--x", required=True)
    d.add_argument("--y", required=True)
    d.add_argument("--model")
    d.add_argument("--resample", type=int)
    d.add_argument("--cyclic", action="store_true")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_dist)

    a = sub.add_parser("audit", parents=[seeded], help="audit metric axioms on a corpus")
    a.add_argument("--manifest", required=True)
    a.add_argument("--mode", choices=["nem-sigma", "nem-r"], default="nem-sigma")
    a.add_argument("--r", type=float, default=1.0)
    a.add_argument("--trials", type=int, default=200)
    a.add_argument("--out")
    a.add_argument("--strict", action="store_true")
    a.set_defaults(func=cmd_audit)

    r = sub.add_parser("retrieve", help="k nearest corpus shapes to a query")
    r.add_argument("--manifest", required=True)
    r.add_argument("--query", required=True)
    r.add_argument("--k", type=int, default=3)
    r.add_argument("--matrix-out")
    r.add_argument("--jobs", type=int, default=1)
    r.set_defaults(func=cmd_retrieve)

    b = sub.add_parser("demo-robots", help="three-robot triangle-inequality demo")
    b.add_argument("--positions", default="0,4,8")
    b.add_argument("--velocities", default="0,0,0")
    b.add_argument("--radii", default="1,1,1")
    b.add_argument("--t", type=float, default=0.0)
    b.add_argument("--r0", type=float, default=1.0)
    b.add_argument("--r1", type=float, default=1.0)
    b.add_argument("--out")
    b.set_defaults(func=cmd_demo_robots)

    s = sub.add_parser("sweep-r", help="distance versus stretch penalty r")
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--r", default="0:2:0.25")
    s.add_argument("--resample", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep_r)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"nemsigma {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
