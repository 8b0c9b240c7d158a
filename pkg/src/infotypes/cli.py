"""Command-line front end: ``infotypes {teleport,check,analyze,interferometer}``.

Exit codes: 0 success, 1 a theorem or assertion failed, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import circuits as cc
from . import theorems as th
from .bases import (
    as_decomposition,
    fourier_basis,
    mub_family,
    x_basis,
    y_basis,
    z_basis,
)
from .core import TOL, basis_ket, density, random_ket, reduced_density, tensor
from .documents import SCHEMA_VERSION, load_any
from .errors import InfoTypesError
from .fixtures import SHAPE_3Q, bell_state, ghz_state, split_information_state
from .information import (
    all_information_present,
    all_information_present_mixed,
    classify,
    mutually_unbiased,
    strongly_incompatible,
)
from .instances import GENERATORS, run_sweep

TOL_ENV = "INFOTYPES_TOL"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- helpers

def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None
    if not tol > 0:
        raise UsageError(f"{TOL_ENV} must be positive")
    return tol


def _parse_shape(text):
    try:
        shape = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise UsageError(f"--shape must look like 2,2,2, got {text!r}") from None
    if any(s < 1 for s in shape):
        raise UsageError("--shape entries must be positive")
    return shape


def _named_bases(letters: str, d: int) -> list:
    """``z``, ``x``, ``y`` (qubit only), ``f`` Fourier, ``m`` the full mutually unbiased family."""
    out = []
    for ch in letters.lower():
        if ch == "z":
            out.append(("Z", z_basis(d)))
        elif ch == "f":
            out.append(("F", fourier_basis(d)))
        elif ch in "xy":
            if d != 2:
                raise UsageError(f"basis {ch!r} is only defined for qubits; use 'f' or 'm'")
            out.append((ch.upper(), x_basis() if ch == "x" else y_basis()))
        elif ch == "m":
            try:
                out += [(f"M{i}", b) for i, b in enumerate(mub_family(d))]
            except InfoTypesError as exc:
                raise UsageError(str(exc)) from None
        else:
            raise UsageError(f"unknown basis letter {ch!r}; use z, x, y, f or m")
    return out


def _emit(doc: dict, text_lines: list, fmt: str) -> None:
    if fmt == "structured":
        print(json.dumps(doc, sort_keys=True, indent=1))
    else:
        print("\n".join(text_lines))


def _fmt(x: float) -> str:
    return f"{x:.3e}"


# ---------------------------------------------------------------- teleport

def _type_verdicts(circuit, d, tol):
    psi = cc.channel_ket(circuit)
    shape = cc.channel_ket_shape(circuit)
    out = circuit.output_factor + 1
    x_name = "X" if d == 2 else "F"
    return {
        "Z": classify(psi, shape, z_basis(d), tol, 0, [out]),
        x_name: classify(psi, shape, fourier_basis(d), tol, 0, [out]),
    }


def cmd_teleport(args) -> int:
    d, bits = args.dim, args.bits
    if d < 2:
        raise UsageError("--dim must be at least 2")
    circuit = cc.teleport_circuit(bits, d)
    rng = np.random.default_rng(args.seed)
    fids = [cc.teleport_fidelity(circuit, random_ket(d, rng)) for _ in range(args.trials)]
    min_fid = float(min(fids))
    ok = min_fid >= 1 - args.tol
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "teleport",
        "bits": bits,
        "dim": d,
        "trials": args.trials,
        "seed": args.seed,
        "tol": args.tol,
        "min_fidelity": min_fid,
        "process_fidelity": cc.process_fidelity(circuit),
        "ok": ok,
    }
    lines = [
        f"{bits}-bit teleportation, d={d}, {args.trials} random inputs (seed {args.seed})",
        f"  min fidelity      {min_fid:.12f}",
        f"  process fidelity  {doc['process_fidelity']:.12f}",
    ]
    if args.drop_correction:
        drops = [("z",)] if bits == 1 else [("x",), ("z",), ("x", "z")]
        rows = []
        lines.append("  corrections removed -> information at output:")
        for tags in drops:
            broken = circuit.without(tags)
            verdicts = _type_verdicts(broken, d, args.tol)
            bf = float(min(cc.teleport_fidelity(broken, random_ket(d, rng)) for _ in range(args.trials)))
            rows.append({"dropped": list(tags), "verdicts": verdicts, "min_fidelity": bf})
            shown = ", ".join(f"{k} {v}" for k, v in verdicts.items())
            lines.append(f"    drop {'+'.join(tags):<4} {shown}  (min fidelity {bf:.4f})")
        doc["drop_correction"] = rows
    lines.append("OK" if ok else "FAIL: fidelity below 1 - tol")
    _emit(doc, lines, args.format)
    return 0 if ok else 1


# ---------------------------------------------------------------- check fixtures

def _b6():
    return split_information_state(), SHAPE_3Q


def _fixtures(theorem, tol):
    """Qubit examples from the text, as ``(name, report)`` pairs."""
    Z, X, Y = z_basis(2), x_basis(), y_basis()
    b6, s3 = _b6()
    out = []
    if theorem == "presence":
        out.append(("bell Z,X", th.check_presence(bell_state(), (2, 2), Z, X, tol=tol, seed=0)))
        c = cc.one_bit_teleport(2)
        out.append(("one-bit channel ket Z,X",
                    th.check_presence(cc.channel_ket(c), cc.channel_ket_shape(c), Z, X, tol=tol, seed=0, target=[2])))
    elif theorem == "pure-component":
        rho_ab = reduced_density(b6, s3, [0, 1])
        out.append(("split state rho_ab, X", th.check_pure_component_lemma(rho_ab, (2, 2), X, tol)))
        mix = 0.5 * density(tensor(bell_state(), basis_ket(2, 0))) + 0.5 * density(tensor(basis_ket(2, 1), basis_ket(4, 3)))
        out.append(("bell / |11> mixture, Z", th.check_pure_component_lemma(mix, (2, 4), Z, tol)))
    elif theorem == "truncation":
        out.append(("ghz, Z", th.check_truncation(ghz_state(3), s3, Z, tol=tol, seed=0)))
        out.append(("split state, X", th.check_truncation(b6, s3, X, tol=tol, seed=0)))
    elif theorem == "exclusion":
        out.append(("interferometer lambda=1", th.check_exclusion(cc.interferometer_channel_ket(1.0), s3, Z, X, tol)))
        out.append(("split state X,Z", th.check_exclusion(b6, s3, X, Z, tol)))
    elif theorem == "no-splitting":
        out.append(("bell (x) |0>", th.check_no_splitting(tensor(bell_state(), basis_ket(2, 0)), s3, tol=tol, seed=0)))
        c = cc.one_bit_teleport(2)
        out.append(("one-bit teleport, environment a'",
                    th.check_no_splitting(cc.channel_ket(c), cc.channel_ket_shape(c), tol=tol, seed=0,
                                          witness=2, third=1)))
    elif theorem == "somewhere":
        out.append(("bell (x) |0>", th.check_somewhere(tensor(bell_state(), basis_ket(2, 0)), s3, tol=tol, seed=0)))
        psi = cc.channel_ket(cc.two_bit_teleport(2))
        out.append(("two-bit teleport, environment ac",
                    th.check_somewhere(psi, (2, 4, 2), tol=tol, seed=0, witness=2, third=1)))
    elif theorem == "absence-simple":
        out.append(("|0>|+>, Z", th.check_absence_simple(tensor(basis_ket(2, 0), X.vectors[:, 0]), (2, 2), Z, tol)))
    elif theorem == "absence-general":
        rho = density(tensor(basis_ket(2, 0), X.vectors[:, 0]))
        out.append(("|0>|+>, Z,X,Y", th.check_absence_general(rho, (2, 2), [Z, X, Y], tol)))
    elif theorem == "no-cloning":
        gamma = X.vectors[:, 0]
        M = cc.Isometry(np.kron(cc.hadamard(), gamma[:, None]))
        inst = th.CloningInstance(M, (basis_ket(2, 0), X.vectors[:, 0]), (2, 2))
        out.append(("H (x) |+>", th.check_generalized_no_cloning(inst, tol)))
        copier = np.zeros((4, 2), dtype=complex)
        copier[0, 0] = copier[3, 1] = 1
        inst = th.CloningInstance(cc.Isometry(copier), (basis_ket(2, 0), X.vectors[:, 0]), (2, 2))
        out.append(("copier on |0>,|+>", th.check_generalized_no_cloning(inst, tol)))
    return out


def _absence_with_bases(args, bases):
    """Random product states and the split-state marginal, absence checked with the given bases only."""
    names = "".join(n for n, _ in bases)
    decomps = [b for _, b in bases]
    reports = []
    seeds = np.random.SeedSequence(args.seed).spawn(args.trials)
    for s in seeds:
        rng = np.random.default_rng(s)
        rho = np.kron(density(random_ket(args.dim, rng)), density(random_ket(3, rng)))
        r = th.check_absence_general(rho, (args.dim, 3), decomps, args.tol)
        r.seed = int(s.generate_state(1)[0])
        reports.append(r)
    fixtures = []
    if args.dim == 2:
        b6, s3 = _b6()
        rho_ab = reduced_density(b6, s3, [0, 1])
        fixtures.append((f"split state rho_ab, {names}", th.check_absence_general(rho_ab, (2, 2), decomps, args.tol)))
    return reports, fixtures


def _report_row(name, r):
    return f"  {name:<36} {r.status:<8} worst {_fmt(r.worst)}"


def cmd_check(args) -> int:
    if args.dim < 2:
        raise UsageError("--dim must be at least 2")
    if args.bases is not None:
        if args.theorem != "absence-general":
            raise UsageError("--bases only applies to absence-general")
        bases = _named_bases(args.bases, args.dim)
        reports, fixtures = _absence_with_bases(args, bases)
    else:
        reports = run_sweep(args.theorem, args.dim, args.trials, args.seed, args.tol, args.jobs).reports
        fixtures = _fixtures(args.theorem, args.tol)
    counts = {s: sum(r.status == s for r in reports) for s in ("pass", "vacuous", "fail")}
    fixture_fails = sum(r.status == "fail" for _, r in fixtures)
    ok = counts["fail"] == 0 and fixture_fails == 0
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "check",
        "theorem": args.theorem,
        "dim": args.dim,
        "trials": args.trials,
        "seed": args.seed,
        "tol": args.tol,
        "counts": counts,
        "reports": [r.to_document() for r in reports],
        "fixtures": [{"name": n, "report": r.to_document()} for n, r in fixtures],
        "ok": ok,
    }
    if args.bases is not None:
        doc["bases"] = args.bases
    lines = [f"check {args.theorem}: d={args.dim}, {args.trials} random instances (seed {args.seed}, tol {args.tol:g})",
             f"  pass {counts['pass']}  vacuous {counts['vacuous']}  fail {counts['fail']}"]
    if args.verbose:
        lines += [_report_row(f"trial {i} (seed {r.seed})", r) for i, r in enumerate(reports)]
    if args.bases is not None and reports:
        rank = reports[0].details.get("operator_space_rank")
        lines.append(f"  bases {args.bases}: operator-space rank {rank} of {args.dim ** 2}"
                     + ("" if rank == args.dim ** 2 else " (spanning hypothesis fails)"))
    if fixtures:
        lines.append("  fixtures:")
        for name, r in fixtures:
            lines.append(_report_row(name, r))
            if args.bases is not None:
                dist = dict(r.violations)["rho = rho_a (x) rho_b"]
                absent = all(h.holds for h in r.hypotheses[1:])
                lines.append(f"    every listed type absent: {absent}; distance from rho_a (x) rho_b {_fmt(dist)}"
                             + (" -> not a product" if dist > args.tol else ""))
    for i, r in enumerate(reports):
        if r.status == "fail":
            lines.append(f"  FAIL trial {i} (seed {r.seed}): " + "; ".join(
                f"{d} {_fmt(m)}" for d, m in r.violations if m > args.tol))
    lines.append("OK" if ok else "FAIL")
    _emit(doc, lines, args.format)
    return 0 if ok else 1


# ---------------------------------------------------------------- analyze

def _fixture_state(name):
    if name == "b6":
        return split_information_state(), SHAPE_3Q
    if name == "bell":
        return bell_state(), (2, 2)
    if name == "ghz":
        return ghz_state(3), SHAPE_3Q
    if name in ("teleport1", "teleport2"):
        c = cc.one_bit_teleport(2) if name == "teleport1" else cc.two_bit_teleport(2)
        return cc.channel_ket(c), cc.channel_ket_shape(c)
    if name == "interferometer":
        return cc.interferometer_channel_ket(1.0), SHAPE_3Q
    raise UsageError(f"unknown fixture {name!r}")


FIXTURE_NAMES = ("b6", "bell", "ghz", "teleport1", "teleport2", "interferometer")


def cmd_analyze(args) -> int:
    if (args.state is None) == (args.fixture is None):
        raise UsageError("give exactly one of --state FILE or --fixture NAME")
    if args.state is not None:
        kind, payload = load_any(args.state)
        if kind != "state":
            raise UsageError("--state must hold a ket or operator document")
        x, shape = payload
    else:
        x, shape = _fixture_state(args.fixture)
    if args.shape is not None:
        shape = _parse_shape(args.shape)
    if shape is None:
        raise UsageError("the state file has no shape; pass --shape")
    if int(np.prod(shape)) != x.shape[0]:
        raise UsageError(f"shape {shape} does not match dimension {x.shape[0]}")
    src = args.source
    if not 0 <= src < len(shape):
        raise UsageError(f"--source {src} is not a factor of {shape}")
    d_a = shape[src]
    letters = args.bases or ("zxy" if d_a == 2 else "zf")
    decomps = _named_bases(letters, d_a)
    for i, path in enumerate(args.decomposition or []):
        kind, V = load_any(path)
        if kind != "decomposition":
            raise UsageError(f"{path} is not a decomposition document")
        if V.dim != d_a:
            raise UsageError(f"{path}: decomposition dimension {V.dim} does not match factor {src}")
        decomps.append((f"D{i}", V))

    others = [f for f in range(len(shape)) if f != src]
    targets = [[f] for f in others]
    if len(others) > 1:
        targets.append(others)
    pure = x.ndim == 1
    rows = []
    for t in targets:
        verdicts = {name: classify(x, shape, V, args.tol, src, t) for name, V in decomps}
        if pure and len(t) == len(others):
            all_in = all_information_present(x, shape, args.tol, src, t)
        else:
            all_in, _ = all_information_present_mixed(x, shape, 0, None, args.tol, src, t)
        rows.append({"target": t, "verdicts": verdicts, "all_information": bool(all_in)})
    relations = []
    for i in range(len(decomps)):
        for j in range(i + 1, len(decomps)):
            (n1, V), (n2, W) = decomps[i], decomps[j]
            rel = {"pair": [n1, n2], "strongly_incompatible": strongly_incompatible(V, W)}
            if as_decomposition(V).is_rank_one() and as_decomposition(W).is_rank_one():
                rel["mutually_unbiased"] = mutually_unbiased(V, W, max(args.tol, 1e-10))
            relations.append(rel)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "shape": list(shape),
        "source": src,
        "kind": "ket" if pure else "operator",
        "tol": args.tol,
        "targets": rows,
        "relations": relations,
    }
    lines = [f"state on shape {list(shape)} ({doc['kind']}), source factor {src}"]
    for row in rows:
        shown = ", ".join(f"{k} {v}" for k, v in row["verdicts"].items())
        lines.append(f"  target {row['target']}: {shown}; all information {'present' if row['all_information'] else 'not present'}")
    for rel in relations:
        extra = "" if "mutually_unbiased" not in rel else f", mutually unbiased {rel['mutually_unbiased']}"
        lines.append(f"  {rel['pair'][0]}/{rel['pair'][1]}: strongly incompatible {rel['strongly_incompatible']}{extra}")
    _emit(doc, lines, args.format)
    return 0


# ---------------------------------------------------------------- interferometer

def cmd_interferometer(args) -> int:
    lam = args.lam
    if not 0.0 <= lam <= 1.0:
        raise UsageError("--lambda must lie in [0, 1]")
    pg, ph = cc.exit_probabilities(cc.interferometer(lam))
    psi = cc.interferometer_channel_ket(lam)
    which_way = classify(psi, SHAPE_3Q, z_basis(2), args.tol, 0, [1])
    coherence = classify(psi, SHAPE_3Q, x_basis(), args.tol, 0, [2])
    strong = lam == 1.0
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "interferometer",
        "lambda": lam,
        "tol": args.tol,
        "pr_g": pg,
        "pr_h": ph,
        "which_way_in_environment": which_way,
        "coherence_in_particle": coherence,
        "strong_decoherence": strong,
    }
    lines = [
        f"interferometer, decoherence lambda = {lam:g}",
        f"  Pr[g] = {pg:.12f}   Pr[h] = {ph:.12f}",
        f"  which-way (Z) information in environment: {which_way}",
        f"  coherence (X) information in particle:    {coherence}",
    ]
    if 0.0 < lam < 1.0:
        lines.append("  note: partial decoherence lies outside the strong-decoherence regime the theorems address")
    _emit(doc, lines, args.format)
    return 0


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help=f"tolerance (default 1e-10 or ${TOL_ENV})")
    common.add_argument("--format", choices=("text", "structured"), default="text")

    p = argparse.ArgumentParser(prog="infotypes", description="Types of quantum information: checks and demos.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("teleport", parents=[common], help="simulate quantized teleportation")
    t.add_argument("--bits", type=int, choices=(1, 2), default=1)
    t.add_argument("--dim", type=int, default=2)
    t.add_argument("--trials", type=int, default=100)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--drop-correction", action="store_true", help="also report Z/X information with corrections removed")
    t.set_defaults(func=cmd_teleport)

    c = sub.add_parser("check", parents=[common], help="randomized theorem sweep")
    c.add_argument("theorem", choices=sorted(GENERATORS))
    c.add_argument("--dim", type=int, default=2)
    c.add_argument("--trials", type=int, default=50)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--bases", default=None, help="absence-general only: basis letters such as zy")
    c.add_argument("--verbose", action="store_true", help="list every trial")
    c.set_defaults(func=cmd_check)

    a = sub.add_parser("analyze", parents=[common], help="presence/absence report for a state")
    a.add_argument("--state", default=None, help="ket or operator document")
    a.add_argument("--fixture", choices=FIXTURE_NAMES, default=None)
    a.add_argument("--shape", default=None, help="factor dimensions, e.g. 2,2,2")
    a.add_argument("--source", type=int, default=0)
    a.add_argument("--bases", default=None, help="letters: z, x, y, f (Fourier), m (mutually unbiased family)")
    a.add_argument("--decomposition", action="append", help="decomposition document (repeatable)")
    a.set_defaults(func=cmd_analyze)

    i = sub.add_parser("interferometer", parents=[common], help="decohering interferometer")
    i.add_argument("--lambda", dest="lam", type=float, default=1.0)
    i.set_defaults(func=cmd_interferometer)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.tol is None:
            args.tol = _default_tol()
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        if getattr(args, "trials", 1) < 1:
            raise UsageError("--trials must be at least 1")
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"infotypes: error: {exc}", file=sys.stderr)
        return 2
    except (InfoTypesError, OSError) as exc:
        print(f"infotypes: error: {exc}", file=sys.stderr)
        return 2
