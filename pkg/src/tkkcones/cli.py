"""Command-line front end: ``tkkcones <command> <algebra> [options]``.

Algebras are given as ``I p q``, ``II n``, ``III n``, ``IV n`` or ``spin n``.
Exit codes: 0 when every audit passes, 1 on an audit failure (a JSON report
goes to stderr), 2 on usage errors.
"""
import argparse
import math
import sys
from dataclasses import dataclass

import numpy as np
from flint import fmpq

from . import _exact as ex
from . import faces as F
from . import roots_cones as rc
from .errors import DomainError, StructuralError
from .jts import HermitianJts
from .tkk_lie import LieAlgebraG, closed_form_dim

DEFAULT_SEED = 0xC0FFEE
TOL_RANGE = (1e-14, 1e-4)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    descriptor: dict
    seed: int = DEFAULT_SEED
    tol: float = None
    samples: int = None
    export: str = "text"
    out: str = None


# -- output --------------------------------------------------------------------


def _num(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return f'"{x}"'
    return format(x, ".17g")


def dumps(obj, indent=0):
    """JSON with floats written to 17 significant digits and rationals as "p/q"."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, int, float, np.integer, np.floating, np.bool_)):
        return _num(bool(obj) if isinstance(obj, np.bool_) else obj)
    if isinstance(obj, fmpq):
        return '"' + ex.fraction_str(obj) + '"'
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        if not seq:
            return "[]"
        parts = [dumps(v, indent + 1) for v in seq]
        if all("\n" not in p for p in parts) and sum(len(p) for p in parts) < 100:
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(inner + p for p in parts) + "\n" + pad + "]"
    return dumps(str(obj), indent)


def _text(obj, prefix=""):
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{prefix}{k}:")
                lines += _text(v, prefix + "  ")
            else:
                lines.append(f"{prefix}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{prefix}-")
                lines += _text(v, prefix + "  ")
            else:
                lines.append(f"{prefix}- {_scalar(v)}")
    return lines


def _flat(v):
    return isinstance(v, (list, tuple)) and all(not isinstance(x, (dict, list, tuple)) for x in v)


def _scalar(v):
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, fmpq):
        return ex.fraction_str(v)
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def emit(cfg, report, dot=None):
    if cfg.export == "dot":
        if dot is None:
            raise UsageError(f"--export dot is not available for {cfg.command}")
        text = dot
    elif cfg.export == "json":
        text = dumps(report) + "\n"
    else:
        text = "\n".join(_text(report)) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------------


def _algebra(cfg):
    Z = HermitianJts.from_descriptor(cfg.descriptor)
    return Z, LieAlgebraG(Z)


def _tol(cfg, default):
    return default if cfg.tol is None else cfg.tol


def cmd_info(cfg):
    Z, g = _algebra(cfg)
    report = {
        "algebra": Z.label,
        "n": Z.n,
        "rank": Z.rank,
        "a": Z.a,
        "b": Z.b,
        "dim_aut": g.kdim,
        "dim_g": g.dim,
        "dim_g_closed_form": closed_form_dim(Z),
    }
    return report, report["dim_g"] == report["dim_g_closed_form"], None


def cmd_roots(cfg):
    Z, g = _algebra(cfg)
    rsd = rc.build_root_data(g, cfg.seed)
    fmt = lambda v: [ex.fraction_str(x) for x in v]
    report = {
        "algebra": Z.label,
        "dim_t": rsd.t.dim,
        "roots": len(rsd.roots),
        "compact": len(rsd.compact),
        "noncompact": len(rsd.noncompact),
        "positive_noncompact": [fmt(a.exact) for a in rsd.positive_noncompact],
        "coroots": [fmt(a.coroot_exact) for a in rsd.positive_noncompact],
        "gammas": [fmt(gm) for gm in rsd.gammas],
        "strongly_orthogonal": rsd.strongly_orthogonal(),
        "coroot_check": ex.fraction_str(rsd.coroot_check()),
        "abelian_residual": float(rsd.t.abelian_residual()),
    }
    ok = report["strongly_orthogonal"] and rsd.coroot_check() == 0 and report["abelian_residual"] <= _tol(cfg, 1e-9)
    return report, ok, None


def cmd_cones(cfg):
    Z, g = _algebra(cfg)
    rsd = rc.build_root_data(g, cfg.seed)
    wm, wp = rc.omega_cones(rsd)
    h0 = rsd.t.coords(g.h0)
    report = {
        "algebra": Z.label,
        "omega_minus": wm.to_json(),
        "omega_plus": wp.to_json(),
        "omega_minus_faces": len(wm.faces()),
        "contained": wp.contains_cone(wm),
        "h0_in_omega_minus": wm.membership(h0),
        "h0_in_omega_plus": wp.membership(h0),
    }
    ok = report["contained"] and report["h0_in_omega_minus"] == "Interior"
    return report, ok, None


def cmd_faces(cfg):
    Z, g = _algebra(cfg)
    ctx = F.FaceContext(g, cfg.seed)
    classes = F.enumerate_face_classes(g, ctx)
    rng = np.random.default_rng(cfg.seed)
    count = cfg.samples or 100
    samples = [x for x, _ in rc.certified_samples(g, count, cfg.seed)]
    samples += [F.face_interior_sample(g, cl.face, rng, ctx).vector for cl in classes]
    tol = _tol(cfg, 1e-9)
    expo = {}
    for cl in classes:
        r = F.exposedness_check(g, cl.face, samples, tol=tol)
        expo[str(cl.label)] = {k: r[k] for k in ("samples", "violations", "kernel", "kernel_outside_span", "min_pairing")}
    audit = F.cartan_slice_face_audit(g, ctx)
    edges = F.hasse_edges(F.face_order(ctx, classes))
    r = Z.rank
    report = {
        "algebra": Z.label,
        "classes": len(classes),
        "expected_classes": (r + 1) * (r + 2) // 2,
        "faces": F.to_json(classes),
        "conjugacy_checked": all(cl.conjugacy_checked for cl in classes),
        "hasse_edges": [[list(a), list(b)] for a, b in edges],
        "exposedness": expo,
        "cartan_slice_audit": {
            "faces": audit["faces"],
            "matched": len(audit["matched"]),
            "unmatched": audit["unmatched"],
            "ok": audit["ok"],
        },
    }
    ok = (len(classes) == report["expected_classes"]
          and all(all(cl.face.checks.values()) for cl in classes)
          and report["conjugacy_checked"]
          and all(v["violations"] == 0 and v["kernel_outside_span"] == 0 for v in expo.values())
          and audit["ok"])
    return report, ok, F.to_dot(classes, edges, name=Z.label.replace("(", "_").replace(")", "").replace(",", "_"))


def cmd_strata(cfg):
    Z, g = _algebra(cfg)
    ctx = F.FaceContext(g, cfg.seed)
    classes = F.enumerate_face_classes(g, ctx)
    rng = np.random.default_rng(cfg.seed)
    per_class = cfg.samples or 20
    pool = [g.Ad_automorphism(Z.random_automorphism(rng), exact=True) for _ in range(5)]
    rows, ok = [], True
    for cl in classes:
        hits, conj_hits = 0, 0
        for _ in range(per_class):
            s = F.face_interior_sample(g, cl.face, rng, ctx)
            lab = F.stratum_of(g, s.xi, s.witness, ctx).astuple()
            hits += lab == cl.label
            A = pool[int(rng.integers(len(pool)))]
            col = A * ex.qvec(s.xi)
            lab2 = F.stratum_of(g, [col[i, 0] for i in range(g.dim)], s.witness, ctx).astuple()
            conj_hits += lab2 == lab
        rows.append({"label": list(cl.label), "samples": per_class, "correct": hits, "conjugation_invariant": conj_hits})
        ok &= hits == per_class and conj_hits == per_class
    report = {"algebra": Z.label, "labels": [r["label"] for r in rows], "strata": rows}
    return report, ok, None


def cmd_semigroup_roundtrip(cfg):
    from . import semigroup as S

    Z, g = _algebra(cfg)
    if Z.kind != "I":
        raise UsageError("semigroup-roundtrip needs a type I algebra")
    mr = S.build_embedding(g)
    ctx = F.FaceContext(g, cfg.seed)
    rng = np.random.default_rng(cfg.seed)
    fd = ctx.face(0, 0)
    count = cfg.samples or 100
    worst_rt, worst_xi, worst_unit = 0.0, 0.0, 0.0
    for _ in range(count):
        s = F.face_interior_sample(g, fd, rng, ctx)
        col = g.Ad_automorphism(Z.random_automorphism(rng), exact=True) * ex.qvec(s.xi)
        xq = [col[i, 0] for i in range(g.dim)]
        eta = [0.5 * rng.normal(size=g.dim)]
        dec = S.decompose(mr, S.semigroup_exp(mr, eta, xq, s.witness))
        xf = np.array([float(x) for x in xq])
        worst_rt = max(worst_rt, dec.roundtrip)
        worst_xi = max(worst_xi, float(np.abs(dec.xi - xf).max()))
        worst_unit = max(worst_unit, dec.j_unitarity)
    tol = _tol(cfg, S.ROUNDTRIP_TOL)
    report = {
        "algebra": Z.label,
        "samples": count,
        "embedding": mr.checks,
        "max_roundtrip_residual": worst_rt,
        "max_xi_error": worst_xi,
        "max_j_unitarity_defect": worst_unit,
    }
    return report, max(worst_rt, worst_xi, worst_unit) <= tol, None


COMMANDS = {
    "info": cmd_info,
    "roots": cmd_roots,
    "cones": cmd_cones,
    "faces": cmd_faces,
    "strata": cmd_strata,
    "semigroup-roundtrip": cmd_semigroup_roundtrip,
}


# -- argument handling ------------------------------------------------------------


def parse_descriptor(words):
    if not words:
        raise UsageError("missing algebra descriptor")
    kind = words[0].upper()
    try:
        nums = [int(w) for w in words[1:]]
    except ValueError:
        raise UsageError(f"bad algebra parameters {words[1:]}") from None
    if kind == "I":
        if len(nums) != 2:
            raise UsageError("type I needs p and q")
        return {"kind": "I", "p": nums[0], "q": nums[1]}
    if kind in ("II", "III", "IV", "SPIN"):
        if len(nums) != 1:
            raise UsageError(f"type {words[0]} needs one size parameter")
        return {"kind": "IV" if kind == "SPIN" else kind, "n": nums[0]}
    raise UsageError(f"unknown algebra kind {words[0]!r}")


def _seed(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser():
    ap = argparse.ArgumentParser(prog="tkkcones", description="Invariant cones of Hermitian Lie algebras: audits and exports.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("algebra", nargs="+", help="I p q | II n | III n | IV n | spin n")
    ap.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--samples", type=int)
    ap.add_argument("--export", choices=["json", "dot"])
    ap.add_argument("--out")
    return ap


def config_from_args(argv):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.tol is not None and not TOL_RANGE[0] <= args.tol <= TOL_RANGE[1]:
        raise UsageError(f"--tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]")
    if args.samples is not None and args.samples < 1:
        raise UsageError("--samples must be positive")
    return RunConfig(args.command, parse_descriptor(args.algebra), args.seed, args.tol,
                     args.samples, args.export or "text", args.out)


def main(argv=None):
    try:
        cfg = config_from_args(argv)
        report, ok, dot = COMMANDS[cfg.command](cfg)
        emit(cfg, report, dot)
    except SystemExit as exc:
        return 2 if exc.code else 0
    except (UsageError, StructuralError, DomainError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    if not ok:
        sys.stderr.write(dumps({"status": "audit failure", "command": cfg.command, "report": report}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
