"""Command-line front end.

Usage examples:
  nucspec traces op.json --n-max 8
  nucspec spectrum op.json
  nucspec det op.json --emit zeros
  nucspec check op.json --d 3 --K 0
  nucspec gallery kron-d3 --out gallery/ --seed 0
  nucspec replay gallery/manifest.json

Exit codes: 0 symmetric / success, 1 not symmetric (or replay mismatch),
2 usage or parse failure, 3 route disagreement.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import constructions as cons
from .core import Tolerance, spectrum_of
from .fredholm import det_coeffs_from_traces, det_zeros, inverse_zeros
from .symmetry import DIM_CAP, RouteDisagreementError, equivalence_harness
from .traces import NuclearRepresentation, TraceOverflowError, induced_operator, nuclear_trace, power_traces

EXIT_SYMMETRIC, EXIT_ASYMMETRIC, EXIT_USAGE, EXIT_DISAGREE = 0, 1, 2, 3

GALLERY_CASES = 10
DEFECT_N_GRID = (4, 16, 64, 256)


class DocumentError(ValueError):
    pass


def fmt(x: float) -> str:
    # + 0.0 turns -0.0 into 0.0
    return format(float(x) + 0.0, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with every float written at 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# -- OperatorDocument -------------------------------------------------------

def _real_array(node, path: str, shape: tuple[int, ...]) -> np.ndarray:
    try:
        arr = np.array(node, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{path}: expected numeric array ({exc})") from None
    if arr.shape != shape:
        raise DocumentError(f"{path}: expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DocumentError(f"{path}: entries must be finite")
    return arr


def _field(doc: dict, key: str, path: str):
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(f"{path}: missing field {key!r}")
    return doc[key]


def parse_document(text: str, source: str = "<input>"):
    """Parse an OperatorDocument; returns (matrix, representation or None, metadata)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DocumentError(f"{source}: top level must be an object")
    kind = _field(doc, "kind", source)
    dim = _field(doc, "dim", source)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError(f"{source}.dim: must be a positive integer")
    meta = {k: doc[k] for k in ("name", "expected") if k in doc}
    if kind == "matrix":
        re = _real_array(_field(doc, "re", source), f"{source}.re", (dim, dim))
        im = _real_array(_field(doc, "im", source), f"{source}.im", (dim, dim))
        return re + 1j * im, None, meta
    if kind == "representation":
        p = _field(doc, "ambient_p", source)
        p = float("inf") if p in ("inf", "infinity") else p
        if not isinstance(p, (int, float)) or isinstance(p, bool) or not p >= 1:
            raise DocumentError(f"{source}.ambient_p: must be a number >= 1 or \"inf\"")
        terms = _field(doc, "terms", source)
        if not isinstance(terms, list):
            raise DocumentError(f"{source}.terms: must be a list")
        parsed = []
        for k, term in enumerate(terms):
            tp = f"{source}.terms[{k}]"
            mu = _real_array(_field(term, "mu", tp), f"{tp}.mu", (2,))
            vecs = []
            for name in ("functional", "vector"):
                node = _field(term, name, tp)
                re = _real_array(_field(node, "re", f"{tp}.{name}"), f"{tp}.{name}.re", (dim,))
                im = _real_array(_field(node, "im", f"{tp}.{name}"), f"{tp}.{name}.im", (dim,))
                vecs.append(re + 1j * im)
            parsed.append((complex(mu[0], mu[1]), vecs[0], vecs[1]))
        rep = NuclearRepresentation(dim, parsed, float(p))
        return induced_operator(rep), rep, meta
    raise DocumentError(f"{source}.kind: expected 'matrix' or 'representation', got {kind!r}")


def matrix_document(t, name: str | None = None, expected: dict | None = None) -> dict:
    t = np.asarray(t, dtype=np.complex128)
    doc = {"kind": "matrix", "dim": int(t.shape[0])}
    if name is not None:
        doc["name"] = name
    if expected is not None:
        doc["expected"] = expected
    doc["re"] = t.real.tolist()
    doc["im"] = t.imag.tolist()
    return doc


def representation_document(u: NuclearRepresentation, name: str | None = None) -> dict:
    doc = {"kind": "representation", "dim": u.dim}
    if name is not None:
        doc["name"] = name
    doc["ambient_p"] = "inf" if np.isinf(u.ambient_p) else u.ambient_p
    doc["terms"] = [
        {
            "mu": [t.mu.real, t.mu.imag],
            "functional": {"re": t.functional.real.tolist(), "im": t.functional.imag.tolist()},
            "vector": {"re": t.vector.real.tolist(), "im": t.vector.imag.tolist()},
        }
        for t in u.terms
    ]
    return doc


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    return parse_document(text, path)


def _tol(args) -> Tolerance:
    return Tolerance(rel=args.rel_tol, abs=args.abs_tol)


# -- commands ---------------------------------------------------------------

def cmd_traces(args, out) -> int:
    t, rep, _ = _load(args.input)
    n_max = args.n_max or t.shape[0]
    s = power_traces(t, n_max)
    out.write("n,re,im\n")
    for n, v in enumerate(s.values, start=1):
        out.write(f"{n},{fmt(v.real)},{fmt(v.imag)}\n")
    if rep is not None:
        tr = nuclear_trace(rep)
        out.write(f"nuclear,{fmt(tr.real)},{fmt(tr.imag)}\n")
    return 0


def cmd_spectrum(args, out) -> int:
    t, _, _ = _load(args.input)
    spec = spectrum_of(t, _tol(args))
    out.write("re,im,multiplicity\n")
    for z, m in spec.values:
        out.write(f"{fmt(z.real)},{fmt(z.imag)},{m}\n")
    return 0


def cmd_det(args, out) -> int:
    t, _, _ = _load(args.input)
    n_max = args.n_max or t.shape[0]
    coeffs = det_coeffs_from_traces(power_traces(t, n_max))
    if args.emit == "coeffs":
        out.write("n,re,im\n")
        for n, a in enumerate(coeffs.alpha):
            out.write(f"{n},{fmt(a.real)},{fmt(a.imag)}\n")
        return 0
    tol = _tol(args)
    out.write("kind,re,im,multiplicity\n")
    for z, m in det_zeros(coeffs, tol).values:
        out.write(f"zero,{fmt(z.real)},{fmt(z.imag)},{m}\n")
    for z, m in inverse_zeros(coeffs, tol).values:
        out.write(f"inverse,{fmt(z.real)},{fmt(z.imag)},{m}\n")
    return 0


def check_operator(t, d: int, K: int, tol: Tolerance, n_max: int | None, name=None) -> tuple[dict, int]:
    """Run the three-route harness; return the report document and exit code."""
    report = {"name": name, "d": d, "K": K, "rel_tol": tol.rel, "abs_tol": tol.abs}
    try:
        res = equivalence_harness(t, d, tol, K=K, n_max=n_max)
    except RouteDisagreementError as exc:
        by_route = {r.route: r for r in exc.reports}
        report["n_max"] = by_route["trace-criterion"].n_max
        report["verdict"] = None
        report["disagreement"] = str(exc)
        report["routes"] = {k: by_route[k].to_dict() for k in ("determinant", "spectral", "trace-criterion")}
        return report, EXIT_DISAGREE
    report["n_max"] = res.trace.n_max
    report["verdict"] = res.verdict
    report["radius_estimate"] = res.radius_estimate
    report["routes"] = {r.route: r.to_dict() for r in res}
    return report, EXIT_SYMMETRIC if res.verdict else EXIT_ASYMMETRIC


def cmd_check(args, out) -> int:
    t, _, meta = _load(args.input)
    report, code = check_operator(t, args.d, args.K, _tol(args), args.n_max, meta.get("name"))
    out.write(dumps(report) + "\n")
    return code


BROKEN_EPS = 0.05


def _gallery_kron(d: int, seed: int, broken: bool = False):
    for i in range(GALLERY_CASES):
        rng = np.random.default_rng([seed, d, i])
        base_dim = int(rng.integers(1, 5))
        t = cons.kronecker_symmetrize(cons.random_operator(base_dim, rng), d)
        params = {"construction": "kronecker", "base_dim": base_dim, "d": d, "seed": [seed, d, i]}
        if broken:
            t = cons.perturb_break_symmetry(t, BROKEN_EPS, [seed, d, i, 1])
            params.update(eps=BROKEN_EPS, perturbation_seed=[seed, d, i, 1])
        yield t, d, not broken, params


SELECTORS = {
    "kron-d2": lambda seed: _gallery_kron(2, seed),
    "kron-d3": lambda seed: _gallery_kron(3, seed),
    "kron-d4": lambda seed: _gallery_kron(4, seed),
    "kron-d5": lambda seed: _gallery_kron(5, seed),
    "broken": lambda seed: (c for d in (2, 3, 4) for c in _gallery_kron(d, seed, broken=True)),
    "defect": None,
}


def _defect_csv(s_grid=cons.DEFAULT_S_GRID) -> str:
    buf = io.StringIO()
    cols = ["N", "nuclear_trace_re", "nuclear_trace_im", "trace_sq", "op_norm", "spectral_radius", "eigen_l1_mass"]
    cols += [f"quasinorm_s={fmt(s)}" for s in s_grid]
    buf.write(",".join(cols) + "\n")
    for N in DEFECT_N_GRID:
        _, pt = cons.trace_one_shrinking_family(N, s_grid)
        row = [str(N), fmt(pt.nuclear_trace.real), fmt(pt.nuclear_trace.imag), fmt(pt.trace_sq),
               fmt(pt.op_norm), fmt(pt.spectral_radius), fmt(pt.eigen_l1_mass)]
        row += [fmt(v) for _, v in pt.s_quasinorms]
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def cmd_gallery(args, out) -> int:
    if args.selector not in SELECTORS:
        sys.stderr.write(f"unknown gallery family {args.selector!r}; available: {', '.join(SELECTORS)}\n")
        return EXIT_USAGE
    out_dir = Path(args.out or f"gallery-{args.selector}")
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {"selector": args.selector, "seed": args.seed, "cases": []}
    if args.selector == "defect":
        (out_dir / "defect.csv").write_text(_defect_csv(), encoding="utf-8")
        manifest["series"] = "defect.csv"
        # spectrum {1/N (N times), 0, 0}: never centrally symmetric
        for N in (n for n in DEFECT_N_GRID if n + 2 <= DIM_CAP):
            fname = f"defect_N{N}.json"
            rep = cons.trace_one_family_representation(N)
            doc = representation_document(rep, f"trace-one N={N}")
            (out_dir / fname).write_text(dumps(doc) + "\n", encoding="utf-8")
            params = {"construction": "trace-one", "N": N}
            manifest["cases"].append({"file": fname, "d": 2, "expected": False, "params": params})
    else:
        for i, (t, d, symmetric, params) in enumerate(SELECTORS[args.selector](args.seed)):
            fname = f"case_{i:03d}.json"
            doc = matrix_document(t, f"{args.selector}-{i:03d}", {"d": d, "symmetric": symmetric})
            (out_dir / fname).write_text(dumps(doc) + "\n", encoding="utf-8")
            manifest["cases"].append({"file": fname, "d": d, "expected": symmetric, "params": params})
    (out_dir / "manifest.json").write_text(dumps(manifest) + "\n", encoding="utf-8")
    out.write(f"wrote {len(manifest['cases'])} cases to {out_dir}\n")
    return 0


def cmd_replay(args, out) -> int:
    path = Path(args.manifest)
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    tol = _tol(args)
    out.write("file,d,expected,exit_code,reproduced\n")
    all_ok = True
    for case in _field(manifest, "cases", str(path)):
        t, _, meta = _load(str(path.parent / case["file"]))
        _, code = check_operator(t, case["d"], 0, tol, None, meta.get("name"))
        ok = code == (EXIT_SYMMETRIC if case["expected"] else EXIT_ASYMMETRIC)
        all_ok &= ok
        out.write(f"{case['file']},{case['d']},{str(case['expected']).lower()},{code},{str(ok).lower()}\n")
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nucspec", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def tol_flags(p):
        p.add_argument("--rel-tol", type=float, default=1e-8, help="relative tolerance (default 1e-8)")
        p.add_argument("--abs-tol", type=float, default=1e-12, help="absolute floor (default 1e-12)")

    def io_flags(p):
        p.add_argument("input", help="OperatorDocument JSON file, or - for stdin")
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("traces", help="power traces trace T^n as CSV")
    io_flags(p)
    p.add_argument("--n-max", type=int, help="largest power (default dim)")
    p.set_defaults(func=cmd_traces)

    p = sub.add_parser("spectrum", help="eigenvalue multiset as CSV")
    io_flags(p)
    tol_flags(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("det", help="Fredholm determinant coefficients or zeros")
    io_flags(p)
    tol_flags(p)
    p.add_argument("--n-max", type=int, help="number of traces used (default dim)")
    p.add_argument("--emit", choices=("coeffs", "zeros"), default="coeffs")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("check", help="Z_d-symmetry report from three routes")
    io_flags(p)
    tol_flags(p)
    p.add_argument("--d", type=int, required=True, help="symmetry order, >= 2")
    p.add_argument("--K", type=int, default=0, help="trace threshold: only n > K*d is inspected")
    p.add_argument("--n-max", type=int, help="trace window length (default 3*dim*d, capped at 512)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gallery", help="write generated cases and a manifest")
    p.add_argument("selector", help=f"one of: {', '.join(SELECTORS)}")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("replay", help="re-check every case of a gallery manifest")
    p.add_argument("manifest")
    tol_flags(p)
    p.add_argument("--out", help="write output here instead of stdout")
    p.set_defaults(func=cmd_replay)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "d", None) is not None and args.d < 2:
        ap.error(f"--d must be >= 2, got {args.d}")
    if getattr(args, "K", 0) < 0:
        ap.error("--K must be >= 0")
    if getattr(args, "n_max", None) is not None and args.n_max < 1:
        ap.error("--n-max must be >= 1")
    try:
        if getattr(args, "rel_tol", None) is not None:
            _tol(args)
    except ValueError as exc:
        ap.error(str(exc))
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except DocumentError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, TraceOverflowError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    target = getattr(args, "out", None) if args.command != "gallery" else None
    if target:
        Path(target).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    return code


if __name__ == "__main__":
    raise SystemExit(main())
