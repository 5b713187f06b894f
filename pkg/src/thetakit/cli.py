"""Command-line front end: every command prints one JSON report.

Exit codes: 0 ok, 2 input error, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .exact_arith import Cyclotomic, delta_coefficients, ramanujan_bound_check
from .local_fields import CharacterTag, Place, QuadExt
from sympy import nextprime, primerange

SCHEMA = 1
EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3


class InputError(Exception):
    pass


class InvariantViolation(Exception):
    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Cyclotomic):
        return str(x.to_fraction()) if x.is_rational() else repr(x)
    if hasattr(x, "to_json"):
        return _jsonable(x.to_json())
    return str(x)


def _digest(inputs: dict) -> str:
    blob = json.dumps(_jsonable(inputs), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def make_report(command: str, inputs: dict, results: dict, provenance: dict, ok: bool = True) -> dict:
    return {
        "schema": SCHEMA,
        "tool": f"thetakit {__version__}",
        "command": command,
        "inputs": _jsonable(inputs),
        "inputs_digest": _digest(inputs),
        "ok": ok,
        "results": _jsonable(results),
        "provenance": provenance,
    }


def _parse_places(text: str | None) -> list[Place]:
    if not text:
        return []
    try:
        return [Place.parse(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, TypeError) as e:
        raise InputError(f"bad place list {text!r}: {e}") from None


def _parse_signs(text: str | None) -> dict:
    """'3:-1,7:1' -> {Place(3): -1, Place(7): 1}."""
    out = {}
    for item in (text or "").split(","):
        if not item.strip():
            continue
        try:
            p, s = item.split(":")
            s = int(s)
        except ValueError:
            raise InputError(f"bad sign entry {item!r}; expected place:sign") from None
        if s not in (1, -1):
            raise InputError(f"sign must be 1 or -1 in {item!r}")
        out[Place.parse(p.strip())] = s
    return out


def _first_places(k: int) -> list[Place]:
    """The real place followed by the first k - 1 primes."""
    out = [Place(None)]
    p = 2
    while len(out) < k:
        out.append(Place(p))
        p = int(nextprime(p))
    return out[:k]


# ---------------------------------------------------------------- commands


def cmd_tau(args) -> dict:
    if args.n < 1:
        raise InputError("--n must be at least 1")
    taus = delta_coefficients(args.n)
    results = {"tau": taus}
    prov = {"tau": "exact_arith.delta_coefficients"}
    ok = True
    if args.check_bound:
        checks = {str(p): ramanujan_bound_check(int(p), taus[p - 1]) for p in primerange(2, args.n + 1)}
        ok = all(checks.values())
        results["bound_checks"] = checks
        results["bound_ok"] = ok
        prov["bound_checks"] = "exact_arith.ramanujan_bound_check"
    report = make_report("tau", {"n": args.n, "check_bound": args.check_bound}, results, prov, ok)
    if not ok:
        raise InvariantViolation("Ramanujan bound fails", report)
    return report


def _load_json(args):
    try:
        if args.json is not None:
            return json.loads(args.json)
        if args.input == "-":
            return json.load(sys.stdin)
        return json.loads(Path(args.input).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read JSON input: {e}") from None


def cmd_classify(args) -> dict:
    from .hermitian import (
        EElement,
        GlobalSpaceDescriptor,
        GramMatrix,
        classify_local,
        disc,
        relevant_places,
        skew_disc,
        validate_global,
    )

    obj = _load_json(args)
    if not isinstance(obj, dict) or "d" not in obj:
        raise InputError("input must be a JSON object with a 'd' field")
    try:
        if "gram" in obj:
            g = GramMatrix.from_json(obj)
            if g.is_degenerate():
                raise InputError("degenerate form")
            delta = EElement.from_json(obj["delta"], g.ext.d) if obj.get("delta") is not None else None
            if g.eps == -1 and delta is None:
                raise InputError("skew-Hermitian input needs 'delta'")
            dv = disc(g) if g.eps == 1 else skew_disc(g, delta)
            places = relevant_places(g.ext, dv)
            local = [classify_local(g, v, delta) for v in places]
            desc = GlobalSpaceDescriptor.from_gram(g, delta)
            extra = {"discriminant": dv}
        elif "dim" in obj:
            desc = GlobalSpaceDescriptor.from_json(obj)
            places = relevant_places(desc.ext, *[v.p for v in desc.deviations if v.p])
            places = sorted(set(places) | set(desc.deviations), key=Place.sort_key)
            local = [desc.local_class(v) for v in places]
            extra = {}
        else:
            raise InputError("input needs either 'gram' or 'dim'")
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"schema violation: {e}") from None
    verdict = validate_global(desc)
    results = {"local": local, "descriptor": desc, "validation": verdict, **extra}
    prov = {"local": "hermitian.classify_local", "descriptor": "hermitian.GlobalSpaceDescriptor", "validation": "hermitian.validate_global"}
    report = make_report("classify", {"input": obj}, results, prov, verdict.ok)
    if not verdict.ok:
        raise InvariantViolation("; ".join(verdict.violations), report)
    return report


def cmd_tower(args) -> dict:
    from .theta_tower import (
        RootNumberInconsistency,
        WittTower,
        conservation_complete,
        counterexample_pipeline,
        rallis_exponent,
    )

    if args.pipeline:
        if args.dimV != 1:
            raise InputError("the pipeline is built for dimV = 1")
        try:
            ext = QuadExt(args.d)
        except ValueError as e:
            raise InputError(str(e)) from None
        roots = _parse_signs(args.root_numbers)
        W0 = _parse_signs(args.w0_signs)
        try:
            out = counterexample_pipeline(ext, roots, not args.L_zero, W0)
        except RootNumberInconsistency as e:
            raise InvariantViolation(f"root numbers inconsistent: {e}") from None
        except ValueError as e:
            raise InputError(str(e)) from None
        inputs = {"pipeline": True, "d": args.d, "dimV": 1, "root_numbers": roots, "W0_signs": W0, "L_half_nonzero": not args.L_zero}
        report = make_report("tower", inputs, out, {"verdict": "theta_tower.counterexample_pipeline"}, out["ok"])
        if not out["ok"]:
            raise InvariantViolation("pipeline did not reach the expected verdict", report)
        return report

    if args.base is None or args.r0 is None:
        raise InputError("give --pipeline, or --base and --r0 (and optionally --r)")
    try:
        tower = WittTower(args.base, args.sign)
        fo = conservation_complete(args.dimV, (tower, args.r0))
        results = {"first_occurrence": dataclasses.asdict(fo) if dataclasses.is_dataclass(fo) else fo}
        prov = {"first_occurrence": "theta_tower.conservation_complete"}
        if args.r is not None:
            results["rallis"] = rallis_exponent(args.dimV, args.base, args.r0, args.r)
            prov["rallis"] = "theta_tower.rallis_exponent"
    except ValueError as e:
        raise InputError(str(e)) from None
    inputs = {"dimV": args.dimV, "base": args.base, "sign": args.sign, "r0": args.r0, "r": args.r}
    return make_report("tower", inputs, results, prov)


def cmd_packet(args) -> dict:
    from .arthur import AParameter, CuspDatum, enumerate_packet, epsilon_psi

    if args.S is not None and args.S_size is not None:
        raise InputError("give --S or --S-size, not both")
    if args.S_size is not None:
        if args.S_size < 1:
            raise InputError("--S-size must be positive")
        S = _first_places(args.S_size)
    else:
        S = _parse_places(args.S)
    for name in ("eps", "sym3"):
        if getattr(args, name) not in (None, 1, -1):
            raise InputError(f"--{name} must be 1 or -1")
    try:
        if args.family in ("SK", "G2_short", "G2_long"):
            if not S:
                raise InputError("this family needs --S or --S-size")
            tau = CuspDatum("tau", frozenset(S), args.eps, args.sym3)
            psi = AParameter(args.family, tau=tau, arthur_trivial=args.arthur_trivial)
            out = enumerate_packet(psi)
        elif args.family == "HPS_U3":
            ext = QuadExt(args.d)
            chi = CharacterTag.base("chi", 1)
            mu = CharacterTag.base("mu", 0)
            psi = AParameter("HPS_U3", ext=ext, chi=chi, mu=mu, root_number_E=args.eps, arthur_trivial=args.arthur_trivial)
            out = enumerate_packet(psi, S)
        else:
            raise InputError(f"packet enumeration is not provided for {args.family}")
    except InputError:
        raise
    except ValueError as e:
        raise InputError(str(e)) from None
    out["epsilon_psi"] = epsilon_psi(psi)
    inputs = {"family": args.family, "S": [str(v) for v in S], "eps": args.eps, "sym3": args.sym3, "d": args.d, "arthur_trivial": args.arthur_trivial}
    return make_report("packet", inputs, out, {"members": "arthur.enumerate_packet", "epsilon_psi": "arthur.epsilon_psi"})


def cmd_branch(args) -> dict:
    from .weights import BranchingError, verify_g2_branchings, verify_sp4_branching

    results, prov, ok = {}, {}, True
    run_g2 = args.g2 or not args.sp4
    if run_g2:
        try:
            g2 = verify_g2_branchings(raise_on_failure=False)
        except BranchingError as e:
            raise InvariantViolation(str(e)) from None
        results["g2"] = g2
        prov["g2"] = "weights.verify_g2_branchings"
        ok = ok and bool(g2["ok"])
    if args.sp4:
        sp4 = verify_sp4_branching()
        results["sp4"] = sp4
        prov["sp4"] = "weights.verify_sp4_branching"
        ok = ok and bool(sp4["ok"])
    report = make_report("branch", {"g2": run_g2, "sp4": args.sp4}, results, prov, ok)
    if not ok:
        raise InvariantViolation("branching identity failed", report)
    return report


def _intertwining_check(q: int, n: int, gen: tuple, psi: int, sample: int | None, seed: int) -> bool:
    from .weil_finite import FiniteSymplectic, act, intertwiner, rho, word_matrix

    fs = FiniteSymplectic(q, n)
    A = intertwiner(fs, gen, psi)
    G = word_matrix(fs, [gen])
    hs = list(fs.elements())
    if sample is not None and sample < len(hs):
        hs = random.Random(seed).sample(hs, sample)
    return all(A @ rho(fs, h, psi) == rho(fs, act(fs, G, h), psi) @ A for h in hs)


def _generators(fs) -> list[tuple]:
    from .weil_finite import generator

    n, q = fs.n, fs.q
    eye = np.eye(n, dtype=np.int64)
    gens = [generator(fs, "w"), generator(fs, "n", eye), generator(fs, "m", eye * 2 % q)]
    if n > 1:
        up = eye.copy()
        up[0, 1] = 1
        swap = np.zeros((n, n), dtype=np.int64)
        swap[0, 1] = swap[1, 0] = 1
        gens += [generator(fs, "m", up), generator(fs, "n", swap)]
    return gens


def cmd_weil(args) -> dict:
    from .weil_finite import (
        FiniteSymplectic,
        cocycle,
        even_odd_split,
        intertwiner,
        nonsplit_torus_theta,
        random_sl2_word,
        svn_check,
    )

    try:
        fs = FiniteSymplectic(args.q, args.n)
    except ValueError as e:
        raise InputError(str(e)) from None
    if args.psi % args.q == 0:
        raise InputError("--psi must be nonzero mod q")
    if args.jobs < 1:
        raise InputError("--jobs must be positive")
    results, prov = {}, {}
    want_all = args.all_checks
    if want_all or args.svn:
        if fs.dim_model > 343:
            raise InputError("exhaustive character sums are limited to q^n <= 343")
        results["stone_von_neumann"] = svn_check(fs, args.psi)
        prov["stone_von_neumann"] = "weil_finite.svn_check"
    if want_all or args.intertwining:
        gens = _generators(fs)
        sample = None if fs.q**fs.n <= 27 else 200
        jobs = [(fs.q, fs.n, g, args.psi, sample, i) for i, g in enumerate(gens)]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as ex:
                flags = list(ex.map(_intertwining_check, *zip(*jobs)))
        else:
            flags = [_intertwining_check(*j) for j in jobs]
        results["intertwining"] = {"generators": [list(g) for g in gens], "ok": flags, "exhaustive": sample is None}
        prov["intertwining"] = "weil_finite.intertwiner"
    if want_all or args.parity:
        split = even_odd_split(fs, args.psi, [intertwiner(fs, g, args.psi) for g in _generators(fs)])
        results["even_odd"] = {"dims": split["dims"], "invariant": split["invariant"]}
        prov["even_odd"] = "weil_finite.even_odd_split"
    if (want_all or args.cocycle_samples) and fs.n == 1:
        rng = random.Random(args.seed)
        samples = []
        for _ in range(args.cocycle_samples or 100):
            w1, w2 = random_sl2_word(fs, rng), random_sl2_word(fs, rng)
            samples.append({"g1": w1, "g2": w2, "lambda": cocycle(fs, w1, w2, args.psi)})
        results["cocycle"] = {"count": len(samples), "all_scalar": True, "samples": samples[: args.show]}
        prov["cocycle"] = "weil_finite.cocycle"
    if (want_all or args.torus) and fs.n == 1:
        results["torus"] = nonsplit_torus_theta(fs.q, args.psi)
        prov["torus"] = "weil_finite.nonsplit_torus_theta"
    if args.dump:
        results["dump"] = {"generator": args.dump, "format": "rows of entries; entry = [[num, den] for zeta^0..zeta^(q-1)]",
                           "matrix": _dump(fs, args.dump, args.psi).to_rows()}
        prov["dump"] = "weil_finite.intertwiner"
    if not results:
        raise InputError("nothing to do; pass --all-checks or a specific check")

    ok = _weil_ok(fs, results)
    inputs = {"q": args.q, "n": args.n, "psi": args.psi, "all_checks": want_all, "seed": args.seed, "dump": args.dump}
    report = make_report("weil", inputs, results, prov, ok)
    if not ok:
        raise InvariantViolation("finite Weil check failed", report)
    return report


def _dump(fs, which: str, psi: int):
    from .weil_finite import generator, intertwiner

    eye = np.eye(fs.n, dtype=np.int64)
    specs = {"w": ("w", None), "n": ("n", eye), "m": ("m", eye * 2 % fs.q)}
    if which not in specs:
        raise InputError("--dump takes w, n or m")
    kind, data = specs[which]
    return intertwiner(fs, generator(fs, kind, data), psi)


def _weil_ok(fs, r: dict) -> bool:
    ok = True
    if "stone_von_neumann" in r:
        ok &= r["stone_von_neumann"]["irreducible"] and r["stone_von_neumann"]["orthogonal"]
    if "intertwining" in r:
        ok &= all(r["intertwining"]["ok"])
    if "even_odd" in r:
        m = fs.dim_model
        ok &= tuple(r["even_odd"]["dims"]) == ((m + 1) // 2, (m - 1) // 2) and r["even_odd"]["invariant"]
    if "torus" in r:
        t = r["torus"]
        ok &= t["multiplicity_free"] and len(t["missing"]) == 1 and t["dimension"] == fs.q
    return bool(ok)


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thetakit", description="Exact theta-correspondence bookkeeping reports (JSON).")
    p.add_argument("--version", action="version", version=f"thetakit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tau", help="Ramanujan tau coefficients")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--check-bound", action="store_true")
    t.set_defaults(func=cmd_tau)

    c = sub.add_parser("classify", help="classify a Hermitian space from a Gram matrix or descriptor")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="JSON file, or - for stdin")
    src.add_argument("--json", help="inline JSON")
    c.set_defaults(func=cmd_classify)

    w = sub.add_parser("tower", help="first occurrence, Rallis exponents, or the nontempered-lift pipeline")
    w.add_argument("--pipeline", action="store_true")
    w.add_argument("--dimV", type=int, default=1)
    w.add_argument("--d", type=int, default=-1, help="E = Q(sqrt d) for the pipeline")
    w.add_argument("--root-numbers", help="local U1 root numbers, e.g. '3:-1,7:-1'")
    w.add_argument("--w0-signs", help="local signs of W0, e.g. '2:-1,3:-1'")
    w.add_argument("--L-zero", action="store_true", help="model L(1/2) = 0")
    w.add_argument("--base", type=int)
    w.add_argument("--sign", type=int, default=1)
    w.add_argument("--r0", type=int)
    w.add_argument("--r", type=int)
    w.set_defaults(func=cmd_tower)

    k = sub.add_parser("packet", help="enumerate an A-packet with multiplicities")
    k.add_argument("--family", required=True, choices=["SK", "G2_short", "G2_long", "HPS_U3"])
    k.add_argument("--S", help="places, e.g. '2,3,infty'")
    k.add_argument("--S-size", type=int)
    k.add_argument("--eps", type=int, help="root number of tau (SK, G2_short) or of the U1 character (HPS_U3)")
    k.add_argument("--sym3", type=int, help="root number of Sym^3 tau (G2_long)")
    k.add_argument("--d", type=int, default=-1)
    k.add_argument("--arthur-trivial", action="store_true")
    k.set_defaults(func=cmd_packet)

    b = sub.add_parser("branch", help="verify restriction identities")
    b.add_argument("--g2", action="store_true")
    b.add_argument("--sp4", action="store_true")
    b.set_defaults(func=cmd_branch)

    f = sub.add_parser("weil", help="finite-field Heisenberg and Weil representation checks")
    f.add_argument("--q", type=int, required=True)
    f.add_argument("--n", type=int, default=1)
    f.add_argument("--psi", type=int, default=1)
    f.add_argument("--all-checks", action="store_true")
    f.add_argument("--svn", action="store_true")
    f.add_argument("--intertwining", action="store_true")
    f.add_argument("--parity", action="store_true")
    f.add_argument("--torus", action="store_true")
    f.add_argument("--cocycle-samples", type=int, default=0)
    f.add_argument("--show", type=int, default=3, help="cocycle samples to include in the report")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--dump", help="dump an intertwiner matrix: w, n or m")
    f.add_argument("--jobs", type=int, default=1)
    f.set_defaults(func=cmd_weil)
    return p


def _emit(report: dict) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    out_dir = os.environ.get("THETA_OUTPUT_DIR")
    if out_dir:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        target = path / f"{report['command']}-{report['inputs_digest'][:16]}.json"
        target.write_text(text)
        print(str(target))
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        report = args.func(args)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as e:
        if e.report is not None:
            _emit(e.report)
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    _emit(report)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
