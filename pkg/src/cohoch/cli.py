"""Command-line front end.

    cohoch homology K.json
    cohoch loops K.json --max-degree 8
    cohoch coincidence K.json L.json g.json h.json
    cohoch verify sdr K.json [L.json]

Exit codes: 0 pass, 1 verification failure, 2 input error.  Output is
deterministic; every homology table states the degrees it is valid for.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Dict, List, Optional

from . import __version__
from .chain_core import FreeChainComplex, homology, matrix_to_json
from .errors import CohochError, MalformedDocument, NotReduced, SimplicialIdentityViolation
from .simplicial import (SimplicialSet, load_simplicial_set, normalized_chains, parse_simplicial_map)

SCHEMA = "cohoch-report/1"
DEFAULT_CAP = 2
SUITES = ("identities", "d2", "sdr", "dcsh", "milgram", "loops", "oracle")


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# loading


def _load_set(path: str, check: bool = True) -> SimplicialSet:
    try:
        return load_simplicial_set(path, check=check)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file")
    except (MalformedDocument, SimplicialIdentityViolation) as e:
        raise InputError(f"{path}: {e}")


def _load_map(path: str, K: SimplicialSet, L: SimplicialSet):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_simplicial_map(fh.read(), K, L)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file")
    except (MalformedDocument, SimplicialIdentityViolation) as e:
        raise InputError(f"{path}: {e}")


def _word_cap(K: SimplicialSet, args, notes: List[str]) -> Optional[int]:
    if not K.is_reduced:
        raise InputError(f"{K.name}: needs a single vertex, found {len(K.simplices(0))}")
    if K.is_1_reduced:
        return args.word_cap
    cap = args.word_cap if args.word_cap is not None else DEFAULT_CAP
    notes.append(f"warning: {K.name} has 1-simplices; words are capped at length {cap}")
    return cap


# ---------------------------------------------------------------------------
# report pieces


def _homology_rows(C: FreeChainComplex, upto: int) -> List[dict]:
    return [homology(C, n).to_json() for n in range(upto + 1)]


def _matrices(C: FreeChainComplex, upto: int) -> List[dict]:
    return [matrix_to_json(C, n) for n in range(1, upto + 1)]


def _group_str(row: dict) -> str:
    parts = []
    b = row["betti"]
    if b == 1:
        parts.append("Z")
    elif b > 1:
        parts.append(f"Z^{b}")
    parts.extend(f"Z/{t}" for t in row["torsion"])
    return " + ".join(parts) if parts else "0"


def _render_text(rep: dict) -> str:
    lines = [f"{rep['command']}: {rep['input']}"]
    for note in rep.get("notes", []):
        lines.append(note)
    if "homology" in rep:
        if rep["valid_degrees"] is None:
            lines.append("homology of the capped complex (not valid in any degree):")
        else:
            lo, hi = rep["valid_degrees"]
            lines.append(f"homology, valid for degrees {lo}..{hi}:")
        for row in rep["homology"]:
            lines.append(f"  H_{row['degree']} = {_group_str(row)}")
    if "comultiplication_text" in rep:
        lines.append(rep["comultiplication_text"])
    if "checks" in rep:
        for c in rep["checks"]:
            status = c["status"].upper()
            if c["status"] == "skip":
                extra = f"  ({c['reason']})"
            else:
                extra = "" if c["ok"] or c.get("witness") is None else f"  witness: {c['witness']}"
            lines.append(f"  [{status}] {c['name']}{extra}")
    if "matrices" in rep:
        for m in rep["matrices"]:
            lines.append(f"  d_{m['degree']}: {m['rows']}x{m['cols']} {m['entries']}")
    return "\n".join(lines)


def _emit(rep: dict, fmt: str, out) -> None:
    rep = dict(rep, schema=SCHEMA)
    if fmt == "json":
        text = json.dumps({k: v for k, v in rep.items() if k != "comultiplication_text"},
                          sort_keys=True, indent=2, ensure_ascii=False)
    else:
        text = _render_text(rep)
    out.write(text + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_homology(args) -> dict:
    K = _load_set(args.input)
    C = normalized_chains(K)
    top = args.max_degree - 1
    rep = {"command": "homology", "input": K.name, "max_degree": args.max_degree,
           "valid_degrees": [0, top], "homology": _homology_rows(C.complex, top)}
    if args.dump_matrices:
        rep["matrices"] = _matrices(C.complex, min(args.max_degree, K.top))
    return rep


def _loop_report(name: str, L, args, notes: List[str], command: str) -> dict:
    from .comult import homology_comultiplication

    top = args.max_degree - 1
    rep = {"command": command, "input": name, "max_degree": args.max_degree,
           "valid_degrees": [0, top], "notes": notes,
           "homology": _homology_rows(L.H, top)}
    if L.H.word_cap is None:
        tab = homology_comultiplication(L, top)
        rep["comultiplication"] = tab.to_json()
        rep["comultiplication_text"] = tab.to_text()
    else:
        rep["valid_degrees"] = None
        notes.append("warning: homology above is of the word-capped complex; "
                     "the comultiplication table is omitted because the capped target does not split")
    if args.dump_matrices:
        rep["matrices"] = _matrices(L.H, args.max_degree)
    return rep


def cmd_loops(args) -> dict:
    from .comult import loop_comultiplication

    K = _load_set(args.input)
    notes: List[str] = []
    cap = _word_cap(K, args, notes)
    L = loop_comultiplication(K, args.max_degree, cap)
    return _loop_report(K.name, L, args, notes, "loops")


def cmd_coincidence(args) -> dict:
    from .comult import relative_comultiplication

    K = _load_set(args.source)
    L = _load_set(args.target)
    g = _load_map(args.left_map, K, L)
    h = _load_map(args.right_map, K, L)
    notes: List[str] = []
    cap = _word_cap(L, args, notes)
    if not K.is_reduced:
        raise InputError(f"{K.name}: needs a single vertex, found {len(K.simplices(0))}")
    R = relative_comultiplication(g, h, args.max_degree, cap)
    name = f"{K.name} -> {L.name} via ({g.name or 'g'}, {h.name or 'h'})"
    return _loop_report(name, R, args, notes, "coincidence")


# each suite returns a list of {name, ok, witness}


def _check(name: str, witness, label: Callable = str) -> dict:
    ok = witness is None
    return {"name": name, "ok": ok, "status": "pass" if ok else "fail",
            "witness": None if ok else label(witness)}


def _skipped(name: str, reason: str) -> dict:
    return {"name": name, "ok": None, "status": "skip", "witness": None, "reason": reason}


def _suite_identities(sets, args) -> List[dict]:
    return [_check(f"simplicial identities on {K.name}", K.identity_witness()) for K in sets]


def _suite_d2(sets, args) -> List[dict]:
    from .constructions import cobar, cohochschild

    out = []
    for K in sets:
        C = normalized_chains(K)
        out.append(_check(f"d^2 = 0 on C({K.name})", C.complex.d_squared_witness(args.max_degree)))
        if K.is_reduced:
            notes: List[str] = []
            cap = _word_cap(K, args, notes)
            O = cobar(C, args.max_degree, cap)
            out.append(_check(f"d^2 = 0 on cobar of {K.name}", O.complex.d_squared_witness(), O.complex.label))
            H = cohochschild(None, C, args.max_degree, cap)
            out.append(_check(f"d^2 = 0 on coHochschild of {K.name}", H.d_squared_witness(), H.label))
    return out


def _suite_sdr(sets, args) -> List[dict]:
    from .sdr_pt import em_sdr, verify_sdr

    K = sets[0]
    L = sets[1] if len(sets) > 1 else sets[0]
    S = em_sdr(K, L, trunc=args.max_degree)
    rep = verify_sdr(S)
    out = []
    for cond, per in rep.results.items():
        lab = S.X.label if cond in ("f∇ = Id", "h∇ = 0") else S.Y.label
        bad = [(n, w) for n, w in sorted(per.items()) if w is not None]
        wit = None if not bad else f"degree {bad[0][0]}: {lab(bad[0][1])}"
        out.append(_check(f"{cond} on {K.name} x {L.name}", wit))
    return out


def _suite_dcsh(sets, args) -> List[dict]:
    from .comult import aw_omega
    from .dcsh import verify_dcsh

    out = []
    for K in sets:
        notes: List[str] = []
        cap = _word_cap(K, args, notes)
        tr = min(args.max_degree, 2 * K.top)
        A = aw_omega(K, tr, cap)
        rep = verify_dcsh(A.omega.twisting, tr, word_cap=cap)
        out.append(_check(f"twisting cochain coherence on {K.name} x {K.name}",
                          None if rep.ok else rep.first, repr))
    return out


def _suite_milgram(sets, args) -> List[dict]:
    from .algebra import coalgebra_as_bicomodule
    from .comult import milgram_qhat

    out = []
    for K in sets:
        notes: List[str] = []
        cap = _word_cap(K, args, notes)
        C = normalized_chains(K)
        N = coalgebra_as_bicomodule(C)
        M = milgram_qhat(N, N, args.max_degree, cap)
        tr = args.max_degree
        out.append(_check(f"q chain map on {K.name}", M.q.witness(tr), M.q.source.label))
        out.append(_check(f"q-hat chain map on {K.name}", M.qhat.witness(tr), M.source.label))
        wit = None
        for n in range(tr + 1):
            for t in M.target.basis(n):
                if M.qhat.apply(M.sigma(t)) != {t: 1}:
                    wit = t
                    break
            if wit is not None:
                break
        out.append(_check(f"q-hat sigma-hat = Id on {K.name}", wit, M.target.label))
    return out


def _suite_loops(sets, args) -> List[dict]:
    from .comult import loop_comultiplication

    out = []
    for K in sets:
        notes: List[str] = []
        cap = _word_cap(K, args, notes)
        L = loop_comultiplication(K, args.max_degree, cap)
        lab = L.H.label
        out.append(_check(f"psi-hat chain map on {K.name}", L.chain_witness(), lab))
        out.append(_check(f"ladder on {K.name}", L.ladder_witness(), lambda w: f"{w[0]} at {lab(w[1])}"))
        out.append(_check(f"counit on {K.name}", L.counit_witness(), lab))
        if K.is_1_reduced:
            out.append(_check(f"coassociativity on {K.name}", L.coassociativity_witness(), lab))
        else:
            out.append(_skipped(f"coassociativity on {K.name}",
                                "chain-level coassociativity is only claimed for 1-reduced inputs"))
    return out


def _suite_oracle(sets, args) -> List[dict]:
    from .comult import loop_comultiplication, suspension_comult_closed_form
    from .simplicial import simplicial_suspension

    out = []
    for Kp in sets:
        K = simplicial_suspension(Kp)
        L = loop_comultiplication(K, args.max_degree)
        cf = suspension_comult_closed_form(K, args.max_degree, H=L.H)
        wit = None
        for n in range(args.max_degree + 1):
            for p in L.H.basis(n):
                if cf(p) != L.psi_hat(p):
                    wit = p
                    break
            if wit is not None:
                break
        out.append(_check(f"closed form = psi-hat on {K.name}", wit, L.H.label))
    return out


SUITE_FNS: Dict[str, Callable] = {
    "identities": _suite_identities, "d2": _suite_d2, "sdr": _suite_sdr, "dcsh": _suite_dcsh,
    "milgram": _suite_milgram, "loops": _suite_loops, "oracle": _suite_oracle,
}


def cmd_verify(args) -> dict:
    sets = [_load_set(p, check=False) for p in args.inputs]
    checks = _suite_identities(sets, args)
    if all(c["ok"] for c in checks) and args.suite != "identities":
        checks += SUITE_FNS[args.suite](sets, args)
    return {"command": "verify", "input": ", ".join(K.name for K in sets), "suite": args.suite,
            "max_degree": args.max_degree, "checks": checks,
            "ok": all(c["status"] != "fail" for c in checks)}


# ---------------------------------------------------------------------------
# entry point


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=_positive, default=6,
                        help="truncation degree; homology is reported below it (default 6)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--word-cap", type=_positive, default=None,
                        help="cobar word-length cap for sets with 1-simplices")
    common.add_argument("--dump-matrices", action="store_true",
                        help="include differential matrices in the report")
    p = argparse.ArgumentParser(prog="cohoch", description="Exact loop-space homology of simplicial sets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("homology", parents=[common], help="homology of normalized chains")
    s.add_argument("input")
    s = sub.add_parser("loops", parents=[common], help="free loop homology and its comultiplication")
    s.add_argument("input")
    s = sub.add_parser("coincidence", parents=[common], help="homotopy coincidence homology for maps g, h")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("left_map", metavar="g")
    s.add_argument("right_map", metavar="h")
    s = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    s.add_argument("suite", choices=SUITES)
    s.add_argument("inputs", nargs="+")
    return p


COMMANDS = {"homology": cmd_homology, "loops": cmd_loops, "coincidence": cmd_coincidence,
            "verify": cmd_verify}


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        rep = COMMANDS[args.command](args)
    except (InputError, NotReduced) as e:
        err.write(f"error: {e}\n")
        return 2
    except CohochError as e:
        err.write(f"verification error: {e}\n")
        return 1
    for note in rep.get("notes", []):
        err.write(note + "\n")
    _emit(rep, args.format, out)
    if args.command == "verify":
        return 0 if rep["ok"] else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
