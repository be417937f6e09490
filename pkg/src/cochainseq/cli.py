"""Command line experiments with machine-readable reports.

Every command recomputes its checks from scratch and exits with status 0
iff all of them pass.  The JSON payload under "report" is deterministic;
timings live beside it, outside the payload.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from pathlib import Path

import numpy as np

from .cochains import cohomology, free_cohomology, log_order
from .families import (MainLineSpec, SkeletonSpec, count_orbits_T_mod_T3, mainline_group,
                       skeleton_group, theta_lattice)
from .groups import cyclic_group, generalized_quaternion, maximal_elementary_abelians
from .io import parse_config
from .modules import Lattice
from .quillen import NotDecided, build_category, categories_isomorphic
from .sequences import SeqContext, split_decompose_seq, split_lift


class Report:
    def __init__(self, command: str, params: dict):
        self.command, self.params = command, params
        self.checks: list[dict] = []
        self.artifacts: list[str] = []
        self.data: dict = {}
        self.timing: dict = {}
        self._t0 = time.perf_counter()

    def check(self, name: str, ok: bool, **detail) -> bool:
        self.checks.append({"name": name, "pass": bool(ok), **detail})
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def payload(self) -> dict:
        return {"command": self.command, "parameters": self.params, "checks": self.checks,
                "all_pass": self.ok, "data": self.data, "artifacts": self.artifacts}

    def to_json(self) -> str:
        self.timing["total_seconds"] = round(time.perf_counter() - self._t0, 3)
        return json.dumps({"report": self.payload(), "timing": self.timing}, indent=1, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{self.command}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            extra = {k: v for k, v in c.items() if k not in ("name", "pass")}
            lines.append(f"  [{'PASS' if c['pass'] else 'FAIL'}] {c['name']}" + (f"  {extra}" if extra else ""))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# splitting check


def splitting_instance(p: int, order: int, module: str, rank: int, sub: str):
    G = cyclic_group(order, p=p)
    if module == "theta":
        M = theta_lattice(p, G)
    elif module == "trivial":
        M = Lattice.trivial(p, rank, G)
    else:
        raise ValueError(f"unknown module {module!r}")
    N = M.whole() if sub == "M" else M.scaled(p)
    return G, M, N


def cmd_splitting_check(p=3, order=3, module="trivial", rank=1, sub="M", n=1, rs=None, r0=None) -> Report:
    G, M, N = splitting_instance(p, order, module, rank, sub)
    m = log_order(G).m
    rs = list(rs) if rs else [2 * m, 2 * m + 1, 2 * m + 2]
    r0 = 2 * m if r0 is None else r0
    rep = Report("splitting-check", {"p": p, "order": order, "module": module, "rank": M.rank,
                                     "N": sub, "n": n, "r": rs, "r0": r0})
    bad = [r for r in rs + [r0] if r < 2 * m]
    if bad:
        rep.check("r >= 2m", False, refused=bad, m=m)
        return rep
    ctx = SeqContext(G, M, N)
    hM = free_cohomology(G, M, n)
    hN = free_cohomology(G, N.lattice, n + 1)
    right = hM.invariants.order * hN.invariants.order
    for r in rs:
        left = cohomology(G, ctx.module(r), n).order
        rep.check(f"|H^{n}(G, M/p^{r}N)| = |H^{n}(G,M)| |H^{n + 1}(G,N)|", left == right,
                  r=r, left=left, right=right)
    gens = [(a, b) for a in hM.classes() for b in hN.classes()]
    for r in rs:
        fails = 0
        for a, b in gens:
            s = split_lift(ctx, hM.from_coords(a), hN.from_coords(b), r0)
            if split_decompose_seq(s, r) != (a, b):
                fails += 1
        rep.check("split_lift then split_decompose is the identity", fails == 0, r=r, pairs=len(gens),
                  failures=fails)
    return rep


# ---------------------------------------------------------------------------
# main line figure and equivalences


def figure_checks(cat, G, rep: Report):
    ranks = [o.rank for o in cat.objects]
    labels = {o.index: G.subgroup_label(o.elements) for o in cat.objects}
    expect = 10 if cat.include_trivial else 9
    rep.check("object count", len(cat) == expect, objects=len(cat), expected=expect)
    counts = {k: ranks.count(k) for k in sorted(set(ranks))}
    rep.check("rank-1 objects", counts.get(1, 0) == 5, count=counts.get(1, 0))
    rep.check("rank-2 objects", counts.get(2, 0) == 4, count=counts.get(2, 0))
    for o in cat.objects:
        if o.rank == 2:
            rep.check(f"|Aut {labels[o.index]}| = 3", o.aut_order == 3, aut=o.aut_order)
    for E in (o for o in cat.objects if o.rank == 1 and "τ" in labels[o.index]):
        partners = [F.index for F in cat.objects if F.rank == 2 and cat.homcount(E.index, F.index)]
        ok = len(partners) == 1 and cat.homcount(E.index, partners[0]) == 3
        rep.check(f"hom({labels[E.index]} -> partner) = 3", ok,
                  partners=[labels[F] for F in partners],
                  counts=[cat.homcount(E.index, F) for F in partners])
    return labels


def cmd_figure(p=3, s=4, include_trivial=True, show_auts=False):
    G = mainline_group(MainLineSpec(p, s))
    cat = build_category(G, include_trivial=include_trivial)
    rep = Report("figure", {"p": p, "s": s, "include_trivial": include_trivial})
    labels = figure_checks(cat, G, rep)
    rep.data["objects"] = [{"index": o.index, "label": labels[o.index], "rank": o.rank,
                            "aut_order": o.aut_order} for o in cat.objects]
    rep.data["homs"] = [{"source": E, "target": F, "count": n} for (E, F), n in sorted(cat.homcounts().items())]
    dot = cat.to_dot(show_auts=show_auts, labels=labels)
    return rep, cat, dot


def _iso(a, b):
    try:
        res = categories_isomorphic(a, b)
    except NotDecided as exc:
        return None, str(exc)
    return res, res.reason


def cmd_mainline_equiv(p=3, s_list=(4, 5, 6), contrast=()):
    rep = Report("mainline-equiv", {"p": p, "s": list(s_list), "contrast": list(contrast)})
    cats = {s: build_category(mainline_group(MainLineSpec(p, s))) for s in sorted(set(s_list) | set(contrast))}
    witnesses = {}
    for s, t in itertools.combinations(sorted(s_list), 2):
        res, why = _iso(cats[s], cats[t])
        ok = bool(res) and res.witness.check_exhaustive(cats[s], cats[t])
        rep.check(f"mainline({p},{s}) ~ mainline({p},{t})", ok, reason=why)
        if res:
            witnesses[f"{s}-{t}"] = res.witness.to_dict()
    for c in contrast:
        for s in sorted(s_list):
            res, why = _iso(cats[c], cats[s])
            found = bool(res) and res.witness.check_exhaustive(cats[c], cats[s])
            rep.check(f"mainline({p},{c}) not equivalent to mainline({p},{s})", res is not None and not found,
                      reason=why, witness_found=found)
            if found:
                witnesses[f"{c}-{s}"] = res.witness.to_dict()
    rep.data["objects"] = {str(s): len(c) for s, c in cats.items()}
    rep.data["witnesses"] = witnesses
    return rep


# ---------------------------------------------------------------------------
# skeleton groups


def skeleton_census(R):
    """(number of maximal elementary abelian classes by rank) via the enumeration."""
    from .groups import SubgroupClasses
    mx = maximal_elementary_abelians(R)
    sc = SubgroupClasses(R, [S for S, _ in mx])
    by_rank: dict[int, int] = {}
    for rep in sc.reps:
        k = int(round(np.log(sc.sets[rep].size) / np.log(R.p)))
        by_rank[k] = by_rank.get(k, 0) + 1
    return by_rank


def cmd_skeleton_equiv(j_list=(7,), c_list=((1,), (0, 1)), m_list=(7, 8)):
    rep = Report("skeleton-equiv", {"j": list(j_list), "c": [list(c) for c in c_list], "m": list(m_list)})
    for j in sorted(set(j_list)):
        d = count_orbits_T_mod_T3(j)
        rep.check(f"d = 11 for j = {j}", d == 11, d=d)
    specs = []
    for j, c, m in itertools.product(j_list, c_list, m_list):
        try:
            specs.append(SkeletonSpec(j, tuple(c), m))
        except ValueError as exc:
            rep.data.setdefault("skipped", []).append({"j": j, "c": list(c), "m": m, "why": str(exc)})
    cats = {}
    for sp in specs:
        t = time.perf_counter()
        R = skeleton_group(sp)
        name = f"R(j={sp.j},c={list(sp.c)},m={sp.m})"
        rep.check(f"|{name}| = 3^(m+2)", R.order == 3 ** (sp.m + 2), order=R.order)
        census = skeleton_census(R)
        rep.check(f"maximal elementary abelians of {name}: 11 rank 4 + 1 rank 6",
                  census == {4: 11, 6: 1}, census={str(k): v for k, v in sorted(census.items())})
        cats[name] = build_category(R)
        rep.timing[name] = round(time.perf_counter() - t, 2)
    names = list(cats)
    rep.data["objects"] = {k: len(c) for k, c in cats.items()}
    for a, b in itertools.combinations(names, 2):
        t = time.perf_counter()
        res, why = _iso(cats[a], cats[b])
        rep.check(f"{a} ~ {b}", bool(res), reason=why)
        rep.timing[f"{a} ~ {b}"] = round(time.perf_counter() - t, 2)
    return rep


# ---------------------------------------------------------------------------
# quaternion groups


def cmd_quaternion(n_list=(3, 4, 5)):
    rep = Report("quaternion", {"n": list(n_list)})
    cats = {}
    for n in n_list:
        Q = generalized_quaternion(n)
        inv = np.flatnonzero(Q.element_orders == 2)
        rep.check(f"Q_{2 ** n} has a unique involution", inv.size == 1, involutions=inv.tolist())
        central = bool(inv.size) and all(Q.is_central(int(x)) for x in inv)
        rep.check(f"involutions of Q_{2 ** n} are central", central)
        cats[n] = build_category(Q)
        rep.check(f"skeleton of Q_{2 ** n} has 2 objects", len(cats[n]) == 2, objects=len(cats[n]))
    for a, b in itertools.combinations(sorted(cats), 2):
        res, why = _iso(cats[a], cats[b])
        ok = bool(res) and res.witness.check_exhaustive(cats[a], cats[b])
        rep.check(f"Q_{2 ** a} ~ Q_{2 ** b}", ok, reason=why)
    return rep


# ---------------------------------------------------------------------------
# argument handling


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cochainseq", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key = value file supplying defaults")
    ap.add_argument("--out", help="directory for report and artifacts")
    ap.add_argument("--format", choices=["json", "dot", "text"], default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("splitting-check", help="order identity and round trip of the splitting")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--order", type=int, default=None, help="order of the cyclic group (default p)")
    sp.add_argument("--module", choices=["trivial", "theta"], default="trivial")
    sp.add_argument("--rank", type=int, default=1)
    sp.add_argument("--N", dest="sub", choices=["M", "pM"], default="M")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--r", type=_int_list, default=None)
    sp.add_argument("--r0", type=int, default=None)

    sp = sub.add_parser("figure", help="skeleton of the main-line quotient")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--s", type=int, default=4)
    sp.add_argument("--include-trivial", dest="include_trivial", action=argparse.BooleanOptionalAction,
                    default=True)
    sp.add_argument("--show-auts", action="store_true")

    sp = sub.add_parser("mainline-equiv", help="pairwise equivalence of main-line skeletons")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--s", type=_int_list, default=[4, 5, 6])
    sp.add_argument("--contrast", type=_int_list, default=[],
                    help="s values expected NOT to be equivalent to the others")

    sp = sub.add_parser("skeleton-equiv", help="skeleton groups over the (j, c, m) grid")
    sp.add_argument("--j", type=_int_list, default=[7])
    sp.add_argument("--c", type=_int_list, action="append", default=None,
                    help="theta-coefficients of the unit c (repeat for several)")
    sp.add_argument("--m", type=_int_list, default=[7, 8])

    sp = sub.add_parser("quaternion", help="generalized quaternion groups")
    sp.add_argument("--n", type=_int_list, default=[3, 4, 5])
    ap.subparser_map = sub.choices
    return ap


def _apply_config(args, cfg: dict, sub: argparse.ArgumentParser):
    """Config values replace defaults only; flags given on the command line win."""
    for k, v in cfg.items():
        key = k.replace("-", "_")
        if not hasattr(args, key):
            continue
        default = sub.get_default(key)
        if getattr(args, key) != default:
            continue
        if key == "c":
            v = [v if isinstance(v, list) else [v]]
        elif isinstance(default, list) and not isinstance(v, list):
            v = [v]
        setattr(args, key, v)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        _apply_config(args, parse_config(Path(args.config).read_text()), ap.subparser_map[args.command])
    dot = None
    if args.command == "splitting-check":
        rep = cmd_splitting_check(args.p, args.order or args.p, args.module, args.rank, args.sub,
                                  args.n, args.r, args.r0)
    elif args.command == "figure":
        rep, _, dot = cmd_figure(args.p, args.s, args.include_trivial, args.show_auts)
    elif args.command == "mainline-equiv":
        rep = cmd_mainline_equiv(args.p, args.s, args.contrast)
    elif args.command == "skeleton-equiv":
        c_list = [tuple(c) for c in (args.c or [[1], [0, 1]])]
        rep = cmd_skeleton_equiv(args.j, c_list, args.m)
    else:
        rep = cmd_quaternion(args.n)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if dot is not None:
            (out / f"{args.command}.dot").write_text(dot)
            rep.artifacts.append(str(out / f"{args.command}.dot"))
        rep.artifacts.append(str(out / f"{args.command}.json"))
        (out / f"{args.command}.json").write_text(rep.to_json() + "\n")
    if args.format == "json":
        sys.stdout.write(rep.to_json() + "\n")
    elif args.format == "dot":
        if dot is None:
            ap.error("--format dot is only available for the figure command")
        sys.stdout.write(dot)
    else:
        sys.stdout.write(rep.to_text())
    return 0 if rep.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
