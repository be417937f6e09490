"""Plain-text formats for groups, cochains, sequences and spec configs.

Group:
    group <order> <p>
    table
    <row of ids>            (order rows)
  or
    group <order> <p>
    extension
    base
    <base table rows>
    module <e_1> ... <e_d>
    action <g>
    <matrix rows>           (one block per base element)
    cocycle
    <value vector>          (one line per non-identity pair, in tuple order)

Cochain:
    cochain <degree>
    orders <o_1> ... <o_d>  (0 marks a free Z-coordinate)
    <g_1> ... <g_n> : <v_1> ... <v_d>   (non-zero entries only)

Sequence:
    sequence <degree> <r0> <omega>
    rho
    <cochain block>
    sigma
    <cochain block>
"""

from __future__ import annotations

import numpy as np

from .cochains import Cochain, tuple_index, tuple_list
from .extensions import ExtensionData, ExtensionGroup
from .groups import FiniteGroup, TableGroup
from .modules import Lattice, TruncModule
from .sequences import CochainSeq, SeqContext

__all__ = ["dump_group", "load_group", "dump_cochain", "load_cochain", "dump_sequence", "load_sequence",
           "parse_config", "dump_config"]


def _lines(text: str) -> list[str]:
    out = []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            out.append(ln)
    return out


def _ints(line: str) -> list[int]:
    return [int(x) for x in line.split()]


# -- groups ------------------------------------------------------------------


def dump_group(G: FiniteGroup) -> str:
    out = [f"group {G.order} {G.p}"]
    if isinstance(G, ExtensionGroup):
        P, M = G.base, G.module
        out.append("extension")
        out.append("base")
        out += [" ".join(map(str, row)) for row in P.table().tolist()]
        out.append("module " + " ".join(map(str, M.exps)))
        for g in range(P.order):
            out.append(f"action {g}")
            out += [" ".join(map(str, row)) for row in M.action[g].tolist()]
        out.append("cocycle")
        out += [" ".join(map(str, row)) for row in G.data.cocycle.values.tolist()]
    else:
        out.append("table")
        out += [" ".join(map(str, row)) for row in G.table().tolist()]
    return "\n".join(out) + "\n"


def load_group(text: str) -> FiniteGroup:
    L = _lines(text)
    head = L[0].split()
    if head[0] != "group":
        raise ValueError("missing group header")
    order, p = int(head[1]), int(head[2])
    kind = L[1]
    if kind == "table":
        rows = [_ints(x) for x in L[2:2 + order]]
        if len(rows) != order:
            raise ValueError("truncated table")
        return TableGroup(np.array(rows), p=p)
    if kind != "extension" or L[2] != "base":
        raise ValueError(f"unknown group kind {kind!r}")
    k = 3
    rows = []
    while not L[k].startswith("module"):
        rows.append(_ints(L[k]))
        k += 1
    P = TableGroup(np.array(rows), p=p)
    exps = _ints(L[k][len("module"):])
    d = len(exps)
    k += 1
    acts = []
    for g in range(P.order):
        if L[k] != f"action {g}":
            raise ValueError(f"expected action block for element {g}")
        acts.append([_ints(x) for x in L[k + 1:k + 1 + d]])
        k += 1 + d
    M = TruncModule(p, exps, np.array(acts).reshape(P.order, d, d), group=P)
    if L[k] != "cocycle":
        raise ValueError("missing cocycle block")
    vals = [_ints(x) for x in L[k + 1:]]
    tau = Cochain(P, M, 2, np.array(vals, dtype=np.int64).reshape(-1, d))
    G = ExtensionGroup(ExtensionData(P, M, tau))
    if G.order != order:
        raise ValueError("header order does not match the extension")
    return G


# -- cochains ------------------------------------------------------------------


def _orders(M) -> list[int]:
    if isinstance(M, Lattice):
        return [0] * M.rank
    return [int(o) for o in M.orders]


def dump_cochain(f: Cochain) -> str:
    out = [f"cochain {f.degree}", "orders " + " ".join(map(str, _orders(f.module)))]
    tuples = tuple_list(f.group, f.degree) if f.degree else [()]
    for t, v in zip(tuples, f.values.tolist()):
        if any(int(x) for x in v):
            out.append(" ".join(map(str, t)) + " : " + " ".join(str(int(x)) for x in v))
    return "\n".join(out) + "\n"


def load_cochain(text: str, group: FiniteGroup, module) -> Cochain:
    L = _lines(text)
    head = L[0].split()
    if head[0] != "cochain":
        raise ValueError("missing cochain header")
    n = int(head[1])
    if _ints(L[1][len("orders"):]) != _orders(module):
        raise ValueError("module orders do not match")
    f = Cochain(group, module, n)
    vals = f.values.copy()
    for ln in L[2:]:
        lhs, rhs = ln.split(":")
        t = _ints(lhs)
        if len(t) != n:
            raise ValueError(f"tuple {t} has the wrong length")
        idx = tuple_index(group, t) if n else 0
        vals[idx] = _ints(rhs)
    return Cochain(group, module, n, vals)


# -- sequences ----------------------------------------------------------------


def dump_sequence(s: CochainSeq) -> str:
    return (f"sequence {s.degree} {s.r0} {s.omega}\nrho\n" + dump_cochain(s.rho)
            + "sigma\n" + dump_cochain(s.sigma))


def load_sequence(text: str, ctx: SeqContext) -> CochainSeq:
    L = _lines(text)
    head = L[0].split()
    if head[0] != "sequence":
        raise ValueError("missing sequence header")
    n, r0, w = int(head[1]), int(head[2]), int(head[3])
    i_rho, i_sig = L.index("rho"), L.index("sigma")
    rho = load_cochain("\n".join(L[i_rho + 1:i_sig]), ctx.G, ctx.M)
    sig = load_cochain("\n".join(L[i_sig + 1:]), ctx.G, ctx.N.lattice)
    if rho.degree != n:
        raise ValueError("degree mismatch")
    return CochainSeq(ctx, rho, sig, r0, w)


# -- key = value configs ----------------------------------------------------------


_INT_KEYS = {"p", "s", "j", "m", "n", "r0"}
_LIST_KEYS = {"c", "r", "s_list", "j_list", "m_list", "n_list"}


def parse_config(text: str) -> dict:
    """key = value lines; c and list keys take comma or space separated integers."""
    out: dict = {}
    for ln in _lines(text):
        if "=" not in ln:
            raise ValueError(f"not a key = value line: {ln!r}")
        k, v = (x.strip() for x in ln.split("=", 1))
        if k in _INT_KEYS:
            out[k] = int(v)
        elif k in _LIST_KEYS:
            out[k] = [int(x) for x in v.replace(",", " ").split()]
        elif v.lower() in ("true", "false"):
            out[k] = v.lower() == "true"
        else:
            out[k] = v
    return out


def dump_config(cfg: dict) -> str:
    lines = []
    for k in sorted(cfg):
        v = cfg[k]
        if isinstance(v, (list, tuple)):
            v = ", ".join(map(str, v))
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"
