"""Small groups shared by several test files (all of order at most 81)."""

import numpy as np

from cochainseq.cochains import Cochain
from cochainseq.extensions import ExtensionData, ExtensionGroup
from cochainseq.families import mainline_group
from cochainseq.groups import cyclic_group, direct_product, generalized_quaternion
from cochainseq.modules import TruncModule


def trivial_module(P, exps=(1,)):
    d = len(exps)
    return TruncModule(P.p, exps, [np.eye(d, dtype=np.int64)] * P.order, group=P)


def carry_extension():
    """C9 as the extension of C3 by Z/3 with the carry cocycle."""
    P = cyclic_group(3, p=3)
    M = trivial_module(P)
    tau = Cochain(P, M, 2, [[0], [1], [1], [1]])
    return ExtensionGroup(ExtensionData(P, M, tau))


def small_groups():
    C3 = cyclic_group(3, p=3)
    return {
        "C3": C3,
        "C9": cyclic_group(9, p=3),
        "C27": cyclic_group(27, p=3),
        "C3xC3": direct_product(C3, C3),
        "C3xC9": direct_product(C3, cyclic_group(9, p=3)),
        "C3^4": direct_product(direct_product(C3, C3), direct_product(C3, C3)),
        "carry": carry_extension(),
        "mainline(3,2)": mainline_group(3, 2),
        "mainline(3,3)": mainline_group(3, 3),
        "Q8": generalized_quaternion(3),
        "Q16": generalized_quaternion(4),
        "Q32": generalized_quaternion(5),
        "C2xQ8": direct_product(cyclic_group(2, p=2), generalized_quaternion(3)),
    }


def theta_c9():
    """Z^2 with the generator of C9 acting by a matrix of order 3 (a primitive cube root)."""
    from cochainseq.modules import Lattice
    G = cyclic_group(9, p=3)
    A = np.array([[0, -1], [1, -1]])
    return Lattice(3, [np.linalg.matrix_power(A, k) for k in range(9)], G)


def splitting_instances():
    """(name, G, M, N) for the three splitting instances."""
    from cochainseq.modules import Lattice
    C3 = cyclic_group(3, p=3)
    L1 = Lattice.trivial(3, 1, C3)
    L2 = theta_c9()
    return [("C3 trivial N=M", C3, L1, L1.whole()),
            ("C9 theta N=M", L2.group, L2, L2.whole()),
            ("C9 theta N=pM", L2.group, L2, L2.scaled(3))]
