"""Truncated rings of integers Z_p[theta] of p^l-th cyclotomic fields.

Elements are stored by their coefficients in the power basis 1, theta, ...,
theta^{phi-1}, reduced modulo p^K.  For valuations and ideal powers we use
the basis 1, alpha, ..., alpha^{phi-1} with alpha = theta - 1: since
v(alpha) = 1 and v(p) = phi, the terms c_k alpha^k have pairwise distinct
valuations phi * v_p(c_k) + k, so the valuation of a sum is read off directly.
"""

from __future__ import annotations

from math import comb, gcd

import numpy as np

INF = float("inf")


def _vp(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class CycRing:
    """Z_p[theta] / p^K for theta a primitive p^level-th root of unity."""

    def __init__(self, p: int, level: int = 1, K: int = 4):
        if level < 1 or K < 1:
            raise ValueError("level and K must be positive")
        self.p = p
        self.level = level
        self.K = K
        self.mod = p ** K
        self.order = p ** level  # multiplicative order of theta
        self.phi = (p - 1) * p ** (level - 1)
        step = p ** (level - 1)
        # Phi_{p^l}(X) = sum_{i<p} X^{i p^{l-1}}, monic of degree phi
        self.min_poly = tuple(1 if k % step == 0 else 0 for k in range(self.phi + 1))
        self._theta_powers = self._powers(self.order)  # theta^k, k < p^l
        self._reduce = self._powers(2 * self.phi)
        # change of basis: columns of T2A hold theta^i in alpha coordinates
        f = self.phi
        self.T2A = np.array([[comb(i, k) for i in range(f)] for k in range(f)], dtype=object)
        self.A2T = np.array([[comb(k, i) * (-1) ** (k - i) for k in range(f)] for i in range(f)],
                            dtype=object)

    def _powers(self, n):
        """theta^k in the power basis for k < n (object arrays mod p^K)."""
        f = self.phi
        out = []
        cur = [1] + [0] * (f - 1)
        for _ in range(n):
            out.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for k in range(f):
                    cur[k] = (cur[k] - top * self.min_poly[k]) % self.mod
        return out

    def __repr__(self):
        return f"CycRing(p={self.p}, level={self.level}, K={self.K})"

    def __eq__(self, other):
        return isinstance(other, CycRing) and (self.p, self.level, self.K) == (other.p, other.level, other.K)

    def __hash__(self):
        return hash((self.p, self.level, self.K))

    # -- constructors -------------------------------------------------
    def __call__(self, coeffs) -> "CycInt":
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        c = [int(x) % self.mod for x in coeffs]
        if len(c) > self.phi:
            return self.from_poly(c)
        return CycInt(self, c + [0] * (self.phi - len(c)))

    def from_poly(self, coeffs) -> "CycInt":
        """Reduce an arbitrary polynomial in theta."""
        out = [0] * self.phi
        for k, a in enumerate(coeffs):
            a = int(a)
            if a:
                pw = self.theta_power(k)
                out = [(o + a * t) % self.mod for o, t in zip(out, pw)]
        return CycInt(self, out)

    def from_alpha(self, coeffs) -> "CycInt":
        a = np.array([int(x) for x in coeffs] + [0] * (self.phi - len(coeffs)), dtype=object)
        return CycInt(self, [int(x) % self.mod for x in self.A2T.dot(a)])

    def theta_power(self, k: int):
        return self._theta_powers[k % self.order]

    @property
    def one(self):
        return self([1])

    @property
    def zero(self):
        return self([0])

    @property
    def theta(self):
        return self([0, 1]) if self.phi > 1 else self.from_poly([0, 1])

    @property
    def alpha(self):
        return self.theta - self.one

    # -- ideals ---------------------------------------------------------
    @property
    def precision(self) -> int:
        """Valuations at or above this are invisible modulo p^K."""
        return self.K * self.phi

    def ideal_exponents(self, n: int) -> list[int]:
        """O/p^n = (+)_k Z/p^{e_k} in the alpha basis."""
        q, t = divmod(n, self.phi)
        return [q + 1 if k < t else q for k in range(self.phi)]

    def ideal_basis(self, i: int) -> list["CycInt"]:
        """Z_p-basis of p^i (mod p^K): p^{e_k} alpha^k with e_k = ideal_exponents(i)."""
        if not 0 <= i <= self.precision:
            raise ValueError(f"ideal exponent {i} outside [0, {self.precision}]")
        out = []
        for k, e in enumerate(self.ideal_exponents(i)):
            a = [0] * self.phi
            a[k] = self.p ** e
            out.append(self.from_alpha(a))
        return out

    # -- matrices in the alpha basis -----------------------------------
    def mult_matrix_alpha(self, x: "CycInt") -> np.ndarray:
        """Matrix (object ints mod p^K) of y -> x*y in alpha coordinates."""
        cols = []
        for k in range(self.phi):
            e = [0] * self.phi
            e[k] = 1
            cols.append(np.array((x * self.from_alpha(e)).alpha_coords(), dtype=object))
        return np.stack(cols, axis=1)

    def galois_matrix_alpha(self, r: int) -> np.ndarray:
        cols = []
        for k in range(self.phi):
            e = [0] * self.phi
            e[k] = 1
            cols.append(np.array(galois(r, self.from_alpha(e)).alpha_coords(), dtype=object))
        return np.stack(cols, axis=1)

    def gamma0_tensor_alpha(self) -> np.ndarray:
        """G[i, j, k] = alpha-coordinate k of gamma0(alpha^i, alpha^j)."""
        f = self.phi
        basis = []
        for k in range(f):
            e = [0] * f
            e[k] = 1
            basis.append(self.from_alpha(e))
        G = np.zeros((f, f, f), dtype=object)
        for i in range(f):
            for j in range(f):
                G[i, j] = np.array(gamma0(basis[i], basis[j]).alpha_coords(), dtype=object)
        return G


class CycInt:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CycRing, coeffs):
        self.ring = ring
        self.coeffs = tuple(int(c) % ring.mod for c in coeffs)
        if len(self.coeffs) != ring.phi:
            raise ValueError("coefficient vector has wrong length")

    def _check(self, other):
        if isinstance(other, int):
            return self.ring(other)
        if not isinstance(other, CycInt) or other.ring != self.ring:
            raise ValueError("ring mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CycInt(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.ring, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.ring, [a * other for a in self.coeffs])
        other = self._check(other)
        return mul(self, other)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, e: int):
        out = self.ring.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        return isinstance(other, CycInt) and other.ring == self.ring and other.coeffs == self.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return f"CycInt({list(self.coeffs)})"

    def is_zero(self):
        return not any(self.coeffs)

    def alpha_coords(self) -> list[int]:
        a = self.ring.T2A.dot(np.array(self.coeffs, dtype=object))
        return [int(x) % self.ring.mod for x in a]

    def valuation(self):
        return valuation(self)


def mul(x: CycInt, y: CycInt) -> CycInt:
    if x.ring != y.ring:
        raise ValueError("ring mismatch")
    R = x.ring
    conv = [0] * (2 * R.phi - 1)
    for i, a in enumerate(x.coeffs):
        if a:
            for j, b in enumerate(y.coeffs):
                conv[i + j] += a * b
    out = [0] * R.phi
    for k, c in enumerate(conv):
        if c:
            pw = R._reduce[k]
            for t in range(R.phi):
                out[t] += c * pw[t]
    return CycInt(R, out)


def galois(r: int, x: CycInt) -> CycInt:
    """sigma_r: theta -> theta^r; negative r taken modulo p^level."""
    R = x.ring
    if gcd(r, R.p) != 1:
        raise ValueError(f"r = {r} is not coprime to p = {R.p}")
    r %= R.order
    out = [0] * R.phi
    for i, a in enumerate(x.coeffs):
        if a:
            pw = R.theta_power(r * i)
            for t in range(R.phi):
                out[t] += a * pw[t]
    return CycInt(R, out)


def valuation(x: CycInt):
    """p-adic valuation; infinity for the zero element of the truncation."""
    R = x.ring
    best = INF
    for k, c in enumerate(x.alpha_coords()):
        if c:
            best = min(best, R.phi * _vp(c, R.p) + k)
    return best


def ideal_basis(ring: CycRing, i: int):
    return ring.ideal_basis(i)


def gamma0(x: CycInt, y: CycInt) -> CycInt:
    """sigma_2(x) sigma_{-1}(y) - sigma_{-1}(x) sigma_2(y)."""
    if x.ring != y.ring:
        raise ValueError("ring mismatch")
    m1 = x.ring.order - 1
    return galois(2, x) * galois(m1, y) - galois(m1, x) * galois(2, y)
