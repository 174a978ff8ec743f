"""Exact GF(p^r) arithmetic in polynomial basis with tabulated discrete logs.

Fields are capped at 2^20 elements: every log and multiplicative subgroup is
an explicit table, which keeps all downstream verification exact and fast.
"""

from __future__ import annotations

import json
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .groups import FiniteAbelianGroup

Element = Tuple[int, ...]
Poly = Tuple[int, ...]  # coefficients, lowest degree first

MAX_FIELD_SIZE = 1 << 20

# Monic irreducible moduli, lowest degree first.  The p = 2 entries are the
# classical primitive trinomials/pentanomials (x generates the unit group),
# which the Galois-ring lift relies on.  Anything missing here is found by a
# deterministic scan, so the table is a reproducibility convenience, not a
# requirement.  Override via an external table file (see load_poly_table).
BUILTIN_POLYS: Dict[Tuple[int, int], Poly] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 0, 1, 1),  # x^3 + x^2 + 1
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1),
    (3, 2): (2, 1, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 1, 0, 0, 0, 0, 1),
    (3, 7): (1, 0, 2, 0, 0, 0, 0, 1),
    (5, 2): (2, 1, 1),
    (5, 3): (2, 0, 1, 1),
    (5, 4): (2, 0, 0, 0, 1),
    (7, 2): (3, 1, 1),
    (7, 3): (2, 3, 0, 1),
    (7, 4): (5, 3, 1, 0, 1),
    (11, 2): (7, 1, 1),
    (11, 3): (5, 0, 1, 1),
    (13, 2): (2, 1, 1),
    (13, 3): (6, 1, 0, 1),
}


# -- integer helpers ----------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization by trial division (inputs stay below 2^20 here)."""
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def isqrt_exact(n: int) -> Optional[int]:
    """Integer square root if n is a perfect square, else None."""
    if n < 0:
        return None
    r = int(n**0.5)
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand * cand == n:
            return cand
    return None


# -- polynomial arithmetic over GF(p) -----------------------------------------


def _trim(c: List[int]) -> Tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> Poly:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return poly_rem(out, mod, p)


def poly_rem(a: Sequence[int], mod: Sequence[int], p: int) -> Poly:
    a = [c % p for c in a]
    deg_m = len(mod) - 1
    inv_lead = pow(mod[-1], -1, p)
    for i in range(len(a) - 1, deg_m - 1, -1):
        c = a[i]
        if c:
            f = (c * inv_lead) % p
            for j, mj in enumerate(mod):
                a[i - deg_m + j] = (a[i - deg_m + j] - f * mj) % p
    return _trim(a[:deg_m])


def poly_powmod(a: Sequence[int], k: int, mod: Sequence[int], p: int) -> Poly:
    result: Poly = (1,)
    base = poly_rem(list(a), mod, p)
    while k:
        if k & 1:
            result = poly_mulmod(result, base, mod, p)
        base = poly_mulmod(base, base, mod, p)
        k >>= 1
    return result


def poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_mod(a: Poly, b: Poly, p: int) -> Poly:
    a = list(a)
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1]
        if c:
            f = (c * inv_lead) % p
            off = len(a) - len(b)
            for j, bj in enumerate(b):
                a[off + j] = (a[off + j] - f * bj) % p
        a.pop()
    return _trim(a)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's criterion for a monic polynomial over GF(p)."""
    f = tuple(c % p for c in poly)
    r = len(f) - 1
    if r < 1 or f[-1] != 1:
        return False
    x_red = poly_rem([0, 1], f, p)
    xq = poly_powmod((0, 1), p**r, f, p)
    if _poly_sub(xq, x_red, p):
        return False
    for t in factorize(r):
        xqt = poly_powmod((0, 1), p ** (r // t), f, p)
        g = poly_gcd(_poly_sub(xqt, x_red, p), f, p)
        if len(g) - 1 != 0:
            return False
    return True


def _poly_sub(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        out[i] = (ai - bi) % p
    return _trim(out)


def find_irreducible(p: int, r: int) -> Poly:
    """First monic irreducible of degree r in lexicographic coefficient order."""
    for low in range(p**r):
        coeffs = []
        v = low
        for _ in range(r):
            coeffs.append(v % p)
            v //= p
        cand = tuple(coeffs) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise RuntimeError(f"no irreducible polynomial of degree {r} over GF({p})")


def load_poly_table(path: str) -> Dict[Tuple[int, int], Poly]:
    """Read a user table: JSON mapping "p,r" to coefficient lists (low first)."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    table: Dict[Tuple[int, int], Poly] = {}
    for key, coeffs in raw.items():
        p_str, r_str = key.split(",")
        table[(int(p_str), int(r_str))] = tuple(int(c) for c in coeffs)
    return table


# -- the field context ---------------------------------------------------------


class FieldCtx:
    """GF(p^r) with a fixed monic irreducible modulus and a primitive element.

    Elements are length-r tuples over GF(p), lowest degree first.  The
    primitive element is found by a brute-force order scan over elements in
    encoded order, so construction is deterministic.  The full log table is
    built once; the context is immutable afterwards.
    """

    def __init__(
        self,
        p: int,
        r: int = 1,
        modulus: Optional[Sequence[int]] = None,
        poly_table: Optional[Dict[Tuple[int, int], Poly]] = None,
    ) -> None:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if r < 1:
            raise ValueError(f"extension degree must be >= 1, got {r}")
        q = p**r
        if q > MAX_FIELD_SIZE:
            raise ValueError(f"field size {q} exceeds the {MAX_FIELD_SIZE} cap")
        self.p = p
        self.r = r
        self.q = q
        if modulus is None:
            if poly_table and (p, r) in poly_table:
                modulus = poly_table[(p, r)]
            elif (p, r) in BUILTIN_POLYS:
                modulus = BUILTIN_POLYS[(p, r)]
            elif r == 1:
                modulus = (0, 1)
            else:
                modulus = find_irreducible(p, r)
        mod = tuple(c % p for c in modulus)
        if len(mod) != r + 1 or mod[-1] != 1:
            raise ValueError(f"modulus {mod} is not monic of degree {r}")
        if not is_irreducible(mod, p):
            raise ValueError(f"modulus {mod} is not irreducible over GF({p})")
        self.modulus: Poly = mod
        self.zero: Element = (0,) * r
        self.one: Element = (1,) + (0,) * (r - 1)
        self.g = self._find_primitive()
        self._exp: List[Element] = []
        self._log: Dict[Element, int] = {}
        cur = self.one
        for i in range(q - 1):
            self._exp.append(cur)
            self._log[cur] = i
            cur = self.mul(cur, self.g)
        if cur != self.one or len(self._log) != q - 1:
            raise RuntimeError(f"primitive element {self.g} failed the order check")

    # -- construction helpers

    def _pad(self, poly: Poly) -> Element:
        return tuple(poly) + (0,) * (self.r - len(poly))

    def _find_primitive(self) -> Element:
        target = self.q - 1
        prime_divs = list(factorize(target))
        for idx in range(1, self.q):
            a = self.decode(idx)
            if self.poly_pow(a, target) != self.one:
                continue
            if all(self.poly_pow(a, target // ell) != self.one for ell in prime_divs):
                return a
        raise RuntimeError(f"no primitive element found in GF({self.p}^{self.r})")

    def poly_pow(self, a: Element, k: int) -> Element:
        """Square-and-multiply power using raw polynomial arithmetic."""
        result = self.one
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    # -- basic queries

    def __repr__(self) -> str:
        return f"FieldCtx(GF({self.p}^{self.r}), modulus={list(self.modulus)})"

    def encode(self, a: Element) -> int:
        v = 0
        for c in reversed(a):
            v = v * self.p + c
        return v

    def decode(self, idx: int) -> Element:
        coeffs = []
        for _ in range(self.r):
            coeffs.append(idx % self.p)
            idx //= self.p
        return tuple(coeffs)

    def elements(self) -> Iterator[Element]:
        for idx in range(self.q):
            yield self.decode(idx)

    def nonzero_elements(self) -> Iterator[Element]:
        for idx in range(1, self.q):
            yield self.decode(idx)

    def element(self, coeffs: Sequence[int]) -> Element:
        if len(coeffs) > self.r:
            return self._pad(poly_rem(list(coeffs), self.modulus, self.p))
        return tuple(c % self.p for c in coeffs) + (0,) * (self.r - len(coeffs))

    def scalar(self, c: int) -> Element:
        return (c % self.p,) + (0,) * (self.r - 1)

    # -- arithmetic

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a: Element, b: Element) -> Element:
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % self.p for x in a)

    def mul(self, a: Element, b: Element) -> Element:
        return self._pad(poly_mulmod(a, b, self.modulus, self.p))

    def inv(self, a: Element) -> Element:
        if a == self.zero:
            raise ZeroDivisionError("inversion of zero in the field")
        return self.g_pow((-self._log[a]) % (self.q - 1))

    def pow(self, a: Element, k: int) -> Element:
        if a == self.zero:
            if k <= 0:
                raise ZeroDivisionError("0 cannot be raised to a nonpositive power")
            return self.zero
        return self.g_pow((self._log[a] * k) % (self.q - 1))

    def frobenius(self, a: Element) -> Element:
        return self.poly_pow(a, self.p)

    def trace(self, a: Element) -> int:
        """Absolute trace into GF(p), returned as an integer in [0, p)."""
        acc = self.zero
        cur = a
        for _ in range(self.r):
            acc = self.add(acc, cur)
            cur = self.frobenius(cur)
        if any(acc[1:]):
            raise RuntimeError(f"trace of {a} did not land in the prime field: {acc}")
        return acc[0]

    # -- multiplicative structure

    def g_pow(self, i: int) -> Element:
        return self._exp[i % (self.q - 1)]

    def discrete_log(self, a: Element) -> int:
        if a == self.zero:
            raise ZeroDivisionError("discrete log of zero")
        return self._log[a]

    def mult_subgroup(self, e: int) -> FrozenSet[Element]:
        """The index-e subgroup {g^(e*i)} of the multiplicative group."""
        if e <= 0 or (self.q - 1) % e != 0:
            raise ValueError(f"index {e} does not divide the group order {self.q - 1}")
        return frozenset(self._exp[i] for i in range(0, self.q - 1, e))

    def element_order(self, a: Element) -> int:
        if a == self.zero:
            raise ZeroDivisionError("zero has no multiplicative order")
        return (self.q - 1) // _gcd(self._log[a], self.q - 1) if self._log[a] else 1

    # -- ring-style adapter used by the generic family machinery

    def is_unit(self, a: Element) -> bool:
        return a != self.zero

    def units(self) -> Iterator[Element]:
        return self.nonzero_elements()

    def nonunits(self) -> Iterator[Element]:
        yield self.zero

    def additive_group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup((self.p,) * self.r)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
