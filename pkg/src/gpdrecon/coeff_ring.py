"""Finite commutative coefficient rings ``Z/n`` and finite products of them.

Elements are plain ints in ``range(ring.size)``.  For a modular ring the int is
the residue itself; for a product ``Z/n1 x ... x Z/nt`` it is the mixed-radix
encoding ``r1 + n1*(r2 + n2*(...))``.  All derived structure (units,
idempotents, nilpotents) is computed eagerly at construction.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

MAX_RING_SIZE = 10_000
TABLE_MAX_SIZE = 1024
LAURENT_MIN_EXP = -64
LAURENT_MAX_EXP = 64


class RingError(ValueError):
    pass


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n`` as ``[(p, k), ...]`` with ``p`` increasing."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


@dataclass(frozen=True)
class LocalComponent:
    """A ``Z/p^k`` factor in the primary decomposition of a ring."""

    factor: int
    p: int
    k: int

    @property
    def q(self) -> int:
        return self.p**self.k


class Ring:
    """A finite commutative ring with unit, ``Z/n`` or a product of such."""

    def __init__(self, moduli):
        moduli = tuple(int(n) for n in moduli)
        if not moduli:
            raise RingError("a ring needs at least one factor")
        for n in moduli:
            if n < 2:
                raise RingError(f"modulus must be >= 2, got {n}")
        size = math.prod(moduli)
        if size > MAX_RING_SIZE:
            raise RingError(f"ring of size {size} exceeds cap {MAX_RING_SIZE}")
        self.moduli = moduli
        self.size = size
        self.zero = 0
        self.one = self.encode(tuple(1 for _ in moduli))
        self.components = tuple(
            LocalComponent(i, p, k) for i, n in enumerate(moduli) for p, k in factorize(n)
        )
        self._inverse = {}
        for a in range(size):
            res = self.decode(a)
            if all(math.gcd(r, n) == 1 for r, n in zip(res, moduli)):
                self._inverse[a] = self.encode(
                    tuple(pow(r, -1, n) for r, n in zip(res, moduli))
                )
        self.units = frozenset(self._inverse)
        self.idempotents = frozenset(a for a in range(size) if self.mul(a, a) == a)
        self.nilpotents = frozenset(a for a in range(size) if self.pow(a, size) == 0)

    @classmethod
    def modular(cls, n: int) -> "Ring":
        return cls((n,))

    @classmethod
    def product(cls, factors) -> "Ring":
        return cls(tuple(factors))

    @property
    def is_modular(self) -> bool:
        return len(self.moduli) == 1

    def __eq__(self, other):
        return isinstance(other, Ring) and self.moduli == other.moduli

    def __hash__(self):
        return hash(self.moduli)

    def __repr__(self):
        if self.is_modular:
            return f"Z/{self.moduli[0]}"
        return " x ".join(f"Z/{n}" for n in self.moduli)

    def spec(self) -> dict:
        if self.is_modular:
            return {"mod": self.moduli[0]}
        return {"product": list(self.moduli)}

    # -- encoding ---------------------------------------------------------
    def encode(self, residues) -> int:
        a = 0
        for r, n in zip(reversed(residues), reversed(self.moduli)):
            a = a * n + (r % n)
        return a

    def decode(self, a: int) -> tuple[int, ...]:
        out = []
        for n in self.moduli:
            a, r = divmod(a, n)
            out.append(r)
        return tuple(out)

    def from_int(self, z: int) -> int:
        return self.encode(tuple(z % n for n in self.moduli))

    def format(self, a: int) -> str:
        if self.is_modular:
            return str(a)
        return "(" + ",".join(map(str, self.decode(a))) + ")"

    def elements(self) -> range:
        return range(self.size)

    # -- arithmetic -------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.is_modular:
            return (a + b) % self.size
        return self.encode(tuple(x + y for x, y in zip(self.decode(a), self.decode(b))))

    def sub(self, a: int, b: int) -> int:
        if self.is_modular:
            return (a - b) % self.size
        return self.encode(tuple(x - y for x, y in zip(self.decode(a), self.decode(b))))

    def neg(self, a: int) -> int:
        if self.is_modular:
            return (-a) % self.size
        return self.encode(tuple(-x for x in self.decode(a)))

    def mul(self, a: int, b: int) -> int:
        if self.is_modular:
            return (a * b) % self.size
        return self.encode(tuple(x * y for x, y in zip(self.decode(a), self.decode(b))))

    def pow(self, a: int, e: int) -> int:
        if self.is_modular:
            return pow(a, e, self.size)
        return self.encode(tuple(pow(x, e, n) for x, n in zip(self.decode(a), self.moduli)))

    def inverse(self, a: int) -> int | None:
        return self._inverse.get(a)

    def is_unit(self, a: int) -> bool:
        return a in self._inverse

    def sum(self, values) -> int:
        s = 0
        for v in values:
            s = self.add(s, v)
        return s

    # -- local components (used by the modular linear algebra) ------------
    def project(self, a: int, comp: LocalComponent) -> int:
        return self.decode(a)[comp.factor] % comp.q

    def lift(self, parts: dict[LocalComponent, int]) -> int:
        """Inverse of ``project`` over all components (CRT)."""
        residues = []
        for i, n in enumerate(self.moduli):
            r, m = 0, 1
            for comp in self.components:
                if comp.factor != i:
                    continue
                v = parts.get(comp, 0) % comp.q
                # combine r mod m with v mod q
                t = ((v - r) * pow(m, -1, comp.q)) % comp.q
                r, m = r + m * t, m * comp.q
            residues.append(r % n)
        return self.encode(tuple(residues))

    # -- predicates -------------------------------------------------------
    def is_indecomposable(self) -> bool:
        return self.idempotents == {0, self.one}

    def is_reduced(self) -> bool:
        return self.nilpotents == {0}

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense ``(add, mul)`` tables as int32 arrays; only for small rings."""
        if self.size > TABLE_MAX_SIZE:
            raise RingError(f"tables only for rings of size <= {TABLE_MAX_SIZE}")
        idx = np.arange(self.size)
        if self.is_modular:
            add = (idx[:, None] + idx[None, :]) % self.size
            mul = (idx[:, None] * idx[None, :]) % self.size
        else:
            add = np.array([[self.add(a, b) for b in idx] for a in idx])
            mul = np.array([[self.mul(a, b) for b in idx] for a in idx])
        return add.astype(np.int32), mul.astype(np.int32)


def parse_ring(spec) -> Ring:
    """Build a ring from ``{"mod": n}``, ``{"product": [..]}`` or a short string.

    Accepted strings: ``"mod6"``, ``"6"``, ``"Z/6"``, ``"2x3"``, ``"prod2x3"``.
    """
    if isinstance(spec, Ring):
        return spec
    if isinstance(spec, int):
        return Ring.modular(spec)
    if isinstance(spec, dict):
        if "ring" in spec:
            return parse_ring(spec["ring"])
        if set(spec) == {"mod"}:
            return Ring.modular(_as_int(spec["mod"]))
        if set(spec) == {"product"}:
            factors = spec["product"]
            if not isinstance(factors, list) or not factors:
                raise RingError("product needs a nonempty list of moduli")
            return Ring.product(_as_int(f["mod"] if isinstance(f, dict) else f) for f in factors)
        raise RingError(f"unrecognised ring spec keys {sorted(spec)}")
    if isinstance(spec, str) and spec.lstrip().startswith("{"):
        try:
            return parse_ring(json.loads(spec))
        except json.JSONDecodeError:
            raise RingError(f"cannot parse ring {spec!r}") from None
    if isinstance(spec, str):
        s = spec.strip().lower().replace(" ", "")
        for prefix in ("mod", "z/", "prod", "product:"):
            if s.startswith(prefix):
                s = s[len(prefix):]
        parts = s.replace(",", "x").split("x")
        try:
            moduli = [int(x) for x in parts]
        except ValueError:
            raise RingError(f"cannot parse ring {spec!r}") from None
        return Ring(moduli)
    raise RingError(f"cannot parse ring {spec!r}")


def _as_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise RingError(f"expected an integer modulus, got {x!r}")
    return x


def is_indecomposable(r: Ring) -> bool:
    return r.is_indecomposable()


def is_reduced(r: Ring) -> bool:
    return r.is_reduced()


def units(r: Ring) -> dict[int, int]:
    """Units of ``r`` mapped to their inverses."""
    return dict(r._inverse)


# -- Laurent polynomials over Z/p^k -----------------------------------------

@dataclass(frozen=True)
class LaurentPoly:
    """An element of ``R[x, 1/x]`` as a sparse exponent -> coefficient map."""

    ring: Ring
    coeffs: tuple[tuple[int, int], ...] = field(default=())

    @classmethod
    def from_dict(cls, ring: Ring, coeffs: dict[int, int]) -> "LaurentPoly":
        items = []
        for e, c in coeffs.items():
            c = ring.from_int(c)
            if c == 0:
                continue
            if not LAURENT_MIN_EXP <= e <= LAURENT_MAX_EXP:
                raise RingError(f"exponent {e} outside [{LAURENT_MIN_EXP}, {LAURENT_MAX_EXP}]")
            items.append((e, c))
        return cls(ring, tuple(sorted(items)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        r = self.ring
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                out[e1 + e2] = r.add(out.get(e1 + e2, 0), r.mul(c1, c2))
        return LaurentPoly.from_dict(r, out)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = self.as_dict()
        for e, c in other.coeffs:
            out[e] = self.ring.add(out.get(e, 0), c)
        return LaurentPoly.from_dict(self.ring, out)

    def scale(self, c: int, shift: int = 0) -> "LaurentPoly":
        return LaurentPoly.from_dict(
            self.ring, {e + shift: self.ring.mul(c, a) for e, a in self.coeffs}
        )

    def is_one(self) -> bool:
        return self.coeffs == ((0, self.ring.one),)

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*x^{e}" if e else str(c) for e, c in self.coeffs)


def laurent_unit_inverse(u: LaurentPoly) -> LaurentPoly | None:
    """Inverse of ``u`` in ``Z/p^k [x, 1/x]``, or ``None`` if ``u`` is not a unit.

    Modulo the nilradical ``(p)`` a unit must be a monomial ``c x^m``; then
    ``u = c x^m (1 + v)`` with ``v`` nilpotent and the inverse is the finite
    geometric series in ``-v``.
    """
    r = u.ring
    if not r.is_modular or len(factorize(r.size)) != 1:
        raise RingError(f"Laurent units need a prime-power modulus, got {r!r}")
    ((p, k),) = factorize(r.size)
    top = [(e, c) for e, c in u.coeffs if c % p]
    if len(top) != 1:
        return None
    m, c = top[0]
    cinv = r.inverse(c)
    # v = c^-1 x^-m u - 1, every coefficient divisible by p
    w = u.scale(cinv, -m)
    v = w + LaurentPoly.from_dict(r, {0: r.neg(r.one)})
    minus_v = v.scale(r.neg(r.one))
    term = LaurentPoly.from_dict(r, {0: r.one})
    series = term
    for _ in range(1, k):
        term = term * minus_v
        series = series + term
    inv = series.scale(cinv, -m)
    assert (u * inv).is_one()
    return inv
