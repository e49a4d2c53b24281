"""Binary extension fields GF(2^k0) with a trace-orthonormal (self-dual) basis.

Field elements are plain ints: the bits of the value are the coefficients of
the polynomial representation (bit i = coefficient of x^i).  Addition is XOR;
multiplication is carry-less multiplication reduced modulo a fixed irreducible
polynomial.  Each :class:`FieldCtx` also carries a basis nu_1..nu_k0 that is
*self-dual* for the trace form, i.e. Tr(nu_i * nu_j) = 1 iff i == j.  Writing
elements in that basis makes the trace form the plain GF(2) dot product:

    Tr(a * b) == parity(coords(a) & coords(b))

which is the identification this whole package relies on when it moves
between GF(2^k0) symbols and k0-bit vectors.
"""

from __future__ import annotations

from typing import List, Tuple

# Lexicographically smallest irreducible polynomial per degree (bitmask with
# bit k0 set).  Hard-coded so every run and every machine builds the same
# field; tests regenerate the table from scratch and compare.
SMALLEST_IRREDUCIBLE = {
    1: 0x2,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
}

MAX_DEGREE = 16


def _poly_rem(f: int, d: int) -> int:
    """Remainder of polynomial f modulo nonzero polynomial d, over GF(2)."""
    dd = d.bit_length() - 1
    while f and f.bit_length() - 1 >= dd:
        f ^= d << (f.bit_length() - 1 - dd)
    return f


def is_irreducible(poly: int) -> bool:
    """Irreducibility over GF(2) by trial division up to half the degree."""
    deg = poly.bit_length() - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    for d in range(2, 1 << (deg // 2 + 1)):
        if _poly_rem(poly, d) == 0:
            return False
    return True


class FieldCtx:
    """A concrete GF(2^k0): modulus, trace, and a verified self-dual basis.

    Immutable after construction; all operations are pure, so a context can
    be shared freely across threads.
    """

    def __init__(self, k0: int, modulus: int | None = None) -> None:
        if not 1 <= k0 <= MAX_DEGREE:
            raise ValueError(f"extension degree k0={k0} out of range [1, {MAX_DEGREE}]")
        if modulus is None:
            modulus = SMALLEST_IRREDUCIBLE[k0]
        if modulus.bit_length() - 1 != k0:
            raise ValueError(f"modulus {modulus:#x} does not have degree {k0}")
        if not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.k0 = k0
        self.q = 1 << k0
        self.modulus = modulus
        # Trace is GF(2)-linear, so Tr(x) = parity(x & mask) where bit j of
        # mask is Tr(x^j).  This is the precomputed trace table, stored as a
        # k0-bit linear functional instead of 2^k0 individual bits.
        self._trace_mask = 0
        for j in range(k0):
            if self._trace_by_definition(1 << j):
                self._trace_mask |= 1 << j
        self.basis = self._build_self_dual_basis()
        self._verify_basis()
        # coords(x) for all q elements; x -> coords(x) is GF(2)-linear, so the
        # table is filled from the k0 single-bit images in O(q).
        bit_coords = []
        for j in range(k0):
            bits = 0
            for i, nu in enumerate(self.basis):
                if self.trace(self.mul(1 << j, nu)):
                    bits |= 1 << i
            bit_coords.append(bits)
        self._coords_table: List[int] = [0] * self.q
        self._element_table: List[int] = [0] * self.q
        for x in range(1, self.q):
            lsb = x & -x
            self._coords_table[x] = (
                self._coords_table[x ^ lsb] ^ bit_coords[lsb.bit_length() - 1]
            )
        for x in range(self.q):
            self._element_table[self._coords_table[x]] = x

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        """Carry-less multiply reduced mod the field modulus."""
        r = 0
        top = 1 << self.k0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= self.modulus
        return r

    def pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.q - 2)

    # -- trace and identification -------------------------------------------

    def _trace_by_definition(self, x: int) -> int:
        """Tr(x) = x + x^2 + ... + x^(2^(k0-1)), evaluated literally."""
        acc = 0
        t = x
        for _ in range(self.k0):
            acc ^= t
            t = self.mul(t, t)
        if acc not in (0, 1):  # the defining sum always lands in GF(2)
            raise AssertionError(f"trace of {x:#x} escaped the prime field: {acc:#x}")
        return acc

    def trace(self, x: int) -> int:
        """Tr(x) in {0, 1}."""
        return (x & self._trace_mask).bit_count() & 1

    def coords(self, x: int) -> int:
        """Coordinates of x in the self-dual basis, packed LSB-first.

        Bit i of the result is the coefficient of nu_(i+1).  Because the basis
        is self-dual, bit i equals Tr(x * nu_(i+1)).
        """
        if not 0 <= x < self.q:
            raise ValueError(f"element {x} out of range for GF(2^{self.k0})")
        return self._coords_table[x]

    def from_coords(self, bits: int) -> int:
        """Inverse of :meth:`coords`: rebuild the element from basis coordinates."""
        if not 0 <= bits < self.q:
            raise ValueError(f"coordinate vector {bits} is not {self.k0} bits")
        return self._element_table[bits]

    def coords_tuple(self, x: int) -> Tuple[int, ...]:
        bits = self.coords(x)
        return tuple((bits >> i) & 1 for i in range(self.k0))

    # -- self-dual basis construction ----------------------------------------

    def _b(self, x: int, y: int) -> int:
        """The trace bilinear form B(x, y) = Tr(x * y)."""
        return self.trace(self.mul(x, y))

    def _build_self_dual_basis(self) -> List[int]:
        """Orthonormalize the trace form, starting from the polynomial basis.

        Gram-Schmidt over GF(2): repeatedly pick a vector v with B(v, v) = 1
        (equivalently Tr(v) = 1, since B(v, v) = Tr(v^2) = Tr(v)), then
        project it out of the rest.  When the remaining space is alternating
        (every B(v, v) = 0) it splits off a hyperbolic pair (u, w); together
        with the previously chosen e, the triple {e+u, e+w, e+u+w} is
        orthonormal and spans the same space, which un-sticks the recursion.
        The trace form is non-alternating on the full field (Tr is onto), so
        the very first step always finds a diagonal vector.
        """
        remaining = [1 << j for j in range(self.k0)]
        chosen: List[int] = []
        while remaining:
            pivot = next((v for v in remaining if self._b(v, v) == 1), None)
            if pivot is not None:
                remaining.remove(pivot)
                rest = [w ^ (pivot if self._b(w, pivot) else 0) for w in remaining]
                chosen.append(pivot)
                remaining = _independent_subset(rest)
                continue
            # Alternating complement: find a hyperbolic pair.
            pair = None
            for i in range(len(remaining)):
                for j in range(i + 1, len(remaining)):
                    if self._b(remaining[i], remaining[j]) == 1:
                        pair = (remaining[i], remaining[j])
                        break
                if pair:
                    break
            if pair is None or not chosen:
                raise AssertionError("trace form degenerated; modulus not irreducible?")
            u, w = pair
            remaining = [v for v in remaining if v not in (u, w)]
            remaining = [
                v ^ (u if self._b(v, w) else 0) ^ (w if self._b(v, u) else 0)
                for v in remaining
            ]
            remaining = _independent_subset(remaining)
            e = chosen.pop()
            chosen.extend([e ^ u, e ^ w, e ^ u ^ w])
        return chosen

    def _verify_basis(self) -> None:
        k0 = self.k0
        if len(self.basis) != k0:
            raise AssertionError("self-dual basis has wrong size")
        for i in range(k0):
            for j in range(k0):
                want = 1 if i == j else 0
                if self._b(self.basis[i], self.basis[j]) != want:
                    raise AssertionError("constructed basis is not self-dual")

    # -- misc -----------------------------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def descriptor(self) -> dict:
        """Serializable field descriptor embedded in code files and reports."""
        return {
            "k0": self.k0,
            "modulus": f"{self.modulus:#x}",
            "basis": [f"{nu:#x}" for nu in self.basis],
        }

    def __repr__(self) -> str:
        return f"FieldCtx(k0={self.k0}, modulus={self.modulus:#x})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldCtx)
            and other.k0 == self.k0
            and other.modulus == self.modulus
        )

    def __hash__(self) -> int:
        return hash((self.k0, self.modulus))


def _independent_subset(vectors: List[int]) -> List[int]:
    """Reduce a spanning list to a linearly independent one over GF(2)."""
    pivots: List[int] = []  # row-echelon residues, distinct leading bits
    out: List[int] = []
    for v in vectors:
        r = v
        changed = True
        while changed and r:
            changed = False
            for b in pivots:
                if b.bit_length() == r.bit_length():
                    r ^= b
                    changed = True
                    break
        if r:
            pivots.append(r)
            out.append(v)
    return out


def find_self_dual_basis(ctx: FieldCtx) -> List[int]:
    """The self-dual basis for ctx: deterministic given the modulus.

    Contexts verify their basis at construction, so this is just the stored
    result; rebuilding from the modulus gives the same vectors.
    """
    return list(ctx.basis)


def make_field(k0: int) -> FieldCtx:
    """Build GF(2^k0) with the table modulus and a verified self-dual basis."""
    return FieldCtx(k0)
