"""Finite groups as Cayley tables.

Permutation groups multiply as maps, ``(s t)(i) = s(t(i))``, and are
labelled in cycle notation, e.g. ``"(123)"``; the identity is ``"e"``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidGroup, TooLarge

DEFAULT_SUBGROUP_BOUND = 64


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    cayley: np.ndarray  # cayley[s, t] = index of s*t
    labels: tuple
    name: str = ""

    def __post_init__(self):
        validate_group(self)

    @property
    def identity(self):
        for s in range(self.order):
            if np.array_equal(self.cayley[s], np.arange(self.order)):
                return s
        raise InvalidGroup("no identity")  # pragma: no cover - validate_group catches it

    @property
    def inverse(self):
        e = self.identity
        return np.array([int(np.where(self.cayley[s] == e)[0][0]) for s in range(self.order)])

    def mul(self, s, t):
        return int(self.cayley[s, t])

    def inv(self, s):
        return int(self.inverse[s])

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not an element of {self.name or 'the group'}") from None

    def conjugate(self, s, g):
        """``g s g^-1``."""
        return self.mul(self.mul(g, s), self.inv(g))

    def generated(self, elements):
        """The subgroup generated by ``elements`` as a sorted tuple of indices."""
        e = self.identity
        found = {e}
        frontier = [e]
        gens = list(elements)
        while frontier:
            nxt = []
            for s in frontier:
                for g in gens:
                    t = self.mul(s, g)
                    if t not in found:
                        found.add(t)
                        nxt.append(t)
            frontier = nxt
        return tuple(sorted(found))

    def is_subgroup(self, H):
        H = set(H)
        if self.identity not in H:
            return False
        return all(self.mul(a, self.inv(b)) in H for a in H for b in H)

    def is_normal(self, H):
        H = set(H)
        return all(self.conjugate(h, g) in H for h in H for g in range(self.order))

    def conjugate_closure(self, H):
        """Smallest normal subgroup containing ``H``."""
        conj = {self.conjugate(h, g) for h in H for g in range(self.order)}
        return self.generated(conj)

    def cosets(self, H):
        """Left cosets ``sH`` in order of first appearance of a representative."""
        H = sorted(H)
        seen, out = set(), []
        for s in range(self.order):
            if s in seen:
                continue
            c = tuple(sorted(self.mul(s, h) for h in H))
            seen.update(c)
            out.append(c)
        return out

    def right_cosets(self, H):
        H = sorted(H)
        seen, out = set(), []
        for s in range(self.order):
            if s in seen:
                continue
            c = tuple(sorted(self.mul(h, s) for h in H))
            seen.update(c)
            out.append(c)
        return out

    def quotient(self, N):
        """``G/N`` for normal ``N`` together with the map ``s -> index of sN``."""
        if not self.is_normal(N):
            raise InvalidGroup("quotient by a non-normal subgroup")
        cosets = self.cosets(N)
        where = np.empty(self.order, dtype=int)
        for k, c in enumerate(cosets):
            where[list(c)] = k
        k = len(cosets)
        table = np.empty((k, k), dtype=int)
        for a, ca in enumerate(cosets):
            for b, cb in enumerate(cosets):
                table[a, b] = where[self.mul(ca[0], cb[0])]
        labels = tuple(f"{self.labels[c[0]]}N" if c[0] != self.identity else "eN" for c in cosets)
        return FiniteGroup(k, table, labels, name=f"{self.name}/N"), where

    def to_dict(self):
        return {"order": self.order, "labels": list(self.labels),
                "cayley": self.cayley.reshape(-1).tolist(), "name": self.name}


def validate_group(G: FiniteGroup):
    n = G.order
    c = np.asarray(G.cayley)
    if c.shape != (n, n):
        raise InvalidGroup(f"Cayley table has shape {c.shape}, expected {(n, n)}")
    if len(G.labels) != n:
        raise InvalidGroup("wrong number of labels")
    full = np.arange(n)
    for row in c:
        if not np.array_equal(np.sort(row), full):
            raise InvalidGroup("Cayley table is not a Latin square")
    for col in c.T:
        if not np.array_equal(np.sort(col), full):
            raise InvalidGroup("Cayley table is not a Latin square")
    # (st)u = s(tu)
    lhs = c[c[:, :, None], np.arange(n)[None, None, :]]
    rhs = c[np.arange(n)[:, None, None], c[None, :, :]]
    if not np.array_equal(lhs, rhs):
        raise InvalidGroup("multiplication is not associative")
    ids = [s for s in range(n) if np.array_equal(c[s], full) and np.array_equal(c[:, s], full)]
    if not ids:
        raise InvalidGroup("no two-sided identity")


def from_dict(data) -> FiniteGroup:
    n = int(data["order"])
    cayley = np.asarray(data["cayley"], dtype=int).reshape(n, n)
    labels = tuple(data.get("labels") or [str(i) for i in range(n)])
    return FiniteGroup(n, cayley, labels, name=data.get("name", ""))


# ---------------------------------------------------------------------------
# named constructors


def cycle_notation(perm):
    """``(0,2,1)`` -> ``"(23)"`` (points are printed 1-based)."""
    n = len(perm)
    seen = set()
    cycles = []
    for i in range(n):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        cycles.append("(" + "".join(str(k + 1) for k in cyc) + ")")
    return "".join(cycles) or "e"


def permutation_group(perms, name=""):
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=int)
    for i, s in enumerate(perms):
        for j, t in enumerate(perms):
            table[i, j] = index[tuple(s[t[k]] for k in range(len(s)))]
    return FiniteGroup(n, table, tuple(cycle_notation(p) for p in perms), name=name)


def _close_perms(gens):
    deg = len(gens[0])
    e = tuple(range(deg))
    found = [e]
    seen = {e}
    i = 0
    while i < len(found):
        s = found[i]
        for g in gens:
            t = tuple(s[g[k]] for k in range(deg))
            if t not in seen:
                seen.add(t)
                found.append(t)
        i += 1
    return sorted(found, key=lambda p: (p != e, p))


def cyclic(n):
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    labels = tuple("e" if k == 0 else (f"g^{k}" if k > 1 else "g") for k in range(n))
    return FiniteGroup(n, table, labels, name=f"Z/{n}")


def symmetric(n):
    perms = sorted(itertools.permutations(range(n)), key=lambda p: (p != tuple(range(n)), p))
    return permutation_group(perms, name=f"S{n}")


def dihedral4():
    """Symmetries of a square with vertices 0..3: rotation (1234), reflection (13)."""
    return permutation_group(_close_perms([(1, 2, 3, 0), (2, 1, 0, 3)]), name="D4")


def quaternion():
    """``{±1, ±i, ±j, ±k}`` with Hamilton's rules."""
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    basic = {("1", x): (1, x) for x in "1ijk"}
    basic.update({(x, "1"): (1, x) for x in "1ijk"})
    basic.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                  ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                  ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})

    def parse(name):
        return (-1, name[1:]) if name.startswith("-") else (1, name)

    def fmt(sign, u):
        return u if sign == 1 else "-" + u

    table = np.empty((8, 8), dtype=int)
    for a, x in enumerate(names):
        for b, y in enumerate(names):
            sx, ux = parse(x)
            sy, uy = parse(y)
            s, u = basic[(ux, uy)]
            table[a, b] = names.index(fmt(sx * sy * s, u))
    labels = tuple("e" if x == "1" else x for x in names)
    return FiniteGroup(8, table, labels, name="Q8")


def klein():
    table = np.array([[a ^ b for b in range(4)] for a in range(4)])
    return FiniteGroup(4, table, ("e", "a", "b", "ab"), name="V4")


def named_group(name: str) -> FiniteGroup:
    """``"Z/8"``, ``"S3"``, ``"S4"``, ``"D4"``, ``"Q8"``, ``"V4"``."""
    key = name.strip().upper().replace("Z_", "Z/").replace("ZMOD", "Z/")
    if key.startswith("Z/") or (key.startswith("Z") and key[1:].isdigit()):
        return cyclic(int(key.split("/")[-1] if "/" in key else key[1:]))
    if key.startswith("S") and key[1:].isdigit():
        return symmetric(int(key[1:]))
    if key == "D4" or key == "D8":
        return dihedral4()
    if key == "Q8":
        return quaternion()
    if key in ("V4", "K4"):
        return klein()
    raise InvalidGroup(f"unknown group name {name!r}")


# ---------------------------------------------------------------------------
# subgroups


def enumerate_subgroups(G: FiniteGroup, bound=DEFAULT_SUBGROUP_BOUND):
    """All subgroups, each a sorted tuple of element indices.

    Every subgroup is the join of its cyclic subgroups, so repeatedly
    joining known subgroups with cyclic ones reaches all of them.
    """
    if G.order > bound:
        raise TooLarge(f"group of order {G.order} exceeds the enumeration bound {bound}")
    cyclics = sorted({G.generated([s]) for s in range(G.order)})
    found = set(cyclics)
    frontier = list(cyclics)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclics:
                if set(C) <= set(H):
                    continue
                J = G.generated(set(H) | set(C))
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=lambda H: (len(H), H))


def subgroup_labels(G, H):
    return [G.labels[h] for h in H]


def product_set(G, A, B):
    return {G.mul(a, b) for a in A for b in B}


def as_group(G: FiniteGroup, H, name="") -> FiniteGroup:
    """The subgroup ``H`` (sorted indices) as a group in its own right, labels kept."""
    H = tuple(sorted(H))
    if not G.is_subgroup(H):
        raise InvalidGroup(f"{[G.labels[h] for h in H]} is not a subgroup")
    pos = {h: i for i, h in enumerate(H)}
    table = np.array([[pos[G.mul(a, b)] for b in H] for a in H])
    return FiniteGroup(len(H), table, tuple(G.labels[h] for h in H), name=name or "H")
