"""A formal category of commutative algebraic groups built from simple factors.

Objects are products of Ga, Gm, S (the real circle torus) and elliptic
curves E(tau), where an elliptic factor may carry one extension wrapper
(ExtGa with parameter t != 0, or ExtGm with a non-torsion point omega).
Only ranks and splitting types are computed; there are no coordinate rings.

Literal syntax: "E(tau=i) x Gm x ExtGa(E(tau=i),t=1) x ExtGm(E(tau=i),omega=sqrt2) x Gm^2"
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linalg
from .arith import ExactComplex
from .descent import (conjugate_tau, hom_module, normalize_tau, weil_restriction_profile)
from .errors import DomainError, ParseError
from .textformat import exact_to_json, parse_exact

FACTOR_KINDS = ("Ga", "Gm", "S", "E")


def _fmt_exact(z: ExactComplex) -> str:
    return str(z).replace(" ", "").replace("(1)*i", "i")


@dataclass(frozen=True)
class SimpleFactor:
    kind: str
    tau: ExactComplex | None = None

    def __post_init__(self):
        if self.kind not in FACTOR_KINDS:
            raise DomainError(f"unknown simple factor {self.kind!r}")
        if self.kind == "E":
            if self.tau is None:
                raise DomainError("an elliptic factor needs tau")
            object.__setattr__(self, "tau", normalize_tau(self.tau))
        elif self.tau is not None:
            raise DomainError(f"{self.kind} takes no parameter")

    @property
    def is_linear(self) -> bool:
        return self.kind != "E"

    def __str__(self):
        return f"E(tau={_fmt_exact(self.tau)})" if self.kind == "E" else self.kind


@dataclass(frozen=True)
class ExtensionWrapper:
    kind: str  # "Ga" or "Gm": the fiber
    base: int  # index of the elliptic factor
    param: ExactComplex  # t for Ga, omega for Gm

    def __post_init__(self):
        if self.kind not in ("Ga", "Gm"):
            raise DomainError(f"unknown extension kind {self.kind!r}")
        object.__setattr__(self, "param", ExactComplex.coerce(self.param))


def is_torsion_point(omega: ExactComplex, tau: ExactComplex) -> bool:
    """omega in Q + Q tau, i.e. torsion on C/(Z + tau Z)."""
    cols = ExactComplex.unify(ExactComplex(1), tau, omega)
    deg = cols[0].field.degree
    rows = [[z.re.coords[k] for z in cols] for k in range(deg)]
    rows += [[z.im.coords[k] for z in cols] for k in range(deg)]
    return any(v[2] != 0 for v in linalg.nullspace(rows, 3))


@dataclass(frozen=True)
class GroupObject:
    factors: tuple = ()
    extensions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        exts = tuple(sorted(self.extensions, key=lambda w: w.base))
        object.__setattr__(self, "extensions", exts)
        seen = set()
        for w in exts:
            if not 0 <= w.base < len(self.factors) or self.factors[w.base].kind != "E":
                raise DomainError("extension wrappers must reference elliptic factors")
            if w.base in seen:
                raise DomainError("at most one extension wrapper per elliptic factor")
            seen.add(w.base)
            if w.kind == "Ga" and w.param.is_zero():
                raise DomainError("ExtGa with t = 0 is the split product; write E x Ga instead")
            if w.kind == "Gm" and is_torsion_point(w.param, self.factors[w.base].tau):
                raise DomainError("ExtGm with a torsion point is isotrivial; not allowed")

    def wrapper(self, i: int) -> ExtensionWrapper | None:
        return next((w for w in self.extensions if w.base == i), None)

    def components(self) -> list[tuple[SimpleFactor, ExtensionWrapper | None]]:
        return [(f, self.wrapper(i)) for i, f in enumerate(self.factors)]

    def __mul__(self, other: "GroupObject") -> "GroupObject":
        k = len(self.factors)
        shifted = tuple(ExtensionWrapper(w.kind, w.base + k, w.param) for w in other.extensions)
        return GroupObject(self.factors + other.factors, self.extensions + shifted)

    @property
    def dimension(self) -> int:
        return len(self.factors) + len(self.extensions)

    def __str__(self):
        if not self.factors:
            return "1"
        parts = []
        for f, w in self.components():
            if w is None:
                parts.append(str(f))
            else:
                key = "t" if w.kind == "Ga" else "omega"
                parts.append(f"Ext{w.kind}({f},{key}={_fmt_exact(w.param)})")
        return " x ".join(parts)


def from_components(comps: Iterable[tuple[SimpleFactor, ExtensionWrapper | None]]) -> GroupObject:
    factors, exts = [], []
    for i, (f, w) in enumerate(comps):
        factors.append(f)
        if w is not None:
            exts.append(ExtensionWrapper(w.kind, i, w.param))
    return GroupObject(tuple(factors), tuple(exts))


# literal parsing


def _split_top(text: str, seps: str) -> list[str]:
    out, depth, cur = [], 0, ""
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in seps:
            out.append(cur)
            cur = ""
        else:
            cur += ch
        i += 1
    out.append(cur)
    return [s.strip() for s in out]


_ELL = re.compile(r"^E\s*\(\s*tau\s*=\s*(.+)\)$", re.S)
_EXT = re.compile(r"^Ext(Ga|Gm)\s*\((.*)\)$", re.S)


def _parse_elliptic(text: str) -> SimpleFactor:
    m = _ELL.match(text.strip())
    if not m:
        raise ParseError(f"expected E(tau=...), got {text!r}")
    return SimpleFactor("E", parse_exact(m.group(1)))


def _parse_component(text: str) -> list[tuple[SimpleFactor, ExtensionWrapper | None]]:
    text = text.strip()
    power = 1
    m = re.match(r"^(.*?)\s*\^\s*(\d+)$", text, re.S)
    if m and m.group(1).count("(") == m.group(1).count(")"):
        text, power = m.group(1).strip(), int(m.group(2))
    if text in ("Ga", "Gm", "S"):
        return [(SimpleFactor(text), None)] * power
    if text.startswith("E("):
        return [(_parse_elliptic(text), None)] * power
    m = _EXT.match(text)
    if m:
        kind = m.group(1)
        args = _split_top(m.group(2), ",")
        if len(args) != 2:
            raise ParseError(f"Ext{kind} takes (E(tau=...), {'t' if kind == 'Ga' else 'omega'}=...)")
        base = _parse_elliptic(args[0])
        key, _, val = args[1].partition("=")
        expected = "t" if kind == "Ga" else "omega"
        if key.strip() != expected:
            raise ParseError(f"Ext{kind} parameter must be {expected}=...")
        return [(base, ExtensionWrapper(kind, 0, parse_exact(val)))] * power
    raise ParseError(f"unknown factor {text!r}")


def parse_object(text: str) -> GroupObject:
    """Parse the literal syntax, e.g. "E(tau=i) x Gm x ExtGa(E(tau=i),t=1)"; "1" is the trivial group."""
    text = text.replace("×", " x ").strip()
    if not text:
        raise ParseError("empty object")
    if text == "1":
        return GroupObject()
    pieces = re.split(r"\s+x\s+", text) if "(" not in text else _split_x(text)
    comps = []
    for p in pieces:
        if not p:
            raise ParseError(f"empty factor in {text!r}")
        comps.extend(_parse_component(p))
    return from_components(comps)


def _split_x(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch == "x" and (i == 0 or text[i - 1].isspace()) and \
                (i + 1 == len(text) or text[i + 1].isspace()):
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
        i += 1
    out.append(cur.strip())
    return out


# operations


def conj_factor(f: SimpleFactor) -> SimpleFactor:
    if f.kind == "E":
        return SimpleFactor("E", conjugate_tau(f.tau))
    return f


def conj_object(G: GroupObject) -> GroupObject:
    comps = []
    for f, w in G.components():
        cw = None if w is None else ExtensionWrapper(w.kind, 0, w.param.conjugate())
        comps.append((conj_factor(f), cw))
    return from_components(comps)


def delta_invariant(G: GroupObject) -> int:
    """Number of simple factors of the maximal plurisimple quotient."""
    return len(max_plurisimple_quotient(G).factors)


def max_plurisimple_quotient(G: GroupObject) -> GroupObject:
    """Drop every extension fiber: an extension maps universally onto its base curve."""
    return GroupObject(G.factors, ())


@dataclass(frozen=True)
class HomRank:
    rank: int
    note: str  # "Zero" | "Scalars" | "CMOrder" | "Characters"

    def __post_init__(self):
        if (self.rank == 0) != (self.note == "Zero"):
            raise ValueError("rank 0 exactly when note is Zero")


ZERO = HomRank(0, "Zero")


def hom_rank(A: SimpleFactor, B: SimpleFactor) -> HomRank:
    """Rank of Hom(A, B) over the algebraically closed field.

    Ga -> Ga is the scalars (rank 1 as a vector space); tori have rank-1
    character groups (S complexifies to Gm); curves use the isogeny module.
    """
    if A.kind == "Ga" or B.kind == "Ga":
        return HomRank(1, "Scalars") if A.kind == B.kind else ZERO
    if A.is_linear and B.is_linear:
        return HomRank(1, "Characters")
    if A.is_linear != B.is_linear:
        return ZERO
    H = hom_module(A.tau, B.tau)
    if H.rank == 0:
        return ZERO
    return HomRank(H.rank, "CMOrder" if H.rank == 2 else "Scalars")


def component_hom_rank(src, dst) -> int:
    """Hom rank between components (factor, wrapper-or-None)."""
    (fa, wa), (fb, wb) = src, dst
    if wa is None and wb is None:
        return hom_rank(fa, fb).rank
    if wa is not None:
        # an extension is anti-affine: no maps to linear groups; maps to curves factor through the base
        if wb is None:
            return 0 if fb.is_linear else hom_rank(fa, fb).rank
        # extension to extension: at most the maps between the bases
        return hom_rank(fa, fb).rank if wa.kind == wb.kind else 0
    # bare source into an extension
    if fa.is_linear:
        # lands in the linear fiber
        return hom_rank(fa, SimpleFactor(wb.kind)).rank
    # a curve does not lift through a non-split extension
    return 0


def inherited_hypothesis_check(G: GroupObject, kernel_factors: Sequence[int]) -> str:
    """'StrongOK' if Hom(ker, U^h) = 0; 'WeakOK' if Hom(U^h, M) = 0 for all
    quotients M of ker; otherwise 'Fails'.  U = G / ker."""
    kernel = sorted(set(kernel_factors))
    if not kernel:
        raise DomainError("empty kernel")
    comps = G.components()
    for k in kernel:
        if not 0 <= k < len(comps):
            raise DomainError(f"kernel index {k} out of range")
        if comps[k][1] is not None:
            raise DomainError("kernel must be a sub-product of bare simple factors")
    ker = [comps[k] for k in kernel]
    U = from_components(c for i, c in enumerate(comps) if i not in kernel)
    Uh = conj_object(U).components()
    if all(component_hom_rank(k, u) == 0 for k in ker for u in Uh):
        return "StrongOK"
    # quotients of a product of simple groups are (up to isogeny) sub-products
    if all(component_hom_rank(u, k) == 0 for k in ker for u in Uh):
        return "WeakOK"
    return "Fails"


@dataclass(frozen=True)
class WeilReport:
    profiles: tuple
    structure: str
    simple: bool

    def to_json(self):
        return {"structure": self.structure, "simple": self.simple,
                "factors": [p.to_json() for p in self.profiles]}


def weil_restrict_object(G: GroupObject) -> WeilReport:
    """Restriction of scalars C -> R, factor by factor (it commutes with products)."""
    profiles = []
    for f, w in G.components():
        p = weil_restriction_profile(f)
        if w is not None:
            fiber = weil_restriction_profile(SimpleFactor(w.kind))
            p = type(p)(f"Ext{w.kind}({p.factor})", False,
                        f"extension of {_wrap(p.structure)} by {_wrap(fiber.structure)}",
                        p.endomorphisms)
        profiles.append(p)
    if len(profiles) == 1:
        structure = profiles[0].structure
    else:
        structure = " x ".join(_wrap(p.structure) for p in profiles)
    simple = len(profiles) == 1 and profiles[0].simple
    return WeilReport(tuple(profiles), structure, simple)


def _wrap(s: str) -> str:
    return f"({s})" if " x " in s or " by " in s else s
