"""Absolute algebraic number fields with a fixed complex embedding.

A field is stored as ``Q[t]/(m(t))`` for a monic irreducible ``m`` together
with an isolating enclosure of the complex root that ``t`` stands for.  Fields
created by adjoining a root to an existing field remember the image of the old
generator, so elements can be pushed up a tower of extensions.

All arithmetic is exact (python-flint ``fmpq_poly`` modulo the minimal
polynomial); the embedding is only used for display and for choosing roots.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import flint

__all__ = [
    "NumberField",
    "NFElem",
    "QQ",
    "upoly_trim",
    "upoly_divmod",
    "upoly_gcd",
    "upoly_deriv",
    "upoly_mul",
    "upoly_eval",
    "upoly_monic",
    "upoly_squarefree",
]

_X = flint.fmpq_poly([0, 1])


def _acb_eval(poly: flint.fmpq_poly, z: flint.acb) -> flint.acb:
    acc = flint.acb(0)
    for c in reversed(poly.coeffs()):
        acc = acc * z + flint.acb(flint.arb(c))
    return acc


class _Prec:
    """Context manager temporarily raising the flint working precision."""

    def __init__(self, bits: int):
        self.bits = bits

    def __enter__(self):
        self.old = flint.ctx.prec
        flint.ctx.prec = max(self.bits, 53)

    def __exit__(self, *exc):
        flint.ctx.prec = self.old


class NumberField:
    """The field ``Q(t)`` with ``m(t) = 0`` and ``t`` embedded near ``root``."""

    _counter = 0

    def __init__(
        self,
        minpoly: flint.fmpq_poly,
        root: Optional[flint.acb] = None,
        parent: Optional["NumberField"] = None,
        parent_image: Optional[flint.fmpq_poly] = None,
        name: Optional[str] = None,
    ):
        minpoly = flint.fmpq_poly(minpoly)
        lc = minpoly.coeffs()[-1]
        self.minpoly = minpoly / lc
        self.degree = self.minpoly.degree()
        self.parent = parent
        self.parent_image = parent_image
        NumberField._counter += 1
        self.uid = NumberField._counter
        self.name = name or f"t{self.uid}"
        if self.degree == 1:
            self._root = flint.acb(flint.arb(-self.minpoly.coeffs()[0]))
            self._root_prec = 10**9
        else:
            if root is None:
                raise ValueError("an embedding root is required for a nontrivial field")
            self._root = root
            self._root_prec = 0
            self._isolate(64)
        self._one = None

    # -- embedding -------------------------------------------------------
    def _isolate(self, prec: int) -> None:
        """Refine the stored root enclosure to at least ``prec`` bits."""
        while True:
            with _Prec(prec + 16):
                roots = [r for r, _ in self.minpoly.complex_roots()]
            hits = [r for r in roots if r.overlaps(self._root)]
            if len(hits) == 1:
                self._root = hits[0]
                self._root_prec = prec
                return
            if len(hits) == 0:
                raise ArithmeticError("embedding root lost while refining")
            prec *= 2
            if prec > 1 << 16:
                raise ArithmeticError("cannot isolate embedding root")

    def root(self, prec: int = 128) -> flint.acb:
        if self.degree > 1 and self._root_prec < prec:
            self._isolate(prec)
        return self._root

    # -- elements ----------------------------------------------------------
    def __call__(self, value) -> "NFElem":
        if isinstance(value, NFElem):
            if value.field is self:
                return value
            return value.lift(self)
        if isinstance(value, flint.fmpq_poly):
            return NFElem(self, value % self.minpoly)
        if isinstance(value, Fraction):
            value = flint.fmpq(value.numerator, value.denominator)
        return NFElem(self, flint.fmpq_poly([value]))

    def zero(self) -> "NFElem":
        return NFElem(self, flint.fmpq_poly([]))

    def one(self) -> "NFElem":
        if self._one is None:
            self._one = NFElem(self, flint.fmpq_poly([1]))
        return self._one

    def gen(self) -> "NFElem":
        return NFElem(self, _X % self.minpoly)

    # -- tower bookkeeping -------------------------------------------------
    def ancestors(self) -> List["NumberField"]:
        out, f = [], self
        while f is not None:
            out.append(f)
            f = f.parent
        return out

    def is_extension_of(self, other: "NumberField") -> bool:
        return any(f is other for f in self.ancestors())

    def __repr__(self) -> str:
        if self.degree == 1:
            return "QQ"
        return f"NumberField({self.minpoly}, deg={self.degree})"

    # -- adjoining roots ---------------------------------------------------
    def adjoin(
        self,
        h: Sequence["NFElem"],
        near: Optional[complex] = None,
        pick: Optional[Callable[[List[flint.acb]], int]] = None,
    ) -> Tuple["NumberField", "NFElem"]:
        """Adjoin a root of the irreducible polynomial ``h`` (coefficients low to high).

        Returns the new field ``L`` and the root inside ``L``.  The root is the
        one whose complex value overlaps ``near`` when given; otherwise the
        first candidate in a fixed (real, imag) ordering.
        """
        h = upoly_monic(upoly_trim([self(c) for c in h]))
        d = len(h) - 1
        if d < 1:
            raise ValueError("cannot adjoin a root of a constant")
        if d == 1:
            return self, -h[0]
        n = self.degree
        for k in _shift_sequence():
            N, powers = _norm_of_shift(self, h, k)
            if N.gcd(N.derivative()).degree() == 0:
                break
        D = n * d
        # theta = sum c_j w^j, solve with the matrix of powers of w
        M = flint.fmpq_mat(D, D)
        for j in range(D):
            vec = powers[j]
            for r in range(D):
                M[r, j] = vec[r]
        e_theta = flint.fmpq_mat(D, 1)
        if n > 1:
            e_theta[1, 0] = 1  # coordinate of theta * z^0
            sol = M.solve(e_theta)
            theta_img = flint.fmpq_poly([sol[j, 0] for j in range(D)])
        else:
            theta_img = flint.fmpq_poly([-self.minpoly.coeffs()[0]])
        z_img = _X - k * theta_img
        # choose a complex root of N compatible with the embedding of self
        prec = 64
        while True:
            with _Prec(prec + 16):
                roots = [r for r, _ in N.complex_roots()]
                theta_here = self.root(prec)
                good = []
                for r in roots:
                    tv = _acb_eval(theta_img, r)
                    if tv.overlaps(theta_here):
                        good.append((r, _acb_eval(z_img, r)))
            cand = good
            if near is not None and good:
                def dist(g):
                    return abs(complex(float(g[1].real.mid()), float(g[1].imag.mid())) - complex(near))
                good_sorted = sorted(good, key=dist)
                cand = good_sorted[:1]
                if len(good_sorted) > 1 and dist(good_sorted[1]) < 2 * dist(good_sorted[0]) + 1e-9:
                    cand = []
            if len(good) == d and cand:
                break
            prec *= 2
            if prec > 1 << 14:
                raise ArithmeticError("could not select an embedding for the adjoined root")
        cand.sort(key=lambda g: (float(g[1].real.mid()), float(g[1].imag.mid())))
        idx = pick([g[1] for g in cand]) if pick is not None else 0
        L = NumberField(N, root=cand[idx][0], parent=self, parent_image=theta_img)
        return L, NFElem(L, z_img % L.minpoly)

    def root_values(self, h: Sequence["NFElem"], prec: int = 128) -> List[flint.acb]:
        """Numerical roots of ``h`` under the embedding of this field."""
        with _Prec(prec):
            coeffs = [c.to_acb(prec) for c in h]
            return list(flint.acb_poly(coeffs).roots())


def _shift_sequence():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def _norm_of_shift(F: NumberField, h: List["NFElem"], k: int):
    """Characteristic polynomial over Q of ``w = z + k*theta`` on ``F[z]/(h)``.

    Also returns the coordinate vectors of ``w^0 .. w^(D-1)`` in the basis
    ``theta^a z^b`` (index ``b*n + a``), used to express ``theta`` through ``w``.
    """
    n = F.degree
    d = len(h) - 1
    D = n * d
    theta = F.gen()
    kt = theta * k

    def mul_w(vec: List[NFElem]) -> List[NFElem]:
        # vec represents sum vec[b] z^b; multiply by (z + k theta) mod h
        out = [F.zero()] * (d + 1)
        for b, c in enumerate(vec):
            out[b + 1] = out[b + 1] + c
            out[b] = out[b] + c * kt
        top = out[d]
        if not top.is_zero():
            for b in range(d):
                out[b] = out[b] - top * h[b]
        return out[:d]

    def flat(vec: List[NFElem]) -> List[flint.fmpq]:
        res = []
        for c in vec:
            cs = c.poly.coeffs()
            res.extend([cs[a] if a < len(cs) else flint.fmpq(0) for a in range(n)])
        return res

    cur = [F.one()] + [F.zero()] * (d - 1)
    powers = []
    for _ in range(D):
        powers.append(flat(cur))
        cur = mul_w(cur)
    T = flint.fmpq_mat(D, D)
    for b in range(d):
        for a in range(n):
            basis = [F.zero()] * d
            basis[b] = F(flint.fmpq_poly([0] * a + [1]))
            img = flat(mul_w(basis))
            col = b * n + a
            for r in range(D):
                T[r, col] = img[r]
    N = T.charpoly()
    N = flint.fmpq_poly(N.coeffs())
    return N, powers


class NFElem:
    """Element of a :class:`NumberField`, stored as a reduced polynomial in the generator."""

    __slots__ = ("field", "poly")

    def __init__(self, field: NumberField, poly: flint.fmpq_poly):
        self.field = field
        self.poly = poly

    # -- coercion ------------------------------------------------------------
    def lift(self, target: NumberField) -> "NFElem":
        if target is self.field:
            return self
        chain = []
        f = target
        while f is not None and f is not self.field:
            chain.append(f)
            f = f.parent
        if f is None:
            if self.is_rational():
                return target(self.poly.coeffs()[0] if self.poly.length() else 0)
            raise ValueError("fields are not in a common tower")
        p = self.poly
        for g in reversed(chain):
            p = p(g.parent_image) % g.minpoly if p.degree() > 0 else p
        return NFElem(target, p)

    def _coerce(self, other) -> Tuple["NFElem", "NFElem"]:
        if isinstance(other, NFElem):
            if other.field is self.field:
                return self, other
            if other.field.is_extension_of(self.field):
                return self.lift(other.field), other
            if self.field.is_extension_of(other.field):
                return self, other.lift(self.field)
            if other.is_rational():
                return self, self.field(other.poly.coeffs()[0] if other.poly.length() else 0)
            if self.is_rational():
                return other.field(self.poly.coeffs()[0] if self.poly.length() else 0), other
            raise ValueError("fields are not in a common tower")
        return self, self.field(other)

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce(other)
        return NFElem(a.field, a.poly + b.poly)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return NFElem(a.field, a.poly - b.poly)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return NFElem(a.field, b.poly - a.poly)

    def __neg__(self):
        return NFElem(self.field, -self.poly)

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a.field.degree == 1:
            return NFElem(a.field, a.poly * b.poly)
        return NFElem(a.field, (a.poly * b.poly) % a.field.minpoly)

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in number field")
        if self.field.degree == 1:
            return NFElem(self.field, flint.fmpq_poly([1 / self.poly.coeffs()[0]]))
        g, s, _ = self.poly.xgcd(self.field.minpoly)
        return NFElem(self.field, (s / g.coeffs()[0]) % self.field.minpoly)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        return b * a.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, (NFElem, int, Fraction, flint.fmpq, flint.fmpz)):
            return NotImplemented
        a, b = self._coerce(other)
        return (a.poly - b.poly).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.is_rational():
            return hash(str(self.rational()))
        return hash((self.field.uid, str(self.poly)))

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_rational(self) -> bool:
        return self.poly.degree() <= 0

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        if self.poly.is_zero():
            return Fraction(0)
        c = self.poly.coeffs()[0]
        return Fraction(int(c.p), int(c.q))

    # -- numerics ---------------------------------------------------------------
    def to_acb(self, prec: int = 128) -> flint.acb:
        with _Prec(prec + 10):
            if self.field.degree == 1 or self.poly.degree() <= 0:
                c = self.poly.coeffs()[0] if self.poly.length() else flint.fmpq(0)
                return flint.acb(flint.arb(c))
            return _acb_eval(self.poly, self.field.root(prec + 10))

    def to_complex(self) -> complex:
        z = self.to_acb(64)
        return complex(float(z.real.mid()), float(z.imag.mid()))

    def minpoly(self) -> flint.fmpq_poly:
        """Minimal polynomial over Q (via the characteristic polynomial)."""
        n = self.field.degree
        if n == 1:
            return _X - self.poly.coeffs()[0] if self.poly.length() else _X
        M = flint.fmpq_mat(n, n)
        for j in range(n):
            img = (self.poly * flint.fmpq_poly([0] * j + [1])) % self.field.minpoly
            cs = img.coeffs()
            for r in range(n):
                M[r, j] = cs[r] if r < len(cs) else 0
        cp = flint.fmpq_poly(M.charpoly().coeffs())
        for fac, _ in cp.factor()[1]:
            if _acb_eval(fac, self.to_acb(128)).contains(0):
                return fac / fac.coeffs()[-1]
        return cp

    def __repr__(self):
        if self.is_rational():
            return str(self.rational())
        return f"NFElem({self.poly}, {self.field.name})"

    def __str__(self):
        if self.is_rational():
            return str(self.rational())
        z = self.to_complex()
        return f"({z.real:.12g}{z.imag:+.12g}i)"


QQ = NumberField(flint.fmpq_poly([0, 1]), name="QQ")


# ---------------------------------------------------------------------------
# univariate polynomials over a number field: lists of NFElem, low to high
# ---------------------------------------------------------------------------


def upoly_trim(p: List[NFElem]) -> List[NFElem]:
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def upoly_monic(p: List[NFElem]) -> List[NFElem]:
    p = upoly_trim(p)
    if not p:
        return p
    inv = p[-1].inverse()
    return [c * inv for c in p]


def upoly_deriv(p: List[NFElem]) -> List[NFElem]:
    return upoly_trim([p[k] * k for k in range(1, len(p))])


def upoly_mul(p: List[NFElem], q: List[NFElem]) -> List[NFElem]:
    if not p or not q:
        return []
    F = p[0].field if p[0].field.degree >= q[0].field.degree else q[0].field
    out = [F.zero()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return upoly_trim(out)


def upoly_divmod(p: List[NFElem], q: List[NFElem]) -> Tuple[List[NFElem], List[NFElem]]:
    q = upoly_trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = upoly_trim(p)
    if len(r) < len(q):
        return [], r
    inv = q[-1].inverse()
    quot = [None] * (len(r) - len(q) + 1)
    r = list(r)
    for k in range(len(r) - len(q), -1, -1):
        c = r[k + len(q) - 1] * inv
        quot[k] = c
        if not c.is_zero():
            for j in range(len(q)):
                r[k + j] = r[k + j] - c * q[j]
    zero = q[0].field.zero() if q else None
    quot = [c if c is not None else zero for c in quot]
    return upoly_trim(quot), upoly_trim(r[: len(q) - 1])


def upoly_gcd(p: List[NFElem], q: List[NFElem]) -> List[NFElem]:
    a, b = upoly_trim(p), upoly_trim(q)
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, r
    return upoly_monic(a)


def upoly_eval(p: Sequence[NFElem], x: NFElem) -> NFElem:
    acc = x.field.zero() if isinstance(x, NFElem) else 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def upoly_squarefree(p: List[NFElem]) -> List[Tuple[List[NFElem], int]]:
    """Yun's square-free decomposition over a number field (characteristic 0)."""
    p = upoly_monic(p)
    out = []
    if len(p) <= 1:
        return out
    a0 = p
    dp = upoly_deriv(p)
    b = upoly_gcd(a0, dp)
    c, _ = upoly_divmod(a0, b)
    d, _ = upoly_divmod(dp, b)
    d = upoly_trim([x - y for x, y in _zip_pad(d, upoly_deriv(c))])
    i = 1
    while len(c) > 1:
        a = upoly_gcd(c, d)
        if len(a) > 1:
            out.append((a, i))
        c, _ = upoly_divmod(c, a)
        d, _ = upoly_divmod(d, a)
        d = upoly_trim([x - y for x, y in _zip_pad(d, upoly_deriv(c))])
        i += 1
    return out


def _zip_pad(p, q):
    n = max(len(p), len(q))
    if n == 0:
        return
    F = (p or q)[0].field
    for k in range(n):
        yield (p[k] if k < len(p) else F.zero(), q[k] if k < len(q) else F.zero())


def factor_over(F: NumberField, h: Sequence[NFElem]) -> List[Tuple[List[NFElem], int]]:
    """Irreducible factorization of ``h`` over ``F`` (monic factors with multiplicities)."""
    h = upoly_monic([F(c) for c in h])
    if len(h) <= 1:
        return []
    result = []
    if F.degree == 1:
        qp = flint.fmpq_poly([c.poly.coeffs()[0] if c.poly.length() else 0 for c in h])
        qp_frac = [(flint.fmpq_poly(fac.coeffs()), e) for fac, e in qp.factor()[1]]
        for fac, e in qp_frac:
            result.append((upoly_monic([F(c) for c in fac.coeffs()]), e))
        return _sorted_factors(result)
    for part, mult in upoly_squarefree(h):
        if len(part) == 2:
            result.append((part, mult))
            continue
        for k in _shift_sequence():
            N, _ = _norm_of_shift(F, part, k)
            if N.gcd(N.derivative()).degree() == 0:
                break
        facs = N.factor()[1]
        if len(facs) == 1:
            result.append((part, mult))
            continue
        theta = F.gen()
        for fac, _ in facs:
            # fac(z + k theta) as a polynomial in z over F
            shifted = _compose_shift([F(c) for c in fac.coeffs()], theta * k)
            g = upoly_gcd(part, shifted)
            if len(g) > 1:
                result.append((g, mult))
    return _sorted_factors(result)


def _compose_shift(p: List[NFElem], s: NFElem) -> List[NFElem]:
    """Coefficients of ``p(z + s)``."""
    out: List[NFElem] = []
    for c in reversed(p):
        # out = out * (z + s) + c
        new = [s.field.zero()] * (len(out) + 1)
        for j, a in enumerate(out):
            new[j + 1] = new[j + 1] + a
            new[j] = new[j] + a * s
        new[0] = new[0] + c
        out = new
    return upoly_trim(out)


def _sorted_factors(facs):
    return sorted(facs, key=lambda fe: (len(fe[0]), fe[1], [str(c.poly) for c in fe[0]]))


def embed_elements(F: NumberField, elems: Sequence[NFElem]) -> Tuple[NumberField, List[NFElem]]:
    """Images of ``elems`` (from arbitrary fields) inside one extension of ``F``.

    Elements already in the tower of ``F`` are lifted; any other element is
    identified through its minimal polynomial and complex value, adjoining a
    root to ``F`` when no image exists yet.  Returns the final field and the
    images, all lifted to it.
    """
    L = F
    out: List[NFElem] = []
    for a in elems:
        if a.field is L or L.is_extension_of(a.field) or a.is_rational():
            out.append(a.lift(L) if not a.is_rational() else L(a.rational()))
            continue
        mp = a.minpoly()
        h = [L(c) for c in mp.coeffs()]
        z = a.to_acb(256)
        image = None
        for fac, _ in factor_over(L, h):
            if len(fac) == 2:
                cand = -fac[0]
                if cand.to_acb(256).overlaps(z):
                    image = cand
                    break
        if image is None:
            for fac, _ in factor_over(L, h):
                vals = L.root_values(fac, 256)
                if any(v.overlaps(z) for v in vals):
                    L, image = L.adjoin(fac, near=a.to_complex())
                    break
        if image is None:
            raise ArithmeticError("could not embed an element into the field")
        out = [x.lift(L) for x in out]
        out.append(image)
    return L, [x.lift(L) for x in out]
