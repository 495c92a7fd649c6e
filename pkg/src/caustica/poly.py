"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a mapping from exponent tuples to nonzero rational
coefficients (gmpy2.mpq), together with an ordered tuple of variable names.
All arithmetic is exact; floats never enter except through the dedicated
``evaluate_float`` helper.  The canonical term order is graded
lexicographic (compare total degree first, then the exponent tuple), which
fixes leading terms, printing order and the sign convention of primitive
parts.

The module also carries the elimination toolkit built on this
representation: formal derivatives, partial substitution, exact division,
Sylvester matrices, fraction-free (Bareiss) determinants, and resultant
based elimination of two variables from three equations.  Determinants of
large Sylvester matrices with few carried variables are computed exactly by
evaluation at integer nodes followed by Newton interpolation; the degree of
the result is probed modulo a prime first and the reconstruction is
verified at fresh evaluation points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from heapq import heappush, heappop
from typing import Iterable, Mapping, Sequence

import gmpy2
from gmpy2 import mpq, mpz


class PolyError(Exception):
    """Base class for polynomial-layer failures."""


class ZeroPoly(PolyError):
    """An operation that needs a nonzero polynomial received zero."""


class DivByZero(PolyError):
    """Division by the zero polynomial."""


class NotDivisible(PolyError):
    """Exact division failed: the divisor does not divide the dividend."""


class BothConstantInV(PolyError):
    """Resultant requested w.r.t. a variable neither operand contains."""


class ZeroResultant(PolyError):
    """Iterated-resultant elimination collapsed to zero (positive-dimensional projection)."""


def _to_mpq(value) -> mpq:
    if isinstance(value, mpq):
        return value
    if isinstance(value, (int, mpz)):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(value)
    raise TypeError(f"cannot use {value!r} as an exact rational coefficient")


def _grlex_key(exponents: tuple[int, ...]) -> tuple:
    return (sum(exponents), exponents)


class MPoly:
    """Sparse exact multivariate polynomial over Q.

    Values are immutable by convention: no method mutates ``self`` and the
    term dictionary must not be touched from outside.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], object]):
        vs = tuple(variables)
        clean: dict[tuple[int, ...], mpq] = {}
        for exp, coef in terms.items():
            q = _to_mpq(coef)
            if q == 0:
                continue
            e = tuple(int(x) for x in exp)
            if len(e) != len(vs):
                raise ValueError(f"exponent {e} does not match variables {vs}")
            if e in clean:
                clean[e] = clean[e] + q
            else:
                clean[e] = q
        self.vars = vs
        self.terms = {e: c for e, c in clean.items() if c != 0}

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(variables: Sequence[str] = ()) -> "MPoly":
        return MPoly(variables, {})

    @staticmethod
    def constant(value, variables: Sequence[str] = ()) -> "MPoly":
        vs = tuple(variables)
        return MPoly(vs, {(0,) * len(vs): _to_mpq(value)})

    @staticmethod
    def variable(name: str, variables: Sequence[str] | None = None) -> "MPoly":
        vs = (name,) if variables is None else tuple(variables)
        exp = tuple(1 if v == name else 0 for v in vs)
        if name not in vs:
            raise ValueError(f"{name} not among {vs}")
        return MPoly(vs, {exp: mpq(1)})

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, var: str) -> int:
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=0)

    def leading(self) -> tuple[tuple[int, ...], mpq]:
        """Leading (monomial, coefficient) under graded lex; ZeroPoly on 0."""
        if not self.terms:
            raise ZeroPoly("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def coefficient(self, exponents: Sequence[int]) -> mpq:
        return self.terms.get(tuple(exponents), mpq(0))

    def constant_value(self) -> mpq:
        """The value of a constant polynomial; raises if any variable occurs."""
        if any(any(e) for e in self.terms):
            raise PolyError("polynomial is not constant")
        return self.terms.get((0,) * len(self.vars), mpq(0))

    def term_count(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        if self.vars == other.vars:
            return self.terms == other.terms
        a, b = _align(self, other)
        return a.terms == b.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MPoly({format_poly(self)!r})"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "MPoly":
        return add(self, _lift(other, self.vars))

    __radd__ = __add__

    def __sub__(self, other) -> "MPoly":
        return add(self, neg(_lift(other, self.vars)))

    def __rsub__(self, other) -> "MPoly":
        return add(_lift(other, self.vars), neg(self))

    def __neg__(self) -> "MPoly":
        return neg(self)

    def __mul__(self, other) -> "MPoly":
        return mul(self, _lift(other, self.vars))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        return power(self, k)

    def derivative(self, var: str) -> "MPoly":
        return derivative(self, var)

    def evaluate(self, assignment: Mapping[str, object]) -> "MPoly":
        return evaluate(self, assignment)

    def evaluate_float(self, assignment: Mapping[str, float]) -> float:
        """Float evaluation at a full assignment (numeric residual checks)."""
        missing = [v for v in self.vars if v not in assignment]
        if missing:
            raise PolyError(f"missing values for {missing}")
        vals = [float(assignment[v]) for v in self.vars]
        total = 0.0
        for exp, coef in self.terms.items():
            term = float(coef)
            for v, e in zip(vals, exp):
                if e:
                    term *= v ** e
            total += term
        return total

    def coeff_l1(self) -> mpq:
        return sum((abs(c) for c in self.terms.values()), mpq(0))


def _lift(value, variables: Sequence[str]) -> MPoly:
    if isinstance(value, MPoly):
        return value
    return MPoly.constant(_to_mpq(value), variables)


def _align(p: MPoly, q: MPoly) -> tuple[MPoly, MPoly]:
    """Bring two polynomials onto the union variable list (left order first)."""
    if p.vars == q.vars:
        return p, q
    vs = list(p.vars) + [v for v in q.vars if v not in p.vars]
    return extend_vars(p, vs), extend_vars(q, vs)


def extend_vars(p: MPoly, variables: Sequence[str]) -> MPoly:
    vs = tuple(variables)
    if p.vars == vs:
        return p
    idx = []
    for v in p.vars:
        if v not in vs:
            raise ValueError(f"variable {v} missing from target list {vs}")
        idx.append(vs.index(v))
    terms: dict[tuple[int, ...], mpq] = {}
    for exp, coef in p.terms.items():
        e = [0] * len(vs)
        for i, x in zip(idx, exp):
            e[i] = x
        terms[tuple(e)] = coef
    return MPoly(vs, terms)


def rename_vars(p: MPoly, mapping: Mapping[str, str]) -> MPoly:
    new_vars = tuple(mapping.get(v, v) for v in p.vars)
    if len(set(new_vars)) != len(new_vars):
        raise ValueError("renaming collapses two variables")
    return MPoly(new_vars, p.terms)


def variables(*names: str) -> tuple[MPoly, ...]:
    """Generators sharing one variable list, e.g. ``x, y = variables('x', 'y')``."""
    return tuple(MPoly.variable(n, names) for n in names)


# -- arithmetic -------------------------------------------------------------


def add(p: MPoly, q: MPoly) -> MPoly:
    p, q = _align(p, q)
    if not p.terms:
        return q
    if not q.terms:
        return p
    out = dict(p.terms)
    for exp, coef in q.terms.items():
        cur = out.get(exp)
        if cur is None:
            out[exp] = coef
        else:
            cur = cur + coef
            if cur:
                out[exp] = cur
            else:
                del out[exp]
    r = MPoly.zero(p.vars)
    r.terms = out
    return r


def neg(p: MPoly) -> MPoly:
    r = MPoly.zero(p.vars)
    r.terms = {e: -c for e, c in p.terms.items()}
    return r


def mul(p: MPoly, q: MPoly) -> MPoly:
    p, q = _align(p, q)
    if not p.terms or not q.terms:
        return MPoly.zero(p.vars)
    if len(p.terms) > len(q.terms):
        p, q = q, p
    out: dict[tuple[int, ...], mpq] = {}
    qitems = list(q.terms.items())
    for ea, ca in p.terms.items():
        for eb, cb in qitems:
            exp = tuple(x + y for x, y in zip(ea, eb))
            piece = ca * cb
            cur = out.get(exp)
            out[exp] = piece if cur is None else cur + piece
    r = MPoly.zero(p.vars)
    r.terms = {e: c for e, c in out.items() if c != 0}
    return r


def power(p: MPoly, k: int) -> MPoly:
    if k < 0 or k != int(k):
        raise ValueError("exponent must be a nonnegative integer")
    result = MPoly.constant(1, p.vars)
    base = p
    k = int(k)
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base) if k > 1 else base
        k >>= 1
    return result


def derivative(p: MPoly, var: str) -> MPoly:
    if var not in p.vars:
        raise PolyError(f"{var} is not a variable of the polynomial")
    i = p.vars.index(var)
    terms: dict[tuple[int, ...], mpq] = {}
    for exp, coef in p.terms.items():
        e = exp[i]
        if e == 0:
            continue
        new = list(exp)
        new[i] = e - 1
        terms[tuple(new)] = coef * e
    return MPoly(p.vars, terms)


def evaluate(p: MPoly, assignment: Mapping[str, object]) -> MPoly:
    """Substitute exact rational values for some variables.

    The substituted variables are removed from the variable list; a full
    assignment yields a constant polynomial over ``()``.
    """
    relevant = {v: _to_mpq(val) for v, val in assignment.items() if v in p.vars}
    if not relevant:
        return p
    keep = [v for v in p.vars if v not in relevant]
    keep_idx = [p.vars.index(v) for v in keep]
    sub_idx = [(i, relevant[v]) for i, v in enumerate(p.vars) if v in relevant]
    terms: dict[tuple[int, ...], mpq] = {}
    for exp, coef in p.terms.items():
        c = coef
        for i, val in sub_idx:
            if exp[i]:
                c = c * val ** exp[i]
        e = tuple(exp[i] for i in keep_idx)
        cur = terms.get(e)
        terms[e] = c if cur is None else cur + c
    return MPoly(keep, terms)


# -- division and normal forms ----------------------------------------------


def divmod_poly(p: MPoly, d: MPoly) -> tuple[MPoly, MPoly]:
    """Division with remainder by a single divisor (graded lex)."""
    if d.is_zero():
        raise DivByZero("division by the zero polynomial")
    p, d = _align(p, d)
    if p.is_zero():
        return p, p
    q, r = _full_div(p, d, stop_on_park=False)
    assert r is not None
    return q, r


def _full_div(p: MPoly, d: MPoly, stop_on_park: bool) -> tuple[MPoly, MPoly | None]:
    """Single-divisor division loop over a lazy-deletion max-heap of monomials.

    A term whose monomial is not divisible by the divisor's leading monomial
    can never be reduced later, so in ``stop_on_park`` mode the loop aborts
    immediately (cheap rejection for trial divisions).
    """
    dl_exp, dl_coef = d.leading()
    rem = dict(p.terms)
    parked: dict[tuple[int, ...], mpq] = {}
    heap: list[tuple] = []
    for e in rem:
        heappush(heap, (-sum(e), tuple(-x for x in e)))
    quot: dict[tuple[int, ...], mpq] = {}
    while heap:
        _, nege = heappop(heap)
        exp = tuple(-x for x in nege)
        coef = rem.get(exp)
        if coef is None:
            continue
        qexp = tuple(a - b for a, b in zip(exp, dl_exp))
        if any(x < 0 for x in qexp):
            if stop_on_park:
                return MPoly(p.vars, quot), None
            parked[exp] = coef
            del rem[exp]
            continue
        qc = coef / dl_coef
        quot[qexp] = quot.get(qexp, mpq(0)) + qc
        del rem[exp]
        for de, dc in d.terms.items():
            if de == dl_exp:
                continue  # cancelled against the deleted leading term
            te = tuple(a + b for a, b in zip(qexp, de))
            cur = rem.get(te)
            val = (cur if cur is not None else mpq(0)) - qc * dc
            if val:
                if cur is None:
                    heappush(heap, (-sum(te), tuple(-x for x in te)))
                rem[te] = val
            elif cur is not None:
                del rem[te]
    return MPoly(p.vars, quot), MPoly(p.vars, parked)


def exact_div(p: MPoly, d: MPoly) -> MPoly:
    """Exact quotient p/d; raises NotDivisible when the remainder is nonzero."""
    if d.is_zero():
        raise DivByZero("division by the zero polynomial")
    p, d = _align(p, d)
    if p.is_zero():
        return p
    q, r = _full_div(p, d, stop_on_park=True)
    if r is None or not r.is_zero():
        raise NotDivisible("remainder is nonzero")
    return q


def try_exact_div(p: MPoly, d: MPoly) -> MPoly | None:
    """exact_div returning None instead of raising (for trial-division loops)."""
    try:
        return exact_div(p, d)
    except NotDivisible:
        return None


def content_and_primitive(p: MPoly) -> tuple[mpq, MPoly]:
    """Split p = content * primitive.

    The primitive part has integer coefficients with gcd 1 and a positive
    leading coefficient under graded lex.
    """
    if p.is_zero():
        raise ZeroPoly("zero polynomial has no primitive part")
    den_lcm = mpz(1)
    for c in p.terms.values():
        den_lcm = gmpy2.lcm(den_lcm, c.denominator)
    num_gcd = mpz(0)
    for c in p.terms.values():
        num_gcd = gmpy2.gcd(num_gcd, c.numerator * (den_lcm // c.denominator))
    scale = mpq(num_gcd, den_lcm)
    _, lead = p.leading()
    if lead < 0:
        scale = -scale
    prim = MPoly(p.vars, {e: c / scale for e, c in p.terms.items()})
    return scale, prim


def primitive_part(p: MPoly) -> MPoly:
    return content_and_primitive(p)[1]


def squarefree_univariate(p: MPoly) -> MPoly:
    """Squarefree part of a univariate polynomial via gcd with its derivative."""
    occupied = [v for v in p.vars if p.degree_in(v) > 0]
    if len(occupied) > 1:
        raise PolyError("squarefree reduction implemented for univariate input only")
    if not occupied:
        return p
    v = occupied[0]
    coeffs = _univariate_coeffs(p, v)
    g = _poly_gcd_univ(coeffs, _univ_derivative(coeffs))
    if len(g) <= 1:
        return p
    q, r = _univ_divmod(coeffs, g)
    assert not any(r), "gcd must divide exactly"
    return _from_univariate(q, v, p.vars)


# univariate helpers on dense coefficient lists (index = degree)


def _univariate_coeffs(p: MPoly, var: str) -> list[mpq]:
    i = p.vars.index(var)
    out = [mpq(0)] * (p.degree_in(var) + 1)
    for exp, coef in p.terms.items():
        if any(e and j != i for j, e in enumerate(exp)):
            raise PolyError("polynomial is not univariate")
        out[exp[i]] += coef
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _from_univariate(coeffs: Sequence[mpq], var: str, variables: Sequence[str]) -> MPoly:
    i = tuple(variables).index(var)
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * len(variables)
            e[i] = k
            terms[tuple(e)] = c
    return MPoly(variables, terms)


def _univ_derivative(c: Sequence[mpq]) -> list[mpq]:
    return [c[k] * k for k in range(1, len(c))] or [mpq(0)]


def _univ_divmod(a: Sequence[mpq], b: Sequence[mpq]) -> tuple[list[mpq], list[mpq]]:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    if db < 0 or lb == 0:
        raise DivByZero("univariate division by zero")
    q = [mpq(0)] * max(len(a) - db, 1)
    for k in range(len(a) - 1, db - 1, -1):
        f = a[k] / lb
        if f:
            q[k - db] = f
            for j in range(db + 1):
                a[k - db + j] -= f * b[j]
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return q, a


def _poly_gcd_univ(a: Sequence[mpq], b: Sequence[mpq]) -> list[mpq]:
    a, b = list(a), list(b)
    while any(b):
        _, r = _univ_divmod(a, b)
        a, b = b, r
    if not any(a):
        return [mpq(1)]
    lead = a[-1]
    return [c / lead for c in a]


# -- Sylvester matrices and determinants --------------------------------------


@dataclass(frozen=True)
class SylvesterMatrix:
    """Classical Sylvester matrix of f, g w.r.t. one variable.

    Entries are polynomials in the remaining variables; the determinant is
    the resultant res_var(f, g).
    """

    var: str
    deg_f: int
    deg_g: int
    entries: tuple[tuple[MPoly, ...], ...]

    @property
    def size(self) -> int:
        return self.deg_f + self.deg_g


def _coeffs_in(p: MPoly, var: str) -> list[MPoly]:
    """Coefficients of p as a polynomial in var (index = degree in var)."""
    rest = tuple(v for v in p.vars if v != var)
    i = p.vars.index(var) if var in p.vars else -1
    out: list[dict] = [dict() for _ in range(p.degree_in(var) + 1)]
    for exp, coef in p.terms.items():
        k = exp[i] if i >= 0 else 0
        e = tuple(x for j, x in enumerate(exp) if j != i)
        out[k][e] = coef
    return [MPoly(rest, d) for d in out]


def sylvester_matrix(f: MPoly, g: MPoly, var: str) -> SylvesterMatrix:
    f, g = _align(f, g)
    m, n = f.degree_in(var), g.degree_in(var)
    if m == 0 and n == 0:
        raise BothConstantInV(f"neither operand involves {var}")
    cf, cg = _coeffs_in(f, var), _coeffs_in(g, var)
    rest = tuple(v for v in f.vars if v != var)
    zero = MPoly.zero(rest)
    size = m + n
    rows: list[tuple[MPoly, ...]] = []
    for i in range(n):
        row = [zero] * size
        for j in range(m + 1):
            row[i + j] = cf[m - j]
        rows.append(tuple(row))
    for i in range(m):
        row = [zero] * size
        for j in range(n + 1):
            row[i + j] = cg[n - j]
        rows.append(tuple(row))
    return SylvesterMatrix(var=var, deg_f=m, deg_g=n, entries=tuple(rows))


def det_bareiss(rows: Sequence[Sequence[MPoly]]) -> MPoly:
    """Fraction-free determinant over the polynomial ring.

    Every interior division is exact (a property of Bareiss elimination in
    an integral domain); exact_div raises if that is ever violated.
    """
    n = len(rows)
    if n == 0:
        return MPoly.constant(1)
    vs = rows[0][0].vars
    m = [[extend_vars(e, vs) for e in row] for row in rows]
    if n == 1:
        return m[0][0]
    sign = 1
    prev = MPoly.constant(1, vs)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return MPoly.zero(vs)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                e = mul(pivot, m[i][j]) - mul(m[i][k], m[k][j])
                m[i][j] = exact_div(e, prev) if k else e
            m[i][k] = MPoly.zero(vs)
        prev = pivot
    d = m[n - 1][n - 1]
    return neg(d) if sign < 0 else d


def _det_scalar(rows: Sequence[Sequence[mpq]]) -> mpq:
    """Exact determinant of a rational matrix (integer Bareiss after scaling)."""
    n = len(rows)
    if n == 0:
        return mpq(1)
    scale = mpq(1)
    m: list[list[mpz]] = []
    for row in rows:
        den = mpz(1)
        for c in row:
            den = gmpy2.lcm(den, c.denominator)
        scale /= den
        m.append([mpz(c * den) for c in row])
    sign = 1
    prev = mpz(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return mpq(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                e = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = e // prev if k else e
        prev = m[k][k]
    return scale * sign * m[n - 1][n - 1]


def _det_modp(rows: list[list[int]], p: int) -> int:
    n = len(rows)
    m = [[x % p for x in row] for row in rows]
    det = 1
    for k in range(n):
        piv = None
        for i in range(k, n):
            if m[i][k]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = p - det
        det = det * m[k][k] % p
        inv = pow(m[k][k], p - 2, p)
        for i in range(k + 1, n):
            if m[i][k]:
                f = m[i][k] * inv % p
                row_i, row_k = m[i], m[k]
                for j in range(k, n):
                    row_i[j] = (row_i[j] - f * row_k[j]) % p
    return det


_PROBE_PRIME = (1 << 31) - 1


class _MatrixEvaluator:
    """Evaluates a polynomial matrix at integer points, caching shared entries."""

    def __init__(self, rows: Sequence[Sequence[MPoly]], carried: tuple[str, ...]):
        self.rows = rows
        self.carried = carried
        self.n = len(rows)
        distinct: dict[int, MPoly] = {}
        for row in rows:
            for e in row:
                distinct.setdefault(id(e), e)
        self.distinct = distinct

    def _eval_entry(self, p: MPoly, point: tuple[int, ...]) -> mpq:
        assignment = dict(zip(self.carried, point))
        vals = [mpq(assignment.get(v, 0)) for v in p.vars]
        total = mpq(0)
        for exp, coef in p.terms.items():
            t = coef
            for v, e in zip(vals, exp):
                if e:
                    t *= v ** e
            total += t
        return total

    def matrix_at(self, point: tuple[int, ...]) -> list[list[mpq]]:
        cache = {k: self._eval_entry(p, point) for k, p in self.distinct.items()}
        return [[cache[id(e)] for e in row] for row in self.rows]

    def det_at(self, point: tuple[int, ...]) -> mpq:
        return _det_scalar(self.matrix_at(point))

    def det_modp_at(self, point: tuple[int, ...], p: int) -> int:
        m = self.matrix_at(point)
        rows = []
        for row in m:
            r = []
            for c in row:
                num = int(c.numerator) % p
                den = int(c.denominator) % p
                r.append(num * pow(den, p - 2, p) % p)
            rows.append(r)
        return _det_modp(rows, p)


def _degree_bounds(rows: Sequence[Sequence[MPoly]], carried: tuple[str, ...]) -> list[int]:
    bounds = []
    for v in carried:
        total = 0
        for row in rows:
            total += max((e.degree_in(v) for e in row), default=0)
        bounds.append(total)
    return bounds


def _probe_degree(ev: _MatrixEvaluator, axis: int, bound: int, rng: random.Random) -> int:
    """Degree of det along one variable, computed modulo a large prime."""
    p = _PROBE_PRIME
    best = -1
    for _ in range(2):
        anchor = [rng.randrange(1, p) for _ in ev.carried]
        vals = []
        nodes = list(range(bound + 2))
        for node in nodes:
            pt = list(anchor)
            pt[axis] = node
            vals.append(ev.det_modp_at(tuple(pt), p))
        # Newton divided differences over GF(p); nodes are 0,1,2,...
        coef = vals[:]
        for j in range(1, len(nodes)):
            for i in range(len(nodes) - 1, j - 1, -1):
                coef[i] = (coef[i] - coef[i - 1]) * pow(nodes[i] - nodes[i - j], p - 2, p) % p
        deg = max((i for i, c in enumerate(coef) if c), default=0)
        best = max(best, deg)
    return max(best, 0)


def _newton_interp(nodes: Sequence[int], values: Sequence[mpq]) -> list[mpq]:
    """Power-basis coefficients of the interpolating polynomial (exact)."""
    k = len(nodes)
    coef = list(values)
    for j in range(1, k):
        for i in range(k - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - j])
    # expand Newton form into the power basis
    out = [mpq(0)] * k
    basis = [mpq(1)]  # product (v - nodes[0])...(v - nodes[j-1])
    for j in range(k):
        for d, b in enumerate(basis):
            out[d] += coef[j] * b
        if j + 1 < k:
            nxt = [mpq(0)] * (len(basis) + 1)
            for d, b in enumerate(basis):
                nxt[d + 1] += b
                nxt[d] -= b * nodes[j]
            basis = nxt
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _tensor_interp(grid, degrees: list[int], axis: int, nodes_per_axis) -> dict[tuple[int, ...], mpq]:
    """Recursively interpolate a value grid into monomial coefficients."""
    nodes = nodes_per_axis[axis]
    if axis == len(degrees) - 1:
        coeffs = _newton_interp(nodes, [grid[i] for i in range(len(nodes))])
        return {(k,): c for k, c in enumerate(coeffs) if c}
    sub = [_tensor_interp(grid[i], degrees, axis + 1, nodes_per_axis) for i in range(len(nodes))]
    exps = set()
    for s in sub:
        exps.update(s)
    out: dict[tuple[int, ...], mpq] = {}
    for e in exps:
        vals = [s.get(e, mpq(0)) for s in sub]
        for k, c in enumerate(_newton_interp(nodes, vals)):
            if c:
                out[(k,) + e] = c
    return out


def det_interpolated(rows: Sequence[Sequence[MPoly]], rng_seed: int = 2) -> MPoly:
    """Exact determinant by integer evaluation and Newton interpolation.

    The per-variable degree of the determinant is probed modulo a prime, the
    determinant is evaluated on an integer grid of matching size, and the
    interpolated result is verified at fresh random points.
    """
    carried = rows[0][0].vars
    if not carried:
        return MPoly.constant(_det_scalar([[e.constant_value() for e in row] for row in rows]))
    ev = _MatrixEvaluator(rows, carried)
    rng = random.Random(rng_seed)
    bounds = _degree_bounds(rows, carried)
    degrees = [_probe_degree(ev, i, b, rng) for i, b in enumerate(bounds)]
    for attempt in range(2):
        nodes_per_axis = [[j - d // 2 for j in range(d + 1)] for d in degrees]

        def fill(axis: int, prefix: tuple[int, ...]):
            if axis == len(carried):
                return ev.det_at(prefix)
            return [fill(axis + 1, prefix + (node,)) for node in nodes_per_axis[axis]]

        grid = fill(0, ())
        if len(carried) == 1:
            coeffs = _newton_interp(nodes_per_axis[0], grid)
            terms = {(k,): c for k, c in enumerate(coeffs) if c}
        else:
            terms = _tensor_interp(grid, degrees, 0, nodes_per_axis)
        result = MPoly(carried, terms)
        ok = True
        for _ in range(2):
            pt = tuple(rng.randrange(10**3, 10**6) for _ in carried)
            direct = ev.det_at(pt)
            if evaluate(result, dict(zip(carried, pt))).constant_value() != direct:
                ok = False
                break
        if ok:
            return result
        # probed degree was too low for this matrix: fall back to hard bounds
        degrees = bounds
    raise PolyError("interpolated determinant failed verification")


_BAREISS_MAX_SIZE = 6


def matrix_determinant(rows: Sequence[Sequence[MPoly]]) -> MPoly:
    """Exact determinant of a polynomial matrix, choosing a strategy by size."""
    n = len(rows)
    if n == 0:
        return MPoly.constant(1)
    carried = rows[0][0].vars
    live = [v for v in carried if any(e.degree_in(v) > 0 for row in rows for e in row)]
    if not live:
        return MPoly.constant(
            _det_scalar([[e.constant_value() for e in row] for row in rows]), carried
        )
    if n <= _BAREISS_MAX_SIZE or len(live) > 4:
        return det_bareiss(rows)
    return det_interpolated(rows)


def sylvester_resultant(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Resultant of f and g w.r.t. var as a Sylvester determinant.

    Small matrices go through fraction-free Bareiss elimination directly;
    large ones with at most four carried variables are interpolated from
    exact integer evaluations.
    """
    f, g = _align(f, g)
    if f.is_zero() or g.is_zero():
        return MPoly.zero(tuple(v for v in f.vars if v != var))
    m, n = f.degree_in(var), g.degree_in(var)
    if m == 0 and n == 0:
        raise BothConstantInV(f"neither operand involves {var}")
    if m == 0:
        return power(_without_var(f, var), n)
    if n == 0:
        return power(_without_var(g, var), m)
    matrix = sylvester_matrix(f, g, var)
    return matrix_determinant(matrix.entries)


def _without_var(p: MPoly, var: str) -> MPoly:
    """Drop a variable that p does not actually use from its variable list."""
    if p.degree_in(var) > 0:
        raise PolyError(f"{var} occurs in the polynomial")
    i = p.vars.index(var)
    rest = tuple(v for v in p.vars if v != var)
    return MPoly(rest, {tuple(x for j, x in enumerate(e) if j != i): c for e, c in p.terms.items()})


def eliminate_two(f: MPoly, g: MPoly, h: MPoly, u: str, v: str) -> MPoly:
    """Eliminate u and v from three equations via iterated resultants.

    Returns the primitive part of res_v(res_u(f, g), res_u(f, h)) with the
    variable order chosen to keep the intermediate resultants small.  The
    output contains the true eliminant as a factor; extraneous factors from
    the iteration are expected and must be handled by the caller.
    """
    def cost(first: str) -> int:
        return (f.degree_in(first) + g.degree_in(first)) * (f.degree_in(first) + h.degree_in(first))

    order = (u, v) if cost(u) <= cost(v) else (v, u)
    first, second = order
    a = sylvester_resultant(f, g, first)
    b = sylvester_resultant(f, h, first)
    if a.is_zero() or b.is_zero():
        raise ZeroResultant(f"res_{first} vanished identically")
    a = _strip_variable_power(primitive_part(a), second)
    b = _strip_variable_power(primitive_part(b), second)
    if a.degree_in(second) == 0 and b.degree_in(second) == 0:
        raise ZeroResultant(f"intermediate resultants do not involve {second}")
    r = sylvester_resultant(a, b, second)
    if r.is_zero():
        raise ZeroResultant("final resultant vanished identically")
    r = primitive_part(r)
    occupied = [w for w in r.vars if r.degree_in(w) > 0]
    if len(occupied) == 1:
        r = primitive_part(squarefree_univariate(r))
    return r


def _strip_variable_power(p: MPoly, var: str) -> MPoly:
    """Remove any plain power of ``var`` dividing p.

    A common root of an intermediate pair on the hyperplane var = 0
    (a singular curve point on the symmetry axis) shows up as such a
    factor in both intermediates and would annihilate the final resultant.
    """
    if var not in p.vars:
        return p
    v = MPoly.variable(var, p.vars)
    while True:
        q = try_exact_div(p, v)
        if q is None or q.is_zero():
            return p
        p = q


# -- text and JSON formats ----------------------------------------------------


def format_poly(p: MPoly) -> str:
    """Render in the canonical text format (graded-lex descending terms)."""
    if p.is_zero():
        return "0"
    pieces: list[str] = []
    for exp in sorted(p.terms, key=_grlex_key, reverse=True):
        coef = p.terms[exp]
        mono = "*".join(
            v if e == 1 else f"{v}^{e}" for v, e in zip(p.vars, exp) if e
        )
        mag = abs(coef)
        if not mono:
            body = _coef_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_coef_str(mag)}*{mono}"
        if not pieces:
            pieces.append(body if coef > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coef > 0 else f"- {body}")
    return " ".join(pieces)


def _coef_str(q: mpq) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_poly(text: str, variables: Sequence[str] | None = None) -> MPoly:
    """Parse the canonical text format back into an MPoly."""
    s = text.strip()
    if not s:
        raise PolyError("empty polynomial text")
    tokens = s.replace("- ", "-").replace("+ ", "+").split()
    terms: list[tuple[mpq, dict[str, int]]] = []
    seen: list[str] = []
    for tok in tokens:
        sign = mpq(1)
        while tok and tok[0] in "+-":
            if tok[0] == "-":
                sign = -sign
            tok = tok[1:]
        if not tok:
            raise PolyError("dangling sign in polynomial text")
        coef = sign
        mono: dict[str, int] = {}
        for factor in tok.split("*"):
            if not factor:
                raise PolyError(f"empty factor in term {tok!r}")
            if factor[0].isdigit():
                coef *= mpq(factor)
                continue
            if "^" in factor:
                name, _, e = factor.partition("^")
                exp = int(e)
            else:
                name, exp = factor, 1
            mono[name] = mono.get(name, 0) + exp
            if name not in seen:
                seen.append(name)
        terms.append((coef, mono))
    vs = tuple(variables) if variables is not None else tuple(seen)
    out: dict[tuple[int, ...], mpq] = {}
    for coef, mono in terms:
        unknown = set(mono) - set(vs)
        if unknown:
            raise PolyError(f"unknown variables {sorted(unknown)}")
        e = tuple(mono.get(v, 0) for v in vs)
        out[e] = out.get(e, mpq(0)) + coef
    return MPoly(vs, out)


def poly_to_json(p: MPoly) -> dict:
    """Structured export mirroring the term map (coefficients as strings)."""
    items = sorted(p.terms, key=_grlex_key, reverse=True)
    return {
        "vars": list(p.vars),
        "terms": [{"exp": list(e), "coef": _coef_str(p.terms[e])} for e in items],
    }


def poly_from_json(data: Mapping) -> MPoly:
    vs = tuple(data["vars"])
    return MPoly(vs, {tuple(t["exp"]): mpq(t["coef"]) for t in data["terms"]})
