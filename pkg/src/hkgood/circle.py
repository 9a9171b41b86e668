"""Exact cycle-level H_0 of the irrational rotation groupoid Z ⋉ S^1.

The circle is [0, 1) with 0 ~ 1 and the generator of Z rotates by θ.  All
points handled here have the form p + qθ (mod 1) with p rational and q an
integer, which is closed under the rotation.  θ itself is only known through
a finite continued fraction prefix; any comparison that the prefix cannot
settle raises :class:`PrecisionExhausted`.

A degree-0 chain is a pair (a, b): ``a`` is a right-continuous integer step
function on the circle and ``b`` a finitely supported integer function on
arrows (n, x), where (n, x) goes from x to x + nθ.  It is a cycle when the
jumps of ``a`` cancel ``δ(b)``.  Boundaries come in two kinds:

* c-moves, indexed by composable pairs ((k, x + lθ), (l, x)), change ``b``
  by δ_(l,x) - δ_(k+l,x) + δ_(k,x+lθ);
* e-moves, a step function ``e`` on the arrows (n, .), change ``a`` by
  α^n(e) - e and ``b`` by -∂e on (n, .).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import floor
from typing import Iterable, Mapping, Sequence

from .errors import ModelError, NotACycle, PrecisionExhausted


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise ModelError(f"inexact value {x!r}: give rationals as 'p/q' strings")
    return Fraction(x)


class RealExpr:
    """The real number a + bθ with rational a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = _frac(a)
        self.b = _frac(b)

    @classmethod
    def theta(cls) -> "RealExpr":
        return cls(0, 1)

    def __add__(self, other):
        other = _as_expr(other)
        return RealExpr(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return RealExpr(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_as_expr(other))

    def __rsub__(self, other):
        return _as_expr(other) - self

    def __mul__(self, k):
        if isinstance(k, RealExpr):
            if k.b == 0:
                k = k.a
            elif self.b == 0:
                return k * self.a
            else:
                raise TypeError("θ² is not in Q + Qθ")
        k = _frac(k)
        return RealExpr(self.a * k, self.b * k)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RealExpr(other)
        if not isinstance(other, RealExpr):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"RealExpr({self.a}, {self.b})"

    def __str__(self):
        if self.b < 0:
            return f"{self.a} - {-self.b}·θ"
        return f"{self.a} + {self.b}·θ"

    def to_json(self) -> list:
        return [_frac_str(self.a), _frac_str(self.b)]


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _as_expr(x) -> RealExpr:
    if isinstance(x, RealExpr):
        return x
    return RealExpr(x)


def parse_real(text) -> RealExpr:
    """Accept an int, a 'p/q' string, or a pair [a, b] meaning a + bθ."""
    if isinstance(text, RealExpr):
        return text
    if isinstance(text, (list, tuple)):
        if len(text) != 2:
            raise ModelError(f"expected [a, b] for a + bθ, got {text!r}")
        return RealExpr(parse_rational(text[0]), parse_rational(text[1]))
    return RealExpr(parse_rational(text))


def parse_rational(text) -> Fraction:
    if isinstance(text, bool):
        raise ModelError(f"not a rational number: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise ModelError(f"not a rational number: {text!r}") from None
    raise ModelError(f"not a rational number: {text!r}")


# --------------------------------------------------------------------------
# θ
# --------------------------------------------------------------------------

NAMED_THETA = {
    "golden": [1] * 64,   # (sqrt 5 - 1) / 2
    "silver": [2] * 64,   # sqrt 2 - 1
}


class Theta:
    """An irrational in (0, 1) given by continued fraction terms [0; a1, a2, ...].

    With the prefix ``a1..aN`` fixed and the tail unknown, θ lies in the open
    interval between p_N/q_N and (p_N + p_{N-1})/(q_N + q_{N-1}).  Intervals
    for every level are computed up front; they are nested, so the deepest
    one is used for decisions.
    """

    def __init__(self, terms: Sequence[int], name: str | None = None):
        terms = [int(t) for t in terms]
        if not terms:
            raise ModelError("θ needs at least one continued fraction term")
        if any(t < 1 for t in terms):
            raise ModelError("continued fraction terms after the leading 0 must be positive")
        self.terms = tuple(terms)
        self.name = name
        p_prev, q_prev = 1, 0
        p, q = 0, 1
        self.levels = []
        for t in terms:
            p, p_prev = t * p + p_prev, p
            q, q_prev = t * q + q_prev, q
            a = Fraction(p, q)
            b = Fraction(p + p_prev, q + q_prev)
            self.levels.append((min(a, b), max(a, b)))
        self.lo, self.hi = self.levels[-1]

    @classmethod
    def parse(cls, spec) -> "Theta":
        if isinstance(spec, Theta):
            return spec
        if isinstance(spec, str):
            key = spec.strip().lower()
            if key in NAMED_THETA:
                return cls(NAMED_THETA[key], key)
            try:
                terms = [int(t) for t in key.replace(";", ",").split(",") if t.strip()]
            except ValueError:
                raise ModelError(f"unknown θ {spec!r}: use a name ({', '.join(NAMED_THETA)}) "
                                 "or comma separated continued fraction terms") from None
            if terms and terms[0] == 0:
                terms = terms[1:]
            return cls(terms)
        return cls(list(spec))

    def describe(self) -> str:
        return self.name if self.name else ",".join(str(t) for t in self.terms)

    def approx(self) -> float:
        return float((self.lo + self.hi) / 2)

    def compare_rational(self, r: Fraction) -> int:
        """Sign of θ - r."""
        if r <= self.lo:
            return 1
        if r >= self.hi:
            return -1
        raise PrecisionExhausted(f"{len(self.terms)} continued fraction terms cannot "
                                 f"separate θ from {r}")

    def sign(self, x: RealExpr) -> int:
        if x.b == 0:
            return (x.a > 0) - (x.a < 0)
        s = self.compare_rational(-x.a / x.b)
        return s if x.b > 0 else -s

    def compare(self, x: RealExpr, y: RealExpr) -> int:
        return self.sign(x - y)

    def floor(self, x: RealExpr) -> int:
        if x.b == 0:
            return floor(x.a)
        lo = x.a + x.b * (self.lo if x.b > 0 else self.hi)
        k = floor(lo)
        # the guess is off by at most a step or two; settle it exactly
        while self.sign(x - k) < 0:
            k -= 1
        while self.sign(x - (k + 1)) >= 0:
            k += 1
        return k

    def __eq__(self, other):
        return isinstance(other, Theta) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"Theta({self.describe()})"


# --------------------------------------------------------------------------
# points and functions on the circle
# --------------------------------------------------------------------------


class CirclePoint:
    """The point p + qθ mod 1, stored with p + qθ in [0, 1)."""

    __slots__ = ("p", "q", "theta")

    def __init__(self, p, q: int, theta: Theta):
        p = _frac(p)
        q = int(q)
        k = theta.floor(RealExpr(p, q))
        self.p = p - k
        self.q = q
        self.theta = theta

    def value(self) -> RealExpr:
        return RealExpr(self.p, self.q)

    def rotate(self, n: int) -> "CirclePoint":
        return CirclePoint(self.p, self.q + n, self.theta)

    def __eq__(self, other):
        return isinstance(other, CirclePoint) and self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q))

    def __repr__(self):
        return f"CirclePoint({self.p}, {self.q})"

    def __str__(self):
        if self.q == 0:
            return _frac_str(self.p)
        qs = "θ" if self.q == 1 else ("-θ" if self.q == -1 else f"{self.q}θ")
        if self.p == 0:
            return qs
        return f"{_frac_str(self.p)}{'+' if self.q > 0 else ''}{qs}"


def _cmp_points(x: CirclePoint, y: CirclePoint) -> int:
    if x == y:
        return 0
    return x.theta.compare(x.value(), y.value())


_point_key = cmp_to_key(_cmp_points)


def sort_points(points: Iterable[CirclePoint]) -> list[CirclePoint]:
    return sorted(points, key=_point_key)


class JumpFn:
    """Finitely supported integer function on the circle (zeros dropped)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[CirclePoint, int] | None = None):
        self.coeffs = {x: int(v) for x, v in (coeffs or {}).items() if v}

    def __add__(self, other: "JumpFn") -> "JumpFn":
        out = dict(self.coeffs)
        for x, v in other.coeffs.items():
            out[x] = out.get(x, 0) + v
        return JumpFn(out)

    def __neg__(self):
        return JumpFn({x: -v for x, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int) -> "JumpFn":
        return JumpFn({x: k * v for x, v in self.coeffs.items()})

    def total(self) -> int:
        return sum(self.coeffs.values())

    def at(self, x: CirclePoint) -> int:
        return self.coeffs.get(x, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def rotate(self, n: int) -> "JumpFn":
        return JumpFn({x.rotate(n): v for x, v in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, JumpFn) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        items = ", ".join(f"{x}: {v:+d}" for x, v in self.sorted_items())
        return f"JumpFn({{{items}}})"

    def sorted_items(self):
        return [(x, self.coeffs[x]) for x in sort_points(self.coeffs)]


class StepFn:
    """Right-continuous integer step function on the circle.

    ``points`` are increasing in [0, 1); ``values[i]`` is the value on the arc
    from ``points[i]`` up to the next point (the last arc wraps past 1).  A
    function without breakpoints is the constant ``constant``.  Adjacent arcs
    with equal values are merged, so equal functions have equal data.
    """

    __slots__ = ("points", "values", "constant")

    def __init__(self, points: Sequence[CirclePoint] = (), values: Sequence[int] = (),
                 constant: int = 0):
        points = list(points)
        values = [int(v) for v in values]
        if len(points) != len(values):
            raise ValueError("one value per breakpoint is required")
        order = sorted(range(len(points)), key=lambda i: _point_key(points[i]))
        points = [points[i] for i in order]
        values = [values[i] for i in order]
        for a, b in zip(points, points[1:]):
            if a == b:
                raise ValueError(f"repeated breakpoint {a}")
        keep = [i for i in range(len(points)) if values[i] != values[i - 1]]
        if not keep:
            self.points = ()
            self.values = ()
            self.constant = values[0] if values else int(constant)
        else:
            self.points = tuple(points[i] for i in keep)
            self.values = tuple(values[i] for i in keep)
            self.constant = 0

    @classmethod
    def const(cls, k: int) -> "StepFn":
        return cls(constant=k)

    @classmethod
    def indicator(cls, x: CirclePoint, y: CirclePoint) -> "StepFn":
        """χ of the arc [x, y) running forward from x."""
        if x == y:
            return cls.const(0)
        if _cmp_points(x, y) < 0:
            return cls([x, y], [1, 0])
        return cls([y, x], [0, 1])

    @classmethod
    def from_jumps(cls, jumps: JumpFn, value_at_zero: int, theta: Theta) -> "StepFn":
        """The step function with the given jumps and value at 0."""
        if jumps.total() != 0:
            raise ValueError("jumps of a step function on the circle must sum to zero")
        items = jumps.sorted_items()
        if not items:
            return cls.const(value_at_zero)
        pts = [x for x, _ in items]
        vals, run = [], 0
        for _, v in items:
            run += v
            vals.append(run)
        f = cls(pts, vals)
        return f + cls.const(value_at_zero - f.at(CirclePoint(0, 0, theta)))

    def is_constant(self) -> bool:
        return not self.points

    def at(self, x: CirclePoint) -> int:
        if not self.points:
            return self.constant
        idx = len(self.points) - 1
        for i, pt in enumerate(self.points):
            if _cmp_points(pt, x) <= 0:
                idx = i
            else:
                break
        return self.values[idx]

    def _combine(self, other: "StepFn", op) -> "StepFn":
        pts = sort_points(set(self.points) | set(other.points))
        if not pts:
            return StepFn.const(op(self.constant, other.constant))
        return StepFn(pts, [op(self.at(x), other.at(x)) for x in pts])

    def __add__(self, other: "StepFn") -> "StepFn":
        return self._combine(other, lambda u, v: u + v)

    def __sub__(self, other: "StepFn") -> "StepFn":
        return self._combine(other, lambda u, v: u - v)

    def __neg__(self) -> "StepFn":
        return self.scale(-1)

    def scale(self, k: int) -> "StepFn":
        if not self.points:
            return StepFn.const(k * self.constant)
        return StepFn(self.points, [k * v for v in self.values])

    def rotate(self, n: int) -> "StepFn":
        """Push forward along n steps of the rotation: breakpoints move by nθ."""
        if not self.points or n == 0:
            return self
        return StepFn([x.rotate(n) for x in self.points], self.values)

    def jumps(self) -> JumpFn:
        k = len(self.points)
        return JumpFn({self.points[i]: self.values[i] - self.values[i - 1] for i in range(k)})

    def integral(self) -> RealExpr:
        """Lebesgue integral, exact in Q + Qθ."""
        if not self.points:
            return RealExpr(self.constant)
        total = RealExpr(0)
        k = len(self.points)
        for i in range(k):
            start = self.points[i].value()
            end = self.points[(i + 1) % k].value()
            length = end - start
            if i == k - 1:
                length = length + 1
            total = total + length * self.values[i]
        return total

    def __eq__(self, other):
        return (isinstance(other, StepFn) and self.points == other.points
                and self.values == other.values and self.constant == other.constant)

    def __hash__(self):
        return hash((self.points, self.values, self.constant))

    def __repr__(self):
        if not self.points:
            return f"StepFn(const {self.constant})"
        arcs = ", ".join(f"[{x}: {v}]" for x, v in zip(self.points, self.values))
        return f"StepFn({arcs})"


def boundary_partial(s: StepFn) -> JumpFn:
    """s(x) - lim_{y -> x-} s(y) at every breakpoint."""
    return s.jumps()


def delta_b(b: Mapping[tuple, int]) -> JumpFn:
    """-m at the source x and +m at the range x + nθ for each (n, x)."""
    out: dict = {}
    for (n, x), m in b.items():
        if not m:
            continue
        out[x] = out.get(x, 0) - m
        y = x.rotate(n)
        out[y] = out.get(y, 0) + m
    return JumpFn(out)


def _clean(b: Mapping[tuple, int]) -> dict:
    return {k: int(v) for k, v in b.items() if v}


@dataclass(frozen=True)
class H0Chain:
    theta: Theta
    a: StepFn
    b: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "b", _clean(self.b))

    def __add__(self, other: "H0Chain") -> "H0Chain":
        b = dict(self.b)
        for k, v in other.b.items():
            b[k] = b.get(k, 0) + v
        return H0Chain(self.theta, self.a + other.a, b)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int) -> "H0Chain":
        return H0Chain(self.theta, self.a.scale(k), {key: k * v for key, v in self.b.items()})

    def __eq__(self, other):
        return (isinstance(other, H0Chain) and self.theta == other.theta
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.theta, self.a, frozenset(self.b.items())))


def is_cycle(c: H0Chain) -> bool:
    return (boundary_partial(c.a) + delta_b(c.b)).is_zero()


# --------------------------------------------------------------------------
# boundaries
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CMove:
    """Add ``coeff`` times the δ-boundary of the pair ((k, x + lθ), (l, x))."""
    k: int
    l: int
    x: CirclePoint
    coeff: int

    def delta(self) -> dict:
        out: dict = {}
        for key, v in (((self.l, self.x), 1), ((self.k + self.l, self.x), -1),
                       ((self.k, self.x.rotate(self.l)), 1)):
            out[key] = out.get(key, 0) + v * self.coeff
        return out


@dataclass(frozen=True)
class EMove:
    """Add the total boundary of the step function ``e`` on the arrows (n, .)."""
    n: int
    e: StepFn


def apply_move(c: H0Chain, move) -> H0Chain:
    if isinstance(move, CMove):
        b = dict(c.b)
        for key, v in move.delta().items():
            b[key] = b.get(key, 0) + v
        return H0Chain(c.theta, c.a, b)
    if isinstance(move, EMove):
        a = c.a + move.e.rotate(move.n) - move.e
        b = dict(c.b)
        for x, v in boundary_partial(move.e).coeffs.items():
            key = (move.n, x)
            b[key] = b.get(key, 0) - v
        return H0Chain(c.theta, a, b)
    raise TypeError(f"not a boundary move: {move!r}")


def apply_moves(c: H0Chain, moves: Iterable) -> H0Chain:
    for mv in moves:
        c = apply_move(c, mv)
    return c


@dataclass(frozen=True)
class Normalized:
    n: int
    m: int
    moves: tuple
    canonical: H0Chain

    def __iter__(self):
        return iter((self.n, self.m, self.moves))


def canonical_cycle(theta: Theta, n: int, m: int) -> H0Chain:
    """n + mχ_[0,θ) paired with mδ_(1,0)."""
    zero = CirclePoint(0, 0, theta)
    a = StepFn.const(n) + StepFn.indicator(zero, CirclePoint(0, 1, theta)).scale(m)
    return H0Chain(theta, a, {(1, zero): m})


def normalize_cycle(c: H0Chain) -> Normalized:
    """Reduce a cycle to n + mχ_[0,θ), mδ_(1,0) and return (n, m, moves).

    First the support of ``b`` is pushed onto the arrows (1, .) by c-moves,
    then gathered at the single arrow (1, 0) by one e-move.
    """
    if not is_cycle(c):
        raise NotACycle("chain is not a cycle: the jumps of a do not cancel δ(b)")
    theta = c.theta
    moves = []
    cur = c

    def do(mv):
        nonlocal cur
        moves.append(mv)
        cur = apply_move(cur, mv)

    while True:
        high = [key for key in cur.b if key[0] >= 2]
        if not high:
            break
        top = max(k[0] for k in high)
        for (n, x) in sort_keys([k for k in high if k[0] == top]):
            do(CMove(1, n - 1, x, cur.b[(n, x)]))
    while True:
        low = [key for key in cur.b if key[0] <= -1]
        if not low:
            break
        bottom = min(k[0] for k in low)
        for (n, x) in sort_keys([k for k in low if k[0] == bottom]):
            do(CMove(1, n, x, -cur.b[(n, x)]))
    for (n, x) in sort_keys([k for k in cur.b if k[0] == 0]):
        do(CMove(0, 0, x, -cur.b[(n, x)]))
    zero = CirclePoint(0, 0, theta)
    ones = [(key[1], v) for key, v in cur.b.items()]
    m = sum(v for _, v in ones)
    if any(x != zero for x, _ in ones):
        e = StepFn.const(0)
        for x, v in ones:
            e = e + StepFn.indicator(zero, x).scale(-v)
        do(EMove(1, e))
    n = cur.a.at(CirclePoint(0, 1, theta))
    canon = canonical_cycle(theta, n, m)
    if cur != canon:
        raise AssertionError("normalization did not reach the canonical representative")
    return Normalized(n, m, tuple(moves), canon)


def sort_keys(keys):
    return sorted(keys, key=lambda k: (k[0], _point_key(k[1])))


# --------------------------------------------------------------------------
# the two embeddings and the pairing
# --------------------------------------------------------------------------


def phi0(k: int, theta: Theta) -> H0Chain:
    return H0Chain(theta, StepFn.const(k), {})


def phi1(b: JumpFn, theta: Theta) -> H0Chain:
    """(a_b, b_1) with b_1 on the arrows (1, .) and a_b(0) = b(0)."""
    b1 = {(1, x): v for x, v in b.coeffs.items()}
    zero = CirclePoint(0, 0, theta)
    a = StepFn.from_jumps(-delta_b(b1), b.at(zero), theta)
    return H0Chain(theta, a, b1)


def point_mass(x: CirclePoint, k: int = 1) -> JumpFn:
    return JumpFn({x: k})


def pair_lebesgue(c: H0Chain) -> RealExpr:
    if not is_cycle(c):
        raise NotACycle("pairing is only defined on cycles")
    return c.a.integral()


@dataclass(frozen=True)
class TorusCycle:
    """A cycle (f, v) with f constant and v of winding number ``winding``.

    It satisfies α(v) v* = exp(2πi f), i.e. f + winding·θ is an integer.
    """
    f: RealExpr
    winding: int

    def describe(self) -> str:
        return f"f = {self.f}, v(x) = exp(2πi·{self.winding}·x)"


def mapping_torus_rep(c: H0Chain) -> TorusCycle:
    norm = normalize_cycle(c)
    rep = TorusCycle(RealExpr(norm.n, norm.m), -norm.m)
    check = rep.f + RealExpr(0, rep.winding)
    if check.b != 0 or check.a.denominator != 1:
        raise AssertionError("exponential relation fails for the torus cycle")
    return rep


def lambda_tau(c: H0Chain) -> RealExpr:
    """τ(f) for the mapping-torus cycle u(t, x) = exp(2πi t f(x)) v(x)."""
    return mapping_torus_rep(c).f


def chain_from_b(b: Mapping[tuple, int], value_at_zero: int, theta: Theta) -> H0Chain:
    """The unique cycle with the given arrow part and a(0) = value_at_zero."""
    b = _clean(b)
    a = StepFn.from_jumps(-delta_b(b), value_at_zero, theta)
    return H0Chain(theta, a, b)
