"""Certified containment of closed intervals in f(K1, K2).

The decision procedure has two layers:

* a pointwise three-way ratio test (lower bound < |df/dy / df/dx| < upper
  bound) reported as a ConditionReport, and

* a rectangle certifier that verifies, with exact arithmetic, scale-free
  chaining inequalities strong enough to glue the images of all deeper
  cylinder grids into one closed interval.  The inequalities are non-strict:
  bounding the partials uniformly over the whole rectangle removes the
  asymptotic slack a pointwise-limit argument would need, and lets exact
  ties (touching pieces, as in the Cantor sumset) chain into closed
  intervals.

A Certificate carries everything needed to replay the check from its
serialized form alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (CertificationFailure, DomainError, ExhaustedDepth,
                     FractarithError, MarginNegative, ResourceBudget,
                     SignIndefinite)
from .exactnum import (Interval, Scalar, rat_from_str, rat_to_str,
                       scalar_sign, scalar_to_str)
from .exprfn import (Expr, GradEnclosure, Neg, Var, eval_interval, eval_point,
                     grad_enclosure, parse, sneg, substitute, to_text)
from .ifs_core import Code, HomogeneousIfs, Word, get_budget, locate

FORMAT_TAG = "fractarith-cert-v1"

_INF = float("inf")

_ser_scalar = scalar_to_str


@dataclass(frozen=True)
class SignCase:
    """Signs of the two partials over a rectangle, each +1 or -1."""

    sx: int
    sy: int

    def __str__(self) -> str:
        return ("+" if self.sx > 0 else "-") + ("+" if self.sy > 0 else "-")


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the pointwise ratio condition over one cylinder rectangle."""

    ratio_enclosure: Interval
    lower_bound: Scalar
    upper_bound: object  # Scalar, or math.inf when the second set is gapless
    holds: str  # "yes" | "no" | "undecided"

    def to_obj(self) -> dict:
        return {
            "ratio": self.ratio_enclosure.to_obj(),
            "lower_bound": rat_to_str(Fraction(self.lower_bound)),
            "upper_bound": "inf" if self.upper_bound == _INF else rat_to_str(Fraction(self.upper_bound)),
            "holds": self.holds,
        }


@dataclass(frozen=True)
class Reduction:
    """Canonical (+,+) form of a certification problem.

    Negating f and/or reflecting one set flips partial-derivative signs; the
    certified interval maps back through negation when `negate` is set.
    """

    f: Expr
    k1: HomogeneousIfs
    k2: HomogeneousIfs
    reflect1: bool
    reflect2: bool
    negate: bool


@dataclass(frozen=True)
class Certificate:
    """Replayable proof that certified_interval is contained in f(K1, K2)
    restricted to the cylinder rectangle word1 x word2.

    Margins are the scale-free chaining slacks of the recorded orientation:
    "k1-blocks" chains the second set's digits inside a first-set block,
    "k2-blocks" is the transpose.  Both margins are non-negative in a valid
    certificate, and the interval endpoints are f at the monotone-extreme
    corners of the rectangle, which are attractor points.
    """

    ifs1: HomogeneousIfs
    ifs2: HomogeneousIfs
    f: Expr
    word1: Word
    word2: Word
    sign_case: SignCase
    grad: GradEnclosure
    orientation: str  # "k1-blocks" | "k2-blocks"
    m_row: Scalar
    m_gap: Scalar
    certified_interval: Interval

    def to_obj(self) -> dict:
        return {
            "format": FORMAT_TAG,
            "ifs1": self.ifs1.to_obj(),
            "ifs2": self.ifs2.to_obj(),
            "f": to_text(self.f),
            "word1": list(self.word1),
            "word2": list(self.word2),
            "sign_case": str(self.sign_case),
            "grad": {
                "dx": self.grad.dx.to_obj(),
                "dy": self.grad.dy.to_obj(),
                "rect": [self.grad.rect[0].to_obj(), self.grad.rect[1].to_obj()],
            },
            "orientation": self.orientation,
            "m_row": _ser_scalar(self.m_row),
            "m_gap": _ser_scalar(self.m_gap),
            "certified_interval": self.certified_interval.to_obj(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_obj(obj: dict) -> "Certificate":
        if obj.get("format") != FORMAT_TAG:
            raise FractarithError(f"unknown certificate format {obj.get('format')!r}")
        sc = obj["sign_case"]
        grad = obj["grad"]

        def iv(pair) -> Interval:
            return Interval(rat_from_str(pair[0]), rat_from_str(pair[1]))

        return Certificate(
            ifs1=HomogeneousIfs.from_obj(obj["ifs1"]),
            ifs2=HomogeneousIfs.from_obj(obj["ifs2"]),
            f=parse(obj["f"]),
            word1=tuple(obj["word1"]),
            word2=tuple(obj["word2"]),
            sign_case=SignCase(1 if sc[0] == "+" else -1, 1 if sc[1] == "+" else -1),
            grad=GradEnclosure(dx=iv(grad["dx"]), dy=iv(grad["dy"]),
                               rect=(iv(grad["rect"][0]), iv(grad["rect"][1]))),
            orientation=obj["orientation"],
            m_row=rat_from_str(obj["m_row"]),
            m_gap=rat_from_str(obj["m_gap"]),
            certified_interval=iv(obj["certified_interval"]),
        )

    @staticmethod
    def from_json(text: str) -> "Certificate":
        return Certificate.from_obj(json.loads(text))


# ---------------------------------------------------------------------------
# Pointwise condition
# ---------------------------------------------------------------------------

def require_shared_ratio(k1: HomogeneousIfs, k2: HomogeneousIfs) -> None:
    """The chaining inequalities are scale-free only when both systems
    contract by the same ratio; everything here assumes that."""
    try:
        same = k1.ratio == k2.ratio
    except FractarithError:
        same = False
    if not same:
        raise FractarithError(
            f"the two systems must share one contraction ratio "
            f"(got {k1.ratio} and {k2.ratio})")


def condition_bounds(k1: HomogeneousIfs, k2: HomogeneousIfs) -> tuple[Scalar, object]:
    """(kappa1/(d-c), ratio*(b-a)/kappa2); upper bound infinite when the
    second set has no gaps."""
    require_shared_ratio(k1, k2)
    p1 = k1.gap_profile()
    p2 = k2.gap_profile()
    lower = p1.kappa / p2.hull.width()
    if scalar_sign(p2.kappa) == 0:
        return lower, _INF
    upper = k1.ratio * p1.hull.width() / p2.kappa
    return lower, upper


def ratio_over_rect(f: Expr, rect: tuple[Interval, Interval]) -> tuple[Interval, GradEnclosure]:
    """|df/dy / df/dx| enclosed over the rectangle; the df/dx enclosure must
    exclude 0."""
    grad = grad_enclosure(f, rect)
    if grad.dx.contains_zero():
        raise SignIndefinite(f"df/dx enclosure {grad.dx} contains 0 on {rect}")
    return grad.dy.abs() / grad.dx.abs(), grad


def check_pointwise(k1: HomogeneousIfs, k2: HomogeneousIfs, f: Expr,
                    point: tuple, depth: int) -> ConditionReport:
    """Pointwise three-way ratio test, with the ratio enclosed over the
    rank-`depth` cylinder rectangle containing the point."""
    w1 = locate(k1, point[0], depth)
    w2 = locate(k2, point[1], depth)
    rect = (k1.basic_interval(w1), k2.basic_interval(w2))
    ratio, _ = ratio_over_rect(f, rect)
    lower, upper = condition_bounds(k1, k2)
    if lower < ratio.lo and (upper == _INF or ratio.hi < upper):
        holds = "yes"
    elif not (lower < ratio.hi) or (upper != _INF and not (ratio.lo < upper)):
        holds = "no"
    else:
        holds = "undecided"
    return ConditionReport(ratio_enclosure=ratio, lower_bound=lower,
                           upper_bound=upper, holds=holds)


@dataclass(frozen=True)
class GlobalConditionReport:
    holds: bool
    lambda_b_minus_a: Scalar
    kappa2: Scalar
    kappa1: Scalar
    d_minus_c: Scalar

    def to_obj(self) -> dict:
        return {
            "holds": self.holds,
            "lambda*(b-a)": rat_to_str(Fraction(self.lambda_b_minus_a)),
            "kappa2": rat_to_str(Fraction(self.kappa2)),
            "kappa1": rat_to_str(Fraction(self.kappa1)),
            "d-c": rat_to_str(Fraction(self.d_minus_c)),
        }


def check_global_condition(k1: HomogeneousIfs, k2: HomogeneousIfs) -> GlobalConditionReport:
    """Global strict condition: lambda*(b-a) > kappa2 and kappa1 < d-c."""
    require_shared_ratio(k1, k2)
    p1 = k1.gap_profile()
    p2 = k2.gap_profile()
    lhs = k1.ratio * p1.hull.width()
    holds = (p2.kappa < lhs) and (p1.kappa < p2.hull.width())
    return GlobalConditionReport(holds=holds, lambda_b_minus_a=lhs, kappa2=p2.kappa,
                      kappa1=p1.kappa, d_minus_c=p2.hull.width())


# ---------------------------------------------------------------------------
# Sign-case reduction
# ---------------------------------------------------------------------------

def sign_case_of(grad: GradEnclosure) -> SignCase:
    if grad.dx.contains_zero() or grad.dy.contains_zero():
        raise SignIndefinite(
            f"gradient enclosure dx={grad.dx}, dy={grad.dy} contains 0")
    return SignCase(sx=1 if grad.dx.strictly_positive() else -1,
                    sy=1 if grad.dy.strictly_positive() else -1)


def reduce_sign_case(f: Expr, sign_case: SignCase, k1: HomogeneousIfs,
                     k2: HomogeneousIfs) -> Reduction:
    """Bring the problem to canonical (+,+) form.

    (-,-) negates f (output negated back); a single negative partial is
    absorbed by substituting the negated variable and reflecting that set,
    which keeps f's values and hence the certified interval unchanged.
    """
    sx, sy = sign_case.sx, sign_case.sy
    if sx > 0 and sy > 0:
        return Reduction(f, k1, k2, False, False, False)
    if sx < 0 and sy < 0:
        return Reduction(sneg(f), k1, k2, False, False, True)
    if sx > 0 and sy < 0:
        f2 = substitute(f, "y", Neg(Var("y")))
        return Reduction(f2, k1, k2.reflect(), False, True, False)
    f2 = substitute(f, "x", Neg(Var("x")))
    return Reduction(f2, k1.reflect(), k2, True, False, False)


# ---------------------------------------------------------------------------
# Rectangle certification
# ---------------------------------------------------------------------------

def _initial_grid_chains(k1: HomogeneousIfs, k2: HomogeneousIfs, f: Expr,
                         w1: Word, w2: Word, budget: int) -> None:
    """For words of unequal rank, verify that the union of cell images at the
    equalized starting rank is one interval (exact corner comparisons; f is
    increasing in both variables here).

    Image endpoints pass through eval_point, so irrational corner values are
    compared by their outward enclosures, which only ever under-approximates
    connectivity (inward-safe)."""
    k0 = max(len(w1), len(w2))
    if len(w1) == len(w2):
        return
    xs = k1.cylinders(k0, budget=budget, within=w1)
    ys = k2.cylinders(k0, budget=budget, within=w2)
    if len(xs) * len(ys) > budget:
        raise ResourceBudget(f"{len(xs)}x{len(ys)} starting cells exceed budget")
    cells = []
    for ix in xs:
        for iy in ys:
            lo_enc = eval_point(f, ix.lo, iy.lo)
            hi_enc = eval_point(f, ix.hi, iy.hi)
            cells.append((lo_enc, hi_enc))
    cells.sort(key=lambda c: (c[0].lo, c[1].lo))
    reach = cells[0][1].lo
    for lo_enc, hi_enc in cells[1:]:
        if reach < lo_enc.hi:
            raise MarginNegative("initial-rank seam", reach - lo_enc.hi)
        if reach < hi_enc.lo:
            reach = hi_enc.lo


def _margins(red_k1: HomogeneousIfs, red_k2: HomogeneousIfs,
             dx: Interval, dy: Interval) -> dict[str, tuple[Scalar, Scalar]]:
    """Scale-free chaining slacks for both nesting orientations, computed in
    the reduced frame where both partials are positive."""
    p1 = red_k1.gap_profile()
    p2 = red_k2.gap_profile()
    lam = red_k1.ratio
    w1 = p1.hull.width()
    w2 = p2.hull.width()
    return {
        "k1-blocks": (lam * w1 * dx.lo - p2.kappa * dy.hi,
                      w2 * dy.lo - p1.kappa * dx.hi),
        "k2-blocks": (lam * w2 * dy.lo - p1.kappa * dx.hi,
                      w1 * dx.lo - p2.kappa * dy.hi),
    }


def certify_rectangle(k1: HomogeneousIfs, k2: HomogeneousIfs, f: Expr,
                      word1: Sequence[int], word2: Sequence[int],
                      budget: int | None = None) -> Certificate:
    """Certify that f over the cylinder rectangle word1 x word2 is exactly
    the closed interval between its monotone-extreme corner values.

    Checks, with exact arithmetic after sign-case reduction to (+,+):
    sign-definite partial enclosures over the rectangle; the within-block
    chaining slack m_row and the gap-crossing slack m_gap, both >= 0, for at
    least one nesting orientation; and, when the words have unequal rank,
    that the starting grid of equalized-rank cells glues into one interval.
    Failure names the first violated inequality with its exact margin.
    """
    budget = budget if budget is not None else get_budget()
    require_shared_ratio(k1, k2)
    word1 = tuple(word1)
    word2 = tuple(word2)
    rect = (k1.basic_interval(word1), k2.basic_interval(word2))
    eval_interval(f, *rect)  # DomainError if f itself is undefined somewhere
    grad = grad_enclosure(f, rect)  # likewise for the partials
    sign_case = sign_case_of(grad)
    red = reduce_sign_case(f, sign_case, k1, k2)

    rw1 = k1.reflect_word(word1) if red.reflect1 else word1
    rw2 = k2.reflect_word(word2) if red.reflect2 else word2
    red_rect = (red.k1.basic_interval(rw1), red.k2.basic_interval(rw2))
    red_grad = grad_enclosure(red.f, red_rect)
    if not (red_grad.dx.strictly_positive() and red_grad.dy.strictly_positive()):
        raise SignIndefinite("reduced gradient not strictly positive")

    margins = _margins(red.k1, red.k2, red_grad.dx, red_grad.dy)
    orientation = None
    for name in ("k1-blocks", "k2-blocks"):
        m_row, m_gap = margins[name]
        if scalar_sign(m_row) >= 0 and scalar_sign(m_gap) >= 0:
            orientation = name
            break
    if orientation is None:
        m_row, m_gap = margins["k1-blocks"]
        if scalar_sign(m_row) < 0:
            raise MarginNegative("m_row", m_row)
        raise MarginNegative("m_gap", m_gap)
    m_row, m_gap = margins[orientation]

    _initial_grid_chains(red.k1, red.k2, red.f, rw1, rw2, budget)

    lo_enc = eval_point(red.f, red_rect[0].lo, red_rect[1].lo)
    hi_enc = eval_point(red.f, red_rect[0].hi, red_rect[1].hi)
    # inward rounding keeps the certified interval inside the true image
    lo_val, hi_val = lo_enc.hi, hi_enc.lo
    if red.negate:
        lo_val, hi_val = -hi_val, -lo_val
    if hi_val < lo_val:
        raise CertificationFailure("rectangle too small to certify after rounding")
    certified = Interval(lo_val, hi_val)

    return Certificate(ifs1=k1, ifs2=k2, f=f, word1=word1, word2=word2,
                       sign_case=sign_case, grad=grad, orientation=orientation,
                       m_row=m_row, m_gap=m_gap, certified_interval=certified)


def auto_certify(k1: HomogeneousIfs, k2: HomogeneousIfs, f: Expr,
                 point: tuple[Code, Code], max_depth: int,
                 budget: int | None = None) -> Certificate:
    """Descend the cylinder pair around the coded point, returning the first
    rank at which certify_rectangle succeeds.  Deterministic."""
    code1, code2 = point
    reasons: list[tuple[int, str]] = []
    for k in range(max_depth + 1):
        try:
            return certify_rectangle(k1, k2, f, code1.prefix(k), code2.prefix(k),
                                     budget=budget)
        except (CertificationFailure, DomainError) as exc:
            reasons.append((k, f"{type(exc).__name__}: {exc}"))
    raise ExhaustedDepth(reasons)


# ---------------------------------------------------------------------------
# Replay
# ---------------------------------------------------------------------------

def replay_explain(cert: Certificate) -> tuple[bool, str | None]:
    """Re-derive every certificate field from the primary inputs and compare;
    returns (ok, first failing field)."""
    try:
        fresh = certify_rectangle(cert.ifs1, cert.ifs2, cert.f,
                                  cert.word1, cert.word2)
    except (CertificationFailure, DomainError, FractarithError) as exc:
        return False, f"re-certification failed: {exc}"
    checks = [
        ("sign_case", fresh.sign_case == cert.sign_case),
        ("grad.dx", fresh.grad.dx == cert.grad.dx),
        ("grad.dy", fresh.grad.dy == cert.grad.dy),
        ("grad.rect", fresh.grad.rect == cert.grad.rect),
        ("orientation", fresh.orientation == cert.orientation),
        ("m_row", fresh.m_row == cert.m_row and scalar_sign(cert.m_row) >= 0),
        ("m_gap", fresh.m_gap == cert.m_gap and scalar_sign(cert.m_gap) >= 0),
        ("certified_interval", fresh.certified_interval == cert.certified_interval),
    ]
    for name, ok in checks:
        if not ok:
            return False, name
    return True, None


def replay(cert: Certificate) -> bool:
    """True iff the certificate re-checks bit-exactly from scratch."""
    return replay_explain(cert)[0]
