"""Brute-force oracles and experiments that arbitrate certifier soundness.

Everything that feeds a verdict (image covers, gap reports, containment
checks) is exact rational arithmetic end to end; floating point appears only
in dimension estimates, which are explicitly estimates.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .certifier import Certificate
from .errors import DegenerateFit, FractarithError, ResourceBudget
from .exactnum import Interval, IntervalUnion, as_scalar, rat_to_str
from .exprfn import Expr, eval_interval
from .ifs_core import HomogeneousIfs, Word, get_budget
from .qexp import QuasiGreedyStream, as_base


# ---------------------------------------------------------------------------
# Image covers
# ---------------------------------------------------------------------------

def image_cover(k1: HomogeneousIfs, k2: HomogeneousIfs, f: Expr, depth: int,
                budget: int | None = None,
                x_window: Interval | None = None,
                y_window: Interval | None = None,
                word1: Word = (), word2: Word = ()) -> IntervalUnion:
    """Union over all rank-`depth` cylinder rectangle pairs of the interval
    enclosure of f, merged.  A superset of the true image over the covered
    part of K1 x K2 that shrinks onto it as the depth grows.

    Windows keep only cylinders contained in them; words restrict to
    descendants of fixed cylinders.
    """
    budget = budget if budget is not None else get_budget()
    xs = k1.cylinders(depth, budget=budget, within=word1)
    ys = k2.cylinders(depth, budget=budget, within=word2)
    if x_window is not None:
        xs = [iv for iv in xs if iv.is_subset(x_window)]
    if y_window is not None:
        ys = [iv for iv in ys if iv.is_subset(y_window)]
    if len(xs) * len(ys) > budget:
        raise ResourceBudget(
            f"{len(xs)}x{len(ys)} rectangles exceed budget {budget}")
    pieces = []
    for ix in xs:
        for iy in ys:
            enc = eval_interval(f, ix, iy)
            pieces.append((enc.lo, enc.hi))
    return IntervalUnion.from_intervals(pieces)


def gap_report(u: IntervalUnion, window: Interval) -> list[Interval]:
    """Maximal open intervals in the window missed by the union, longest
    first."""
    return u.gaps(window)


def oscillation_radius(cert: Certificate, depth: int) -> Fraction:
    """Rigorous bound on how far f moves across one rank-`depth` cell:
    lambda^depth * (max|dx|*(b-a) + max|dy|*(d-c))."""
    w1 = cert.ifs1.convex_hull().width()
    w2 = cert.ifs2.convex_hull().width()
    dxm = cert.grad.dx.abs().hi
    dym = cert.grad.dy.abs().hi
    return (cert.ifs1.ratio ** depth * dxm * w1
            + cert.ifs2.ratio ** depth * dym * w2)


def oracle_check(cert: Certificate, depth: int, budget: int | None = None) -> bool:
    """Independent containment check of a certificate against the brute-force
    cover of its own cylinder rectangle, inflated by the rigorous
    oscillation radius.  False is a soundness alarm."""
    if depth < max(len(cert.word1), len(cert.word2)):
        raise FractarithError("oracle depth must reach the certificate words")
    cover = image_cover(cert.ifs1, cert.ifs2, cert.f, depth, budget=budget,
                        word1=cert.word1, word2=cert.word2)
    inflated = cover.inflate(oscillation_radius(cert, depth))
    return inflated.contains_interval(cert.certified_interval)


# ---------------------------------------------------------------------------
# Univoque-set covers
# ---------------------------------------------------------------------------

def _prefix_violates(w: Sequence[int], eta: QuasiGreedyStream) -> bool:
    """True when some tail condition is already refuted by the known prefix:
    at a 0 digit the following digits exceed eta, or at a 1 digit the
    complemented ones do."""
    n = len(w)
    for k in range(n):
        flip = w[k] == 1
        for i in range(k + 1, n):
            d = w[i] ^ 1 if flip else w[i]
            e = eta.digit(i - k - 1)
            if e is None or d < e:
                break
            if d > e:
                return True
    return False


def uq_cover(q, depth: int, budget: int | None = None) -> IntervalUnion:
    """Superset of the univoque set from the binary prefix tree pruned by the
    lexicographic conditions against the computed quasi-greedy window."""
    q = as_base(q)
    budget = budget if budget is not None else get_budget()
    eta = QuasiGreedyStream(q)
    survivors: list[tuple[int, ...]] = [()]
    for _ in range(depth):
        nxt = []
        for w in survivors:
            for d in (0, 1):
                cand = w + (d,)
                if not _prefix_violates(cand, eta):
                    nxt.append(cand)
        if len(nxt) > budget:
            raise ResourceBudget(f"{len(nxt)} surviving prefixes exceed budget")
        survivors = nxt
    inv = 1 / q
    tail = inv ** depth / (q - 1)
    pieces = []
    for w in survivors:
        val = as_scalar(0)
        p = as_scalar(1)
        for d in w:
            p = p * inv
            if d:
                val = val + p
        pieces.append((val, val + tail))
    return IntervalUnion.from_intervals(pieces)


# ---------------------------------------------------------------------------
# Box-counting dimension estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DimEstimate:
    """Least-squares slope of log N_k against -k*log(lambda), with the RMS
    residual as an honesty metric."""

    counts: tuple[tuple[int, int], ...]
    slope: float
    residual: float


def box_dim_estimate(counts: Iterable[tuple[int, int]], ratio) -> DimEstimate:
    """Fit log N_k = slope * (-k log lambda) + c by least squares."""
    pairs = tuple((int(k), int(n)) for k, n in counts)
    if len(pairs) < 3:
        raise FractarithError("need at least 3 ranks")
    if any(n <= 0 for _, n in pairs):
        raise FractarithError("box counts must be positive")
    if len({n for _, n in pairs}) == 1:
        raise DegenerateFit("constant box counts")
    lam = float(Fraction(ratio)) if not isinstance(ratio, float) else ratio
    xs = [-k * math.log(lam) for k, _ in pairs]
    ys = [math.log(n) for _, n in pairs]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    sxx = sum((x - xbar) ** 2 for x in xs)
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    c = ybar - slope * xbar
    residual = math.sqrt(sum((y - (slope * x + c)) ** 2 for x, y in zip(xs, ys)) / len(xs))
    return DimEstimate(counts=pairs, slope=slope, residual=residual)


def ifs_box_counts(k: HomogeneousIfs, ranks: Iterable[int],
                   budget: int | None = None) -> list[tuple[int, int]]:
    """Natural-scale box counts: the number of distinct rank-k basic
    intervals (boxes of size lambda^k * hull width, no double counting)."""
    return [(r, k.cylinder_count(r, budget=budget)) for r in ranks]


def grid_box_count(u: IntervalUnion, size: Fraction, anchor: Fraction = Fraction(0)) -> int:
    """Boxes [anchor + j*size, anchor + (j+1)*size] needed to cover the union
    (boundary-only touching not counted); exact index arithmetic."""
    size = Fraction(size)
    if size <= 0:
        raise FractarithError("box size must be positive")
    count = 0
    last: int | None = None
    for lo, hi in u:
        u_ = Fraction(lo) - anchor
        v_ = Fraction(hi) - anchor
        if v_ == u_:
            j_min = j_max = u_ // size
        else:
            j_min = u_ // size
            j_max = v_ // size - 1 if v_ % size == 0 else v_ // size
        if last is not None and j_min <= last:
            j_min = last + 1
        if j_max >= j_min:
            count += int(j_max - j_min) + 1
            last = int(j_max)
    return count


def uq_product_counts(q, f: Expr, ranks: Iterable[int],
                      budget: int | None = None) -> list[tuple[int, int]]:
    """Grid box counts at scale q^-k for covers of f over U_q x U_q built
    from pruned-prefix covers; inspection-grade input for trend tables."""
    q = as_base(q)
    if not isinstance(q, Fraction):
        raise FractarithError("trend tables require a rational base")
    out = []
    for r in ranks:
        cover = uq_cover(q, r, budget=budget)
        pieces = []
        for ix_lo, ix_hi in cover:
            for iy_lo, iy_hi in cover:
                enc = eval_interval(f, Interval(ix_lo, ix_hi), Interval(iy_lo, iy_hi))
                pieces.append((enc.lo, enc.hi))
        union = IntervalUnion.from_intervals(pieces)
        out.append((r, grid_box_count(union, q ** (-r))))
    return out


# ---------------------------------------------------------------------------
# CSV / SVG emission
# ---------------------------------------------------------------------------

def write_intervals_csv(path: str, u: IntervalUnion) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lo", "hi"])
        for lo, hi in u:
            writer.writerow([rat_to_str(Fraction(lo)), rat_to_str(Fraction(hi))])


def write_counts_csv(path: str, pairs: Iterable[tuple[int, int]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "count"])
        for k, n in pairs:
            writer.writerow([k, n])


def write_union_svg(path: str, unions_by_rank: Sequence[tuple[int, IntervalUnion]],
                    width: int = 800, row_height: int = 24) -> None:
    """Horizontal bar stacks, one row per rank."""
    if not unions_by_rank:
        raise FractarithError("nothing to draw")
    hulls = [u.hull() for _, u in unions_by_rank if not u.is_empty()]
    if not hulls:
        raise FractarithError("all unions empty")
    lo = min(float(Fraction(h.lo)) for h in hulls)
    hi = max(float(Fraction(h.hi)) for h in hulls)
    span = (hi - lo) or 1.0
    height = row_height * len(unions_by_rank)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for row, (rank, u) in enumerate(unions_by_rank):
        y = row * row_height + 4
        lines.append(f'<text x="2" y="{y + row_height // 2}" font-size="10">k={rank}</text>')
        for seg_lo, seg_hi in u:
            x0 = 40 + (float(Fraction(seg_lo)) - lo) / span * (width - 48)
            x1 = 40 + (float(Fraction(seg_hi)) - lo) / span * (width - 48)
            w = max(x1 - x0, 0.5)
            lines.append(
                f'<rect x="{x0:.2f}" y="{y}" width="{w:.2f}" '
                f'height="{row_height - 8}" fill="#336699"/>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines))
