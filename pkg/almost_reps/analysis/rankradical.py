"""
Rank Radical Estimators
Exact rank ratios rank psi_n(p) / dim V_n along Følner-built almost representations
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import pandas as pd

from almost_reps.algebra.folner import exhaustion_subspace
from almost_reps.analysis.almostrep import build_from_folner
from almost_reps.analysis.pathology import rr_ideal_bound
from almost_reps.linalg.exactlin import rank
from almost_reps.linalg.field import format_ratio
from almost_reps.utils.errors import AlmostRepError, NotInSubspaceError, SpecError


@dataclass(frozen=True)
class RankRatioRecord:
    n: int
    v_dim: int
    rank: int
    ratio: Fraction
    defect: Fraction

    def to_dict(self):
        return {
            "n": self.n,
            "v_dim": self.v_dim,
            "rank": self.rank,
            "ratio": format_ratio(self.ratio),
            "defect": format_ratio(self.defect),
        }


@dataclass
class RankRatioSeries:
    """Observed rank ratios of one element; evidence about the rank radical, never a certificate"""

    element: object
    L: object
    exhaustion: object
    records: list = dc_field(default_factory=list)

    def ratios(self):
        return [r.ratio for r in self.records]

    def min_ratio(self):
        return min(self.ratios(), default=None)

    def drops_below(self, delta, by_index=None):
        """
        First index whose ratio is below delta

        Args:
            delta: Threshold
            by_index: Only look at indices <= by_index

        Returns:
            int index, or None when the series never drops below delta
        """
        delta = Fraction(delta)
        for r in self.records:
            if by_index is not None and r.n > by_index:
                break
            if r.ratio < delta:
                return r.n
        return None

    def to_frame(self):
        return pd.DataFrame([r.to_dict() for r in self.records])


def rr_estimate(carrier, p, L, exhaustion, n_max):
    """
    Rank ratios of psi_n(p) along an exhaustion

    Args:
        carrier: Carrier
        p: AlgebraElement in L
        L: FinSubspace containing 1 and p
        exhaustion: ExhaustionSpec
        n_max: Last index

    Returns:
        RankRatioSeries for n = 1..n_max
    """
    if not L.contains(p):
        raise NotInSubspaceError(f"{p} does not lie in L")
    if n_max < 1:
        raise SpecError("n_max must be >= 1")
    series = RankRatioSeries(element=p, L=L, exhaustion=exhaustion)
    for n in range(1, n_max + 1):
        rep = build_from_folner(L, exhaustion_subspace(carrier, exhaustion, n))
        r = rank(rep.image_of(p))
        series.records.append(RankRatioRecord(n=n, v_dim=rep.v_dim, rank=r,
                                              ratio=Fraction(r, rep.v_dim), defect=rep.defect))
    return series


@dataclass
class MonotonicityReport:
    """Per-index check rank psi(ap) <= rank psi(p) + defect * dim V"""

    checks: list

    @property
    def failing_indices(self):
        return [n for n, report in self.checks if not report.passed]

    @property
    def passed(self):
        return not self.failing_indices

    def to_dict(self):
        return {
            "indices": [dict(n=n, **report.to_dict()) for n, report in self.checks],
            "failing_indices": self.failing_indices,
            "pass": self.passed,
        }


def rr_monotonicity_report(series_p, series_ap, a=None):
    """
    Ideal inequality along two series built on the same exhaustion

    Args:
        series_p: RankRatioSeries of p
        series_ap: RankRatioSeries of a*p (its L contains a, p and a*p)
        a: Optional left factor, checked against the two series elements

    Returns:
        MonotonicityReport
    """
    if series_p.exhaustion != series_ap.exhaustion:
        raise AlmostRepError("Series were built on different exhaustions")
    if [r.n for r in series_p.records] != [r.n for r in series_ap.records]:
        raise AlmostRepError("Series cover different indices")
    if a is not None and series_p.element is not None and series_ap.element is not None:
        carrier = a.carrier
        if carrier.mul(a, series_p.element) != series_ap.element:
            raise AlmostRepError("Second series is not built for the product a*p")
    checks = []
    for rp, rap in zip(series_p.records, series_ap.records):
        if rp.v_dim != rap.v_dim:
            raise AlmostRepError(f"Dimension mismatch at index {rp.n}: {rp.v_dim} vs {rap.v_dim}")
        checks.append((rp.n, rr_ideal_bound(rp.rank, rap.v_dim, rap.defect, rap.rank)))
    return MonotonicityReport(checks)
