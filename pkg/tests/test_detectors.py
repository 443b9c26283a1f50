import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntradar.detectors import (
    DetectorKind,
    DetectorStatistic,
    compute,
    declare,
    statistics_from_aux,
)
from ntradar.errors import DegenerateInputError, DomainError
from ntradar.signal_model import AuxStats, SignalParams, Variant, aux_stats, sample_block


def _aux(p1, p2, rc, rs, n=1):
    return AuxStats(p1_bar=p1, p2_bar=p2, rc_bar=rc, rs_bar=rs, n=n)


class TestCompute:
    def test_unit_example(self):
        aux = _aux(1.0, 1.0, 1.0, 0.0)
        assert compute(DetectorKind.D0, aux).value == 1.0
        assert compute(DetectorKind.RHO_HAT, aux).value == 1.0
        assert compute(DetectorKind.MATCHED_FILTER, aux).value == 1.0

    def test_zero_correlation(self):
        aux = _aux(3.7, 2.2, 0.0, 0.0)
        assert compute(DetectorKind.D0, aux).value == 0.0
        assert compute(DetectorKind.RHO_HAT, aux).value == 0.0
        assert compute(DetectorKind.MATCHED_FILTER, aux).value == 0.0

    def test_mixed_example(self):
        aux = _aux(4.0, 1.0, 1.0, 1.0)
        assert compute(DetectorKind.RHO_HAT, aux).value == pytest.approx(
            math.sqrt(0.5), rel=1e-12
        )
        assert compute(DetectorKind.MATCHED_FILTER, aux).value == pytest.approx(
            math.sqrt(2.0), rel=1e-12
        )
        assert compute(DetectorKind.D0, aux).value == 1.0

    def test_degenerate_power(self):
        with pytest.raises(DegenerateInputError):
            compute(DetectorKind.RHO_HAT, _aux(0.0, 1.0, 0.0, 0.0))

    @given(
        st.floats(min_value=0.01, max_value=100.0),
        st.floats(min_value=0.01, max_value=100.0),
        st.floats(min_value=-5.0, max_value=5.0),
        st.floats(min_value=-5.0, max_value=5.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_mf_identity(self, p1, p2, rc, rs):
        # matched filter equals rhohat * sqrt(P1 P2) on the same block means
        aux = _aux(p1, p2, rc, rs)
        mf = compute(DetectorKind.MATCHED_FILTER, aux).value
        rh = compute(DetectorKind.RHO_HAT, aux).value
        if rh < 1.0:  # the clamp at 1 breaks the identity only beyond C-S
            assert mf == pytest.approx(rh * math.sqrt(p1 * p2), rel=1e-12)

    def test_carries_kind_and_n(self):
        stat = compute(DetectorKind.D0, _aux(1.0, 1.0, 0.5, 0.1, n=42))
        assert stat.kind is DetectorKind.D0
        assert stat.n == 42


class TestScaleInvariance:
    @given(
        st.floats(min_value=1e-3, max_value=1e3),
        st.integers(min_value=0, max_value=2**31),
    )
    @settings(max_examples=30, deadline=None)
    def test_rhohat_invariant_d0_mf_quadratic(self, c, seed):
        block = sample_block(SignalParams(rho=0.6, phi=0.5), 64, seed=seed)
        aux = aux_stats(block, Variant.ROTATION)
        scaled = AuxStats(
            p1_bar=aux.p1_bar * c * c,
            p2_bar=aux.p2_bar * c * c,
            rc_bar=aux.rc_bar * c * c,
            rs_bar=aux.rs_bar * c * c,
            n=aux.n,
        )
        rh = compute(DetectorKind.RHO_HAT, aux).value
        rh_scaled = compute(DetectorKind.RHO_HAT, scaled).value
        assert rh_scaled == pytest.approx(rh, rel=1e-12)
        assert compute(DetectorKind.D0, scaled).value == pytest.approx(
            compute(DetectorKind.D0, aux).value * c * c, rel=1e-12
        )
        assert compute(DetectorKind.MATCHED_FILTER, scaled).value == pytest.approx(
            compute(DetectorKind.MATCHED_FILTER, aux).value * c * c, rel=1e-12
        )


class TestDeclare:
    def test_tie_is_no_detection(self):
        stat = DetectorStatistic(kind=DetectorKind.RHO_HAT, value=0.5, n=10)
        assert declare(stat, 0.5) is False

    def test_strictly_above(self):
        stat = DetectorStatistic(kind=DetectorKind.RHO_HAT, value=0.6, n=10)
        assert declare(stat, 0.5) is True

    def test_negative_d0_below_zero_threshold(self):
        stat = DetectorStatistic(kind=DetectorKind.D0, value=-0.2, n=10)
        assert declare(stat, 0.0) is False

    def test_threshold_must_be_finite(self):
        stat = DetectorStatistic(kind=DetectorKind.D0, value=0.0, n=1)
        with pytest.raises(DomainError):
            declare(stat, math.nan)


class TestBatch:
    def test_matches_scalar_compute(self):
        rng = np.random.default_rng(3)
        aux_rows = np.abs(rng.normal(size=(50, 4))) + 0.1
        batch = statistics_from_aux(aux_rows)
        for i in range(50):
            aux = _aux(*aux_rows[i])
            for kind in DetectorKind:
                assert batch[kind][i] == pytest.approx(
                    compute(kind, aux).value, rel=1e-14
                )
