import json
import math
import warnings

import numpy as np
import pytest

from ntradar.analytic_perf import (
    RocCurve,
    RocFamily,
    pd_d0_largeN,
    pd_d0_small_rho,
    pd_rhohat_exact,
    pd_rhohat_largeN,
    pd_small_rho_marcum,
    required_nrho2,
    rhohat_null_threshold,
    rhohat_pdf,
    roc_curve,
)
from ntradar.errors import DomainError, ValidityWarning

from oracles import gauss_panel_integral

PFA_DECADES = [10.0**-k for k in range(1, 11)]


class TestD0Curves:
    def test_chance_line(self):
        for pfa in PFA_DECADES:
            assert pd_d0_largeN(pfa, 0.0, 1000) == pytest.approx(pfa, rel=1e-9)
            assert pd_d0_small_rho(pfa, 0.0) == pytest.approx(pfa, rel=1e-9)

    def test_quarter_phase_kills_shift(self):
        assert pd_d0_largeN(1e-3, 0.4, 5000, phi=math.pi / 2) == pytest.approx(
            1e-3, rel=1e-9
        )

    def test_increasing_in_nrho2(self):
        vals = [pd_d0_small_rho(1e-4, x) for x in np.linspace(0.0, 40.0, 81)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_first_order_consistency_small_rho(self):
        # full large-N expression at rho=0.05 vs the nrho2-only form
        full = pd_d0_largeN(1e-6, 0.05, 10_000, phi=0.0)
        first = pd_d0_small_rho(1e-6, 25.0)
        assert abs(full - first) <= 1e-3

    def test_monotone_in_pfa(self):
        for x in (4.0, 16.0):
            vals = [pd_d0_small_rho(p, x) for p in sorted(PFA_DECADES)]
            assert all(b >= a for a, b in zip(vals, vals[1:]))


class TestMarcumCurves:
    def test_chance_line(self):
        for pfa in PFA_DECADES:
            assert pd_small_rho_marcum(pfa, 0.0) == pytest.approx(pfa, rel=1e-9)
            assert pd_rhohat_largeN(pfa, 0.0, 200) == pytest.approx(pfa, rel=1e-9)

    def test_frozen_values(self):
        # frozen from the arbitrary-precision Rice-density oracle
        assert pd_small_rho_marcum(1e-2, 9.0) == pytest.approx(
            0.911239632671, rel=1e-10
        )
        # the worked-example point: the prose quotes ~0.95 off the figure, the
        # exact value is 0.971062466
        assert pd_small_rho_marcum(1e-6, 25.0) == pytest.approx(
            0.971062465977, rel=1e-10
        )

    def test_pfa_to_one_limit(self):
        assert pd_rhohat_largeN(0.9999, 0.3, 500) > 0.9999

    def test_validity_warning_below_n100(self):
        with pytest.warns(ValidityWarning):
            pd_rhohat_largeN(1e-3, 0.3, 99)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            pd_rhohat_largeN(1e-3, 0.3, 100)

    def test_large_n_vs_exact(self):
        exact = pd_rhohat_exact(1e-4, 0.5, 100)
        approx = pd_rhohat_largeN(1e-4, 0.5, 100)
        assert abs(exact - approx) <= 2e-2

    def test_small_rho_limit(self):
        # rho -> 0 at fixed nrho2: difference <= 1e-4 at rho = 0.01
        for pfa in (1e-2, 1e-4, 1e-6):
            full = pd_rhohat_largeN(pfa, 0.01, 160_000)
            first = pd_small_rho_marcum(pfa, 16.0)
            assert abs(full - first) <= 1e-4

    def test_coalescence_approximate(self):
        # (N, rho) and (4N, rho/2) agree within 1e-3 for rho <= 0.05, N >= 1e4
        for pfa in (1e-2, 1e-6):
            a = pd_rhohat_largeN(pfa, 0.05, 10_000)
            b = pd_rhohat_largeN(pfa, 0.025, 40_000)
            assert abs(a - b) <= 1e-3


class TestRhohatPdf:
    def test_null_closed_form(self):
        for n in (2, 10, 100):
            for x in (0.05, 0.3, 0.7, 0.95):
                expected = 2.0 * (n - 1) * x * (1.0 - x * x) ** (n - 2)
                assert rhohat_pdf(x, 0.0, n) == pytest.approx(expected, rel=1e-12)

    def test_null_n2_is_linear(self):
        assert rhohat_pdf(0.25, 0.0, 2) == pytest.approx(0.5, rel=1e-14)

    def test_endpoints(self):
        assert rhohat_pdf(0.0, 0.3, 10) == 0.0
        assert rhohat_pdf(1.0, 0.3, 10) == 0.0
        assert rhohat_pdf(1.0, 0.3, 2) > 0.0

    @pytest.mark.parametrize("rho", [0.0, 0.3, 0.9])
    @pytest.mark.parametrize("n", [2, 10, 100])
    def test_normalization(self, rho, n):
        total = gauss_panel_integral(lambda x: rhohat_pdf(x, rho, n), 0.0, 1.0,
                                     panels=128, order=24)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_domain(self):
        with pytest.raises(DomainError):
            rhohat_pdf(0.5, 0.3, 1)
        with pytest.raises(DomainError):
            rhohat_pdf(1.5, 0.3, 10)
        with pytest.raises(DomainError):
            rhohat_pdf(0.5, 1.0, 10)


class TestNullThreshold:
    def test_closed_form_n2(self):
        assert rhohat_null_threshold(1e-2, 2) == pytest.approx(
            math.sqrt(1.0 - 0.01), rel=1e-12
        )

    def test_asymptotic_consistency(self):
        t = rhohat_null_threshold(1e-2, 10_000)
        t_asym = math.sqrt(-2.0 * math.log(1e-2)) / math.sqrt(2.0 * 10_000)
        assert abs(t - t_asym) / t_asym <= 0.01

    @pytest.mark.parametrize("pfa", [0.0, 1.0, 1.5])
    def test_domain(self, pfa):
        with pytest.raises(DomainError):
            rhohat_null_threshold(pfa, 100)


class TestRhohatExact:
    def test_chance_line(self):
        for pfa in (1e-1, 1e-3, 1e-6):
            assert pd_rhohat_exact(pfa, 0.0, 50) == pytest.approx(pfa, abs=1e-8)

    def test_large_rho_exceeds_small_rho_curve(self):
        # at rho = 0.5 the nrho2-collapsed curve understates the detector
        assert pd_rhohat_exact(1e-4, 0.5, 100) >= pd_small_rho_marcum(1e-4, 25.0)

    def test_moderate_rho_gap_small(self):
        for pfa in (1e-2, 1e-4, 1e-6):
            for nrho2 in (5.0, 20.0):
                n = int(round(nrho2 / 0.04))
                gap = abs(
                    pd_rhohat_exact(pfa, 0.2, n) - pd_small_rho_marcum(pfa, nrho2)
                )
                assert gap <= 0.02

    def test_matches_large_n_asymptotic(self):
        # N >= 1000, rho <= 0.1: within 5e-3
        for rho, n in ((0.1, 1000), (0.05, 2000)):
            a = pd_rhohat_exact(1e-3, rho, n)
            b = pd_rhohat_largeN(1e-3, rho, n)
            assert abs(a - b) <= 5e-3


class TestRequiredNrho2:
    def test_worked_example_exact_value(self):
        # arbitrary-precision inversion gives 23.2403990595; the prose's
        # figure-reading quotes ~25 (see the acceptance suite for the gate)
        val = required_nrho2(0.95, 1e-6, RocFamily.RHOHAT_SMALL_RHO)
        assert val == pytest.approx(23.2403990595, rel=1e-8)

    def test_forward_roundtrip(self):
        for family, fn in (
            (RocFamily.RHOHAT_SMALL_RHO, pd_small_rho_marcum),
            (RocFamily.D0_FIRST_ORDER, pd_d0_small_rho),
        ):
            for pd in (0.5, 0.9, 0.999):
                for pfa in (1e-2, 1e-8):
                    x = required_nrho2(pd, pfa, family)
                    assert fn(pfa, x) == pytest.approx(pd, rel=1e-8)

    def test_chance_line_limit(self):
        pfa = 1e-3
        val = required_nrho2(pfa * (1.0 + 1e-9), pfa, RocFamily.RHOHAT_SMALL_RHO)
        assert 0.0 < val < 1e-6

    def test_below_chance_rejected(self):
        with pytest.raises(DomainError):
            required_nrho2(0.5, 0.5, RocFamily.RHOHAT_SMALL_RHO)
        with pytest.raises(DomainError):
            required_nrho2(0.1, 0.5, RocFamily.D0_FIRST_ORDER)

    def test_non_invertible_family_rejected(self):
        with pytest.raises(DomainError):
            required_nrho2(0.9, 1e-3, RocFamily.RHOHAT_EXACT)


class TestRocCurve:
    def test_diagonal_at_zero_rho(self):
        grid = [1e-4, 1e-3, 1e-2, 1e-1]
        curve = roc_curve(RocFamily.RHOHAT_SMALL_RHO, grid, nrho2=0.0)
        assert np.allclose(curve.pd, grid, rtol=1e-9)

    def test_paper_grid_at_25(self):
        grid = [1e-10, 1e-8, 1e-6, 1e-4, 1e-2]
        curve = roc_curve(RocFamily.RHOHAT_SMALL_RHO, grid, nrho2=25.0)
        expected = [pd_small_rho_marcum(p, 25.0) for p in grid]
        assert np.allclose(curve.pd, expected, rtol=0.0)
        assert curve.provenance["nrho2"] == 25.0

    def test_single_point(self):
        curve = roc_curve(RocFamily.D0_FIRST_ORDER, [1e-2], nrho2=9.0)
        assert curve.pfa.size == 1

    def test_exact_family(self):
        curve = roc_curve(RocFamily.RHOHAT_EXACT, [1e-3, 1e-2], rho=0.3, n=50)
        assert curve.pd[1] >= curve.pd[0]

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            roc_curve(RocFamily.D0_FIRST_ORDER, [1e-2, 1e-3], nrho2=4.0)
        with pytest.raises(DomainError):
            roc_curve(RocFamily.D0_FIRST_ORDER, [], nrho2=4.0)
        with pytest.raises(DomainError):
            roc_curve(RocFamily.D0_FIRST_ORDER, [0.5, 1.5], nrho2=4.0)

    def test_missing_params(self):
        with pytest.raises(DomainError):
            roc_curve(RocFamily.RHOHAT_SMALL_RHO, [1e-2])
        with pytest.raises(DomainError):
            roc_curve(RocFamily.RHOHAT_LARGE_N, [1e-2], nrho2=4.0)

    def test_curve_invariants_enforced(self):
        with pytest.raises(DomainError):
            RocCurve(pfa=np.array([1e-3, 1e-2]), pd=np.array([0.9, 0.5]))
        with pytest.raises(DomainError):
            RocCurve(pfa=np.array([1e-3, 1e-2]), pd=np.array([0.5, 1.2]))

    def test_csv_and_json(self, tmp_path):
        curve = roc_curve(
            RocFamily.RHOHAT_SMALL_RHO, [1e-4, 1e-2], nrho2=16.0
        )
        csv_path = tmp_path / "curve.csv"
        curve.to_csv(csv_path)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "pfa,pd"
        assert len(lines) == 3
        json_path = tmp_path / "curve.json"
        curve.to_json(json_path)
        payload = json.loads(json_path.read_text())
        assert payload["provenance"]["family"] == "rhohat_small_rho"
        assert len(payload["points"]) == 2
        assert payload["points"][0]["pfa"] == 1e-4
