import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.services.analysis_service import (
    APPROXIMATION_COLUMNS,
    TABLE1_COLUMNS,
    TABLE1_LOW_T_COLUMNS,
    AnalysisService,
    relative_error,
)


def _peak(analysis_service, descriptor, points=400):
    return analysis_service.sweep(analysis_service.graphs.parse(descriptor), points=points).peak[0]


# ========== SWEEPS ==========

def test_sweep_structure(analysis_service, graph_service):
    result = analysis_service.sweep(graph_service.parse("path:6"), 0.1, 10.0, 50)
    assert result.graph == "path:6"
    assert len(result.reports) == 50
    assert_allclose(result.temperatures, np.geomspace(0.1, 10.0, 50))
    assert (result.fi <= result.qfi * (1 + 1e-9)).all()
    assert result.peak[1] >= result.qfi.max()
    assert list(result.to_frame().columns)[:3] == ['T', 'qfi', 'fi']


def test_default_grid_spans_the_spectrum(analysis_service, spectral_service, graph_service):
    spectrum = spectral_service.spectrum(graph_service.parse("star:6"))
    grid = analysis_service.default_grid(spectrum, 100)
    assert grid[0] == pytest.approx(1e-2)
    assert grid[-1] == pytest.approx(6e3)
    assert grid.size == 100


@pytest.mark.parametrize("descriptor", ["complete:6", "star:10"])
def test_peak_matches_the_low_temperature_prediction(analysis_service, spectral_service, graph_service, descriptor):
    spectrum = spectral_service.spectrum(graph_service.parse(descriptor))
    e1, g1 = spectral_service.algebraic_connectivity(spectrum)
    predicted_t, predicted_value = analysis_service.thermo.qfi_low_T_peak(e1, g1)

    t_max, qfi_max = analysis_service.sweep(graph_service.parse(descriptor), points=400).peak
    assert t_max == pytest.approx(predicted_t, rel=1e-6)
    assert qfi_max == pytest.approx(predicted_value, rel=1e-9)


@pytest.mark.parametrize("order", [4, 10, 30])
def test_complete_graph_peak_law(analysis_service, graph_service, order):
    t_max, _ = analysis_service.sweep(graph_service.parse(f"complete:{order}"), points=400).peak
    assert t_max == pytest.approx(order / analysis_service.thermo.solve_xmax(order - 1), rel=1e-4)


def test_cycle_peak_moves_down_with_size(analysis_service):
    peaks = [_peak(analysis_service, f"cycle:{n}", 200) for n in (5, 8, 12, 16, 32)]
    assert all(b < a for a, b in zip(peaks, peaks[1:]))


def test_bipartite_peak_moves_up_with_balance(analysis_service):
    peaks = [_peak(analysis_service, f"bipartite:{n1},{10 - n1}", 200) for n1 in range(1, 6)]
    assert all(b > a for a, b in zip(peaks, peaks[1:]))


def test_star_has_the_highest_qfi_maximum(analysis_service, graph_service):
    heights = {
        descriptor: analysis_service.sweep(graph_service.parse(descriptor), points=200).peak[1]
        for descriptor in ["star:10", "complete:10"] + [f"bipartite:{n1},{10 - n1}" for n1 in range(2, 6)]
    }
    assert max(heights, key=heights.get) == "star:10"
    assert heights["star:10"] > heights["bipartite:5,5"]


def test_peak_on_the_grid_edge_is_returned_as_is(analysis_service, spectral_service, graph_service):
    spectrum = spectral_service.spectrum(graph_service.parse("complete:4"))
    grid = np.geomspace(100.0, 1000.0, 20)
    qfi = np.array([analysis_service.thermo.qfi(analysis_service.thermo.make_thermal(spectrum, t)) for t in grid])
    assert analysis_service.refine_peak(spectrum, grid, qfi) == (100.0, qfi[0])


@pytest.mark.parametrize("t_lo, t_hi, points", [(1.0, 0.5, 10), (0.0, 1.0, 10), (0.1, 1.0, 1)])
def test_invalid_grids(analysis_service, graph_service, t_lo, t_hi, points):
    with pytest.raises(ValueError):
        analysis_service.sweep(graph_service.parse("cycle:5"), t_lo, t_hi, points)


def test_sweep_does_not_depend_on_thread_count(graph_service, spectral_service, thermo_service):
    graph = graph_service.parse("honey:4x4:obc")
    results = [
        AnalysisService(graph_service, spectral_service, thermo_service, threads=threads).sweep(graph, points=60)
        for threads in (1, 4)
    ]
    assert results[0].to_dict() == results[1].to_dict()


# ========== FAMILY TABLE ==========

TABLE1_EXPECTED = {
    # family: (T^4 qfi_high, T^4 fi_high, ratio) for N = 16, N1 = 5
    'complete': (15.0, 0.0, 0.0),
    'cycle': (2.0, 0.0, 0.0),
    'bipartite': (220 * 68 / 1024, 220 * 36 / 1024, 36 / 68),
    'star': (15 * 228 / 256, 15 * 196 / 256, 196 / 228),
    'path': (2 * 254 / 256, 2 * 14 / 256, 14 / 254),
    'grid': (3.5, 0.5, 1 / 7),
    'torus': (4.0, 0.0, 0.0),
}


def test_high_temperature_table(analysis_service):
    frame = analysis_service.table1_report(16)
    assert list(frame.columns) == TABLE1_COLUMNS
    assert list(frame['family']) == list(TABLE1_EXPECTED)
    assert list(frame['N']) == [16] * 7

    for row in frame.itertuples():
        qfi_high, fi_high, ratio = TABLE1_EXPECTED[row.family]
        assert row.qfi_high == pytest.approx(qfi_high, rel=1e-12)
        assert row.fi_high == pytest.approx(fi_high, rel=1e-12, abs=1e-12)
        assert row.ratio_high == pytest.approx(ratio, rel=1e-12)
        assert row.qfi_dev < 0.01
        assert row.fi_dev < 0.01


def test_high_temperature_table_uses_the_given_bipartition(analysis_service):
    frame = analysis_service.table1_report(9, n1=4)
    assert frame.loc[frame['family'] == 'bipartite', 'graph'].item() == "bipartite:4,5"


@pytest.mark.parametrize("order, n1", [(10, None), (4, None), (16, 16), (16, 0)])
def test_table_rejects_invalid_sizes(analysis_service, order, n1):
    with pytest.raises(ValueError):
        analysis_service.table1_report(order, n1)


def test_low_temperature_table(analysis_service):
    frame = analysis_service.table1_low_T(16)
    assert list(frame.columns) == TABLE1_LOW_T_COLUMNS

    for row in frame.itertuples():
        assert row.E1 == pytest.approx(row.E1_closed, rel=1e-10)
        assert row.g1 == row.g1_closed
        assert row.qfi_low_closed == pytest.approx(row.qfi_low, rel=1e-8)
        assert row.qfi_exact > 0

    complete = frame[frame['family'] == 'complete'].iloc[0]
    assert complete['low_rel_error'] < 1e-10
    star = frame[frame['family'] == 'star'].iloc[0]
    assert star['low_rel_error'] < 1e-6


def test_low_temperature_table_at_a_fixed_temperature(analysis_service):
    frame = analysis_service.table1_low_T(9, temperature=0.5)
    assert (frame['T'] == 0.5).all()


@pytest.mark.parametrize("family, order, n1, expected", [
    ('bipartite', 16, 8, (8.0, 14)),
    ('bipartite', 16, 5, (5.0, 10)),
    ('star', 9, 1, (1.0, 7)),
    ('torus', 25, 8, (4 * math.sin(math.pi / 5) ** 2, 4)),
])
def test_closed_form_gaps(family, order, n1, expected):
    e1, g1 = AnalysisService.closed_form_gap(family, order, n1)
    assert e1 == pytest.approx(expected[0])
    assert g1 == expected[1]


def test_unknown_family_has_no_closed_form_gap():
    with pytest.raises(ValueError):
        AnalysisService.closed_form_gap('honey', 16, 5)


def test_xmax_table(analysis_service):
    frame = analysis_service.xmax_table(range(1, 6))
    assert list(frame.columns) == ['g1', 'x_max', 'f_max']
    assert list(frame['g1']) == [1, 2, 3, 4, 5]
    assert frame['x_max'].iloc[0] == pytest.approx(4.1302, abs=1e-3)
    assert frame['x_max'].is_monotonic_increasing
    assert (frame['f_max'] > 0).all()


# ========== APPROXIMATION QUALITY ==========

def test_approximation_report_for_a_two_level_spectrum(analysis_service, graph_service):
    report = analysis_service.approximation_report(graph_service.parse("complete:5"))
    assert list(report.table.columns) == APPROXIMATION_COLUMNS
    assert report.low_error_at_peak < 1e-10
    assert report.max_temperature_error_high < 0.01
    assert report.peak_temperature == pytest.approx(5.0 / analysis_service.thermo.solve_xmax(4), rel=1e-6)


def test_approximation_errors_on_an_explicit_grid(analysis_service, graph_service):
    grid = [0.01, 0.1, 1.0, 10.0, 100.0]
    report = analysis_service.approximation_report(graph_service.parse("path:5"), grid)
    assert list(report.table['T']) == grid
    errors = report.table['high_error'].to_numpy()
    assert errors[-1] < errors[0]
    assert report.table['low_error'].iloc[0] < 1e-3


def test_approximation_report_rejects_unsorted_grids(analysis_service, graph_service):
    with pytest.raises(ValueError):
        analysis_service.approximation_report(graph_service.parse("path:5"), [1.0, 0.5, 2.0])


@pytest.mark.parametrize("side", [4, 6, 8])
def test_honeycomb_low_temperature_error_below_triangular(analysis_service, graph_service, side):
    honeycomb = analysis_service.approximation_report(graph_service.parse(f"honey:{side}x{side}:obc"))
    triangular = analysis_service.approximation_report(graph_service.parse(f"tri:{side}x{side}:obc"))
    assert honeycomb.low_error_at_peak < triangular.low_error_at_peak
    assert honeycomb.low_error_at_peak < 0.01


def test_relative_error_against_zero():
    assert relative_error(0.0, 0.0) == 0.0
    assert relative_error(1e-3, 0.0) == 1e-3
    assert relative_error(1.1, 1.0) == pytest.approx(0.1)


# ========== COHERENCE ==========

def test_complete_graph_coherence_curve(analysis_service, graph_service):
    curve = analysis_service.coherence_curve(graph_service.parse("complete:10"), points=200)
    t_max, _ = curve.peak

    assert ((curve.coherence >= 0) & (curve.coherence <= 1)).all()
    assert (np.diff(curve.coherence) <= 1e-12).all()
    assert curve.crossing_temperature is not None
    assert t_max < curve.crossing_temperature
    assert analysis_service.thermo.coherence_complete(10, curve.crossing_temperature) == pytest.approx(
        math.exp(-1.0), abs=1e-6
    )
    at_peak = analysis_service.thermo.coherence_complete(10, t_max)
    assert 0.05 <= at_peak <= 0.95


def test_coherence_stays_above_the_threshold_when_cold(analysis_service, graph_service):
    curve = analysis_service.coherence_curve(graph_service.parse("complete:10"), 0.5, 1.0, 10)
    assert curve.crossing_temperature is None
    assert list(curve.to_frame().columns) == ['T', 'coherence', 'qfi']
