import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from src.exceptions import SpectrumError
from src.models.spectrum import Level, Spectrum
from src.services.graph_service import GraphService
from src.services.spectral_service import SpectralService
from src.services.thermo_service import ThermoService


NULL_FI_DESCRIPTORS = ["cycle:8", "complete:6", "torus:3x4", "bipartite:4,4", "bipartite:3,3"]
IRREGULAR_DESCRIPTORS = ["path:6", "star:8", "bipartite:2,5", "grid:3x3:obc", "grid:3x4:obc"]
SAMPLE_DESCRIPTORS = NULL_FI_DESCRIPTORS + IRREGULAR_DESCRIPTORS + [
    "tri:3x3:obc", "honey:4x4:obc", "trsq:2x2:obc", "prod(path:3,star:4)",
]

# hypothesis runs outside the fixture scope: build the services once
_GRAPHS = GraphService()
_SPECTRAL = SpectralService(_GRAPHS, group_tol=1e-9)
_THERMO = ThermoService(_SPECTRAL)
_SPECTRA = {}


def _spectrum(descriptor):
    if descriptor not in _SPECTRA:
        _SPECTRA[descriptor] = _SPECTRAL.spectrum(_GRAPHS.parse(descriptor))
    return _SPECTRA[descriptor]


# ========== GIBBS STATE ==========

def test_populations_and_partition_function(thermo_service, model_at):
    model = model_at("complete:4", 2.0)
    boltzmann = np.exp(-4.0 / 2.0)
    assert model.partition_function == pytest.approx(1.0 + 3.0 * boltzmann)
    assert_allclose(model.populations, [1.0, 3.0 * boltzmann] / (1.0 + 3.0 * boltzmann))
    assert thermo_service.energy_moment(model, 1) == pytest.approx(4.0 * model.populations[1])
    assert thermo_service.energy_moment(model, 2) == pytest.approx(16.0 * model.populations[1])


@pytest.mark.parametrize("temperature", [0.0, -1.0, float("nan"), float("inf")])
def test_make_thermal_rejects_invalid_temperatures(graph_service, spectral_service, thermo_service, temperature):
    spectrum = spectral_service.spectrum(graph_service.parse("cycle:5"))
    with pytest.raises(ValueError):
        thermo_service.make_thermal(spectrum, temperature)


def test_only_two_energy_moments(thermo_service, model_at):
    with pytest.raises(ValueError):
        thermo_service.energy_moment(model_at("path:4", 1.0), 3)


def test_energy_weighted_vertex_range(thermo_service, model_at):
    model = model_at("star:5", 1.0)
    total = sum(thermo_service.energy_weighted(model, j) for j in range(5))
    assert total == pytest.approx(thermo_service.energy_moment(model, 1), rel=1e-12)
    with pytest.raises(ValueError):
        thermo_service.energy_weighted(model, 5)


# ========== QUANTUM FISHER INFORMATION ==========

@pytest.mark.parametrize("order", [2, 3, 5, 8])
@pytest.mark.parametrize("temperature", [0.3, 1.0, 4.0, 25.0])
def test_complete_graph_closed_form(thermo_service, model_at, order, temperature):
    model = model_at(f"complete:{order}", temperature)
    assert thermo_service.qfi(model) == pytest.approx(
        thermo_service.qfi_complete(order, temperature), rel=1e-10
    )


@pytest.mark.parametrize("n1, n2", [(2, 3), (5, 5), (1, 9), (3, 7), (2, 2)])
@pytest.mark.parametrize("temperature", [0.5, 1.0, 3.0, 40.0])
def test_bipartite_closed_form(thermo_service, model_at, n1, n2, temperature):
    model = model_at(f"bipartite:{n1},{n2}", temperature)
    assert thermo_service.qfi_exact_bipartite(n1, n2, temperature) == pytest.approx(
        thermo_service.qfi(model), rel=1e-9
    )


@pytest.mark.parametrize("order", [3, 6, 11])
@pytest.mark.parametrize("temperature", [0.4, 2.0, 30.0])
def test_star_closed_form(thermo_service, model_at, order, temperature):
    model = model_at(f"star:{order}", temperature)
    assert thermo_service.qfi_exact_star(order, temperature) == pytest.approx(
        thermo_service.qfi(model), rel=1e-9
    )


def test_single_part_bipartite_is_the_star(thermo_service):
    assert thermo_service.qfi_exact_bipartite(1, 6, 1.3) == thermo_service.qfi_exact_star(7, 1.3)


@pytest.mark.parametrize("descriptor, closed_form", [
    ("complete:20", lambda thermo, t: thermo.qfi_complete(20, t)),
    ("star:20", lambda thermo, t: thermo.qfi_exact_star(20, t)),
    ("bipartite:10,10", lambda thermo, t: thermo.qfi_exact_bipartite(10, 10, t)),
    ("bipartite:1,9", lambda thermo, t: thermo.qfi_exact_bipartite(1, 9, t)),
    ("bipartite:5,5", lambda thermo, t: thermo.qfi_exact_bipartite(5, 5, t)),
    ("bipartite:2,3", lambda thermo, t: thermo.qfi_exact_bipartite(2, 3, t)),
])
@pytest.mark.parametrize("temperature", [0.1, 1.0, 10.0])
def test_closed_forms_at_cold_and_moderate_temperatures(thermo_service, model_at, descriptor, closed_form,
                                                         temperature):
    exact = thermo_service.qfi(model_at(descriptor, temperature))
    assert closed_form(thermo_service, temperature) == pytest.approx(exact, rel=1e-10)


# ========== POSITION MEASUREMENT ==========

@pytest.mark.parametrize("descriptor", NULL_FI_DESCRIPTORS)
@pytest.mark.parametrize("temperature", [0.2, 1.0, 10.0])
def test_position_fi_vanishes_for_uniform_eigenvectors(thermo_service, model_at, descriptor, temperature):
    model = model_at(descriptor, temperature)
    assert thermo_service.has_position_independent_overlaps(model.spectrum)
    assert thermo_service.fi_position(model) == 0.0
    assert thermo_service.fi_position_definitional(model) == pytest.approx(0.0, abs=1e-12 * (1 + thermo_service.qfi(model)))
    assert_allclose(thermo_service.position_probabilities(model), np.full(model.order, 1.0 / model.order))


@pytest.mark.parametrize("descriptor", ["cycle:8", "complete:8", "bipartite:4,4", "torus:4x4"])
def test_position_fi_vanishes_across_temperatures(thermo_service, model_at, descriptor):
    for temperature in np.geomspace(0.01, 100.0, 20):
        assert thermo_service.fi_position(model_at(descriptor, temperature)) < 1e-10


@pytest.mark.parametrize("descriptor", IRREGULAR_DESCRIPTORS)
def test_position_fi_positive_for_irregular_graphs(thermo_service, model_at, descriptor):
    model = model_at(descriptor, 1.0)
    assert not thermo_service.has_position_independent_overlaps(model.spectrum)
    assert thermo_service.fi_position(model) > 0.0


@pytest.mark.parametrize("descriptor", IRREGULAR_DESCRIPTORS + ["honey:4x4:obc", "tri:3x4:obc"])
@pytest.mark.parametrize("temperature", [0.2, 1.0, 5.0, 20.0])
def test_shortcut_matches_definitional_fi(thermo_service, model_at, descriptor, temperature):
    model = model_at(descriptor, temperature)
    shortcut = thermo_service.fi_position(model)
    definitional = thermo_service.fi_position_definitional(model)
    assert shortcut == pytest.approx(definitional, rel=1e-7, abs=1e-14 * thermo_service.qfi(model))


def test_position_probabilities_sum_to_one(thermo_service, model_at):
    model = model_at("honey:4x4:obc", 0.7)
    probabilities = thermo_service.position_probabilities(model)
    assert probabilities.sum() == pytest.approx(1.0, abs=1e-12)
    assert (probabilities > 0).all()


def test_position_quantities_need_eigenvectors(thermo_service):
    spectrum = Spectrum(np.array([0.0, 2.0]), (Level(0.0, 1), Level(2.0, 1)), np.array([0, 1]))
    model = thermo_service.make_thermal(spectrum, 1.0)
    assert thermo_service.qfi(model) > 0
    with pytest.raises(SpectrumError):
        thermo_service.fi_position(model)
    with pytest.raises(SpectrumError):
        thermo_service.gibbs_position_matrix(model)


@st.composite
def descriptors(draw):
    """Random family and size, kept small enough for the dense eigensolver."""
    kind = draw(st.sampled_from(["single", "bipartite", "lattice", "torus", "prod"]))
    if kind == "single":
        family = draw(st.sampled_from(["complete", "cycle", "path", "star"]))
        return f"{family}:{draw(st.integers(3, 14))}"
    if kind == "bipartite":
        return f"bipartite:{draw(st.integers(1, 7))},{draw(st.integers(1, 7))}"
    if kind == "lattice":
        family = draw(st.sampled_from(["grid", "tri", "honey", "trsq"]))
        top = 3 if family == "trsq" else 5
        return f"{family}:{draw(st.integers(2, top))}x{draw(st.integers(2, top))}:obc"
    if kind == "torus":
        return f"torus:{draw(st.integers(3, 5))}x{draw(st.integers(3, 5))}"
    return f"prod(path:{draw(st.integers(2, 5))},star:{draw(st.integers(2, 5))})"


@settings(max_examples=1000, deadline=None)
@given(
    descriptor=descriptors(),
    temperature=st.floats(min_value=0.05, max_value=50.0, allow_nan=False),
)
def test_position_fi_never_exceeds_qfi(descriptor, temperature):
    model = _THERMO.make_thermal(_spectrum(descriptor), temperature)
    qfi = _THERMO.qfi(model)
    fi = _THERMO.fi_position(model)
    assert 0.0 <= fi <= qfi * (1 + 1e-9) + 1e-10


@pytest.mark.parametrize("first, second", [("path:3", "star:4"), ("path:3", "cycle:4"),
                                           ("path:4", "path:5"), ("cycle:3", "cycle:5")])
@pytest.mark.parametrize("temperature", [0.5, 0.7, 2.0, 9.0, 20.0])
def test_fisher_informations_add_over_products(thermo_service, model_at, first, second, temperature):
    product = model_at(f"prod({first},{second})", temperature)
    left = model_at(first, temperature)
    right = model_at(second, temperature)

    qfi = thermo_service.qfi(product)
    assert qfi == pytest.approx(thermo_service.qfi(left) + thermo_service.qfi(right), rel=1e-9)
    assert thermo_service.fi_position(product) == pytest.approx(
        thermo_service.fi_position(left) + thermo_service.fi_position(right), rel=1e-9, abs=1e-12 * qfi
    )


# ========== LOW TEMPERATURE ==========

def test_xmax_of_a_single_excited_state(thermo_service):
    assert thermo_service.solve_xmax(1) == pytest.approx(4.1302, abs=1e-3)


@pytest.mark.parametrize("g1", [1, 2, 4, 10, 100, 10_000])
def test_xmax_solves_the_peak_equation(thermo_service, g1):
    x = thermo_service.solve_xmax(g1)
    assert x > 4.0
    assert np.exp(x) == pytest.approx(g1 * (x + 4.0) / (x - 4.0), rel=1e-9)


def test_xmax_grows_with_degeneracy(thermo_service):
    roots = [thermo_service.solve_xmax(g) for g in range(1, 30)]
    assert all(b > a for a, b in zip(roots, roots[1:]))


def test_xmax_rejects_zero_degeneracy(thermo_service):
    with pytest.raises(ValueError):
        thermo_service.solve_xmax(0)


@pytest.mark.parametrize("e1, g1", [(1.0, 1), (0.3, 2), (5.0, 4)])
def test_low_temperature_peak_is_a_maximum(thermo_service, e1, g1):
    t_max, peak = thermo_service.qfi_low_T_peak(e1, g1)
    assert peak == pytest.approx(thermo_service.qfi_low_T(e1, g1, t_max))
    for factor in (0.99, 1.01):
        assert thermo_service.qfi_low_T(e1, g1, t_max * factor) < peak


@pytest.mark.parametrize("descriptor", ["complete:5", "cycle:7", "path:6", "star:6",
                                        "bipartite:2,5", "grid:3x4:obc"])
def test_low_temperature_qfi(graph_service, spectral_service, thermo_service, descriptor):
    spectrum = spectral_service.spectrum(graph_service.parse(descriptor))
    e1, g1 = spectral_service.algebraic_connectivity(spectrum)
    temperature = e1 / 10.0
    exact = thermo_service.qfi(thermo_service.make_thermal(spectrum, temperature))
    assert thermo_service.qfi_low_T(e1, g1, temperature) == pytest.approx(exact, rel=0.1)


@pytest.mark.parametrize("descriptor", ["path:6", "star:6", "bipartite:2,5", "grid:3x4:obc"])
def test_low_temperature_position_fi(graph_service, spectral_service, thermo_service, descriptor):
    spectrum = spectral_service.spectrum(graph_service.parse(descriptor))
    e1, _ = spectral_service.algebraic_connectivity(spectrum)
    temperature = e1 / 10.0
    exact = thermo_service.fi_position(thermo_service.make_thermal(spectrum, temperature))
    assert thermo_service.fi_low_T(spectrum, temperature) == pytest.approx(exact, rel=0.1)


def test_low_temperature_position_fi_vanishes_on_circulants(graph_service, spectral_service, thermo_service):
    spectrum = spectral_service.spectrum(graph_service.parse("complete:6"))
    assert thermo_service.fi_low_T(spectrum, 0.6) == pytest.approx(0.0, abs=1e-15)


# ========== HIGH TEMPERATURE ==========

@pytest.mark.parametrize("descriptor", IRREGULAR_DESCRIPTORS)
def test_high_temperature_expressions(graph_service, spectral_service, thermo_service, descriptor):
    graph = graph_service.parse(descriptor)
    spectrum = spectral_service.spectrum(graph)
    stats = graph_service.degree_stats(graph)
    temperature = 100.0 * spectrum.max_energy
    model = thermo_service.make_thermal(spectrum, temperature)

    assert thermo_service.qfi_high_T(stats, graph.order, temperature) == pytest.approx(
        thermo_service.qfi(model), rel=0.01
    )
    assert thermo_service.fi_high_T(stats, graph.order, temperature) == pytest.approx(
        thermo_service.fi_position(model), rel=0.01
    )


@pytest.mark.parametrize("descriptor", ["cycle:9", "torus:3x3", "bipartite:3,3"])
def test_high_temperature_fi_vanishes_for_regular_graphs(graph_service, thermo_service, descriptor):
    graph = graph_service.parse(descriptor)
    stats = graph_service.degree_stats(graph)
    assert thermo_service.fi_high_T(stats, graph.order, 10.0) == 0.0
    assert thermo_service.ratio_limit(stats, graph.order) == 0.0


@pytest.mark.parametrize("descriptor", SAMPLE_DESCRIPTORS)
def test_high_temperature_bounds_contain_the_qfi(graph_service, thermo_service, descriptor):
    graph = graph_service.parse(descriptor)
    stats = graph_service.degree_stats(graph)
    value = thermo_service.qfi_high_T(stats, graph.order, 3.0)
    lower, upper = thermo_service.qfi_high_T_bounds(graph.order, graph.edge_count, 3.0)
    assert lower * (1 - 1e-12) <= value <= upper * (1 + 1e-12)


def test_regular_graphs_meet_the_lower_bound(graph_service, thermo_service):
    graph = graph_service.parse("cycle:10")
    stats = graph_service.degree_stats(graph)
    lower, _ = thermo_service.qfi_high_T_bounds(10, 10, 1.0)
    assert thermo_service.qfi_high_T(stats, 10, 1.0) == pytest.approx(lower) == pytest.approx(2.0)


def test_complete_graph_meets_both_bounds(graph_service, thermo_service):
    graph = graph_service.parse("complete:7")
    stats = graph_service.degree_stats(graph)
    lower, upper = thermo_service.qfi_high_T_bounds(7, graph.edge_count, 1.0)
    value = thermo_service.qfi_high_T(stats, 7, 1.0)
    assert value == pytest.approx(6.0)
    assert lower == pytest.approx(6.0)
    assert upper == pytest.approx(6.0)


def test_bounds_require_a_connectable_edge_count(thermo_service):
    with pytest.raises(ValueError):
        thermo_service.qfi_high_T_bounds(6, 4, 1.0)


@pytest.mark.parametrize("order", [5, 8, 16])
def test_star_ratio_limit(graph_service, thermo_service, order):
    graph = graph_service.parse(f"star:{order}")
    stats = graph_service.degree_stats(graph)
    expected = (order - 2) ** 2 / (order ** 2 - 2 * order + 4)
    assert thermo_service.ratio_limit(stats, order) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("descriptor", ["star:8", "path:6", "grid:3x3:obc"])
def test_ratio_limit_matches_high_temperature_ratio(graph_service, spectral_service, thermo_service, descriptor):
    graph = graph_service.parse(descriptor)
    spectrum = spectral_service.spectrum(graph)
    model = thermo_service.make_thermal(spectrum, 1000.0 * spectrum.max_energy)
    ratio = thermo_service.fi_position(model) / thermo_service.qfi(model)
    assert ratio == pytest.approx(thermo_service.ratio_limit(graph_service.degree_stats(graph), graph.order), rel=0.01)


# ========== COHERENCE ==========

@pytest.mark.parametrize("descriptor", ["complete:5", "path:5", "honey:4x4:obc"])
def test_gibbs_matrix_is_a_density_matrix(thermo_service, model_at, descriptor):
    model = model_at(descriptor, 0.8)
    rho = thermo_service.gibbs_position_matrix(model)
    assert_allclose(rho, rho.conj().T, atol=1e-14)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.eigvalsh(rho).min() > -1e-12
    assert_allclose(np.diag(rho).real, thermo_service.position_probabilities(model), atol=1e-12)


def test_gibbs_matrix_approaches_the_uniform_projector(thermo_service, model_at):
    model = model_at("path:5", 0.005)
    assert_allclose(thermo_service.gibbs_position_matrix(model).real,
                    thermo_service.gibbs_position_zero_limit(5), atol=1e-10)


@pytest.mark.parametrize("order", [3, 5, 10])
@pytest.mark.parametrize("temperature", [0.5, 2.0, 10.0, 100.0])
def test_complete_graph_coherence(thermo_service, model_at, order, temperature):
    model = model_at(f"complete:{order}", temperature)
    numeric = thermo_service.coherence_l1_normalized(thermo_service.gibbs_position_matrix(model))
    assert numeric == pytest.approx(thermo_service.coherence_complete(order, temperature), rel=1e-10)
    assert 0.0 <= numeric <= 1.0


def test_coherence_between_its_limits(thermo_service, model_at):
    values = [
        thermo_service.coherence_l1_normalized(thermo_service.gibbs_position_matrix(model_at("path:6", t)))
        for t in (0.005, 0.5, 5.0, 50.0)
    ]
    assert values[0] == pytest.approx(1.0, abs=1e-9)
    assert values[-1] < 0.05
    assert all(0.0 <= value <= 1.0 for value in values)


@pytest.mark.parametrize("rho", [np.ones((2, 3)), np.ones(4), np.ones((1, 1))])
def test_coherence_rejects_invalid_matrices(thermo_service, rho):
    with pytest.raises(ValueError):
        thermo_service.coherence_l1_normalized(rho)


def test_coherence_is_clipped_to_the_unit_interval(thermo_service):
    rho = np.full((4, 4), 0.25) * (1.0 + 1e-12)
    assert thermo_service.coherence_l1_normalized(rho) == 1.0


@pytest.mark.parametrize("order", [3, 10])
def test_hot_complete_graph_loses_coherence(thermo_service, model_at, order):
    hot = model_at(f"complete:{order}", 1e3 * order)
    assert thermo_service.coherence_l1_normalized(thermo_service.gibbs_position_matrix(hot)) < 0.01


@pytest.mark.parametrize("order", [3, 5, 10])
@pytest.mark.parametrize("temperature", [1.0, 3.0, 30.0, 300.0])
def test_complete_graph_qfi_coherence_identity(thermo_service, order, temperature):
    lhs, rhs = thermo_service.complete_graph_qfi_coherence_identity(order, temperature)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-300)


@pytest.mark.parametrize("order", [3, 10])
def test_identity_on_a_temperature_grid(thermo_service, order):
    for temperature in np.geomspace(0.1, 1e3 * order, 50):
        lhs, rhs = thermo_service.complete_graph_qfi_coherence_identity(order, temperature)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_identity_limits(thermo_service):
    cold = thermo_service.complete_graph_qfi_coherence_identity(5, 0.05)
    hot = thermo_service.complete_graph_qfi_coherence_identity(5, 1e6)
    assert cold[0] == pytest.approx(0.0, abs=1e-30)
    assert cold[1] == pytest.approx(0.0, abs=1e-30)
    assert hot[0] == pytest.approx(1.0, abs=1e-4)
    assert hot[1] == pytest.approx(1.0, abs=1e-4)


def test_zero_temperature_limits(thermo_service):
    assert thermo_service.qfi_zero_limit() == 0.0
    assert thermo_service.fi_zero_limit() == 0.0
    assert thermo_service.coherence_zero_limit() == 1.0
    assert_allclose(thermo_service.gibbs_position_zero_limit(4), np.full((4, 4), 0.25))


# ========== REPORT ==========

def test_fisher_report(graph_service, spectral_service, thermo_service):
    graph = graph_service.parse("star:6")
    spectrum = spectral_service.spectrum(graph)
    report = thermo_service.fisher_report(spectrum, graph_service.degree_stats(graph), 1.5)
    model = thermo_service.make_thermal(spectrum, 1.5)

    assert report.temperature == 1.5
    assert report.qfi == pytest.approx(thermo_service.qfi_exact_star(6, 1.5), rel=1e-9)
    assert report.fi_position == pytest.approx(thermo_service.fi_position(model))
    assert 0.0 < report.ratio < 1.0
    lower, upper = report.qfi_high_bounds
    assert lower <= report.qfi_high <= upper
    assert set(report.to_row()) == {
        'T', 'qfi', 'fi', 'qfi_low', 'qfi_high', 'fi_high',
        'bound_lo', 'bound_hi', 'ratio_limit', 'coherence',
    }
