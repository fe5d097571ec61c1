import math

import pytest

import machina


def test_compare_verdicts():
    assert machina.compare([0.75, 0.125, 0.125, 0, 0], [0.4, 0.2, 0.2, 0.1, 0.1]) == "StrictlyMajorizes"
    assert machina.compare([0.6, 0.1, 0.1, 0.1, 0.1], [1 / 3, 1 / 3, 1 / 3, 0, 0]) == "Incomparable"
    assert machina.compare([1, 0], [1]) == "Equivalent"


def test_invalid_distribution_raises():
    with pytest.raises(machina.MachinaError, match="NotNormalized"):
        machina.validate([0.6, 0.3])
    with pytest.raises(ValueError):
        machina.validate([1.5, -0.5])


def test_entropy_and_lorenz():
    assert machina.renyi_entropy([0.25] * 4, machina.INF) == pytest.approx(2.0)
    assert machina.lorenz_curve([0.75, 0.125, 0.125]) == pytest.approx([0, 0.75, 0.875, 1.0])
    chain = machina.transfer_chain([1, 0], [0.5, 0.5])
    assert chain == [(0, 1, pytest.approx(0.5))]


def test_quantum_catalog_values():
    q3 = machina.process("q3")
    assert isinstance(q3, machina.QuantumModel)
    assert q3.entropy(1.0) == pytest.approx(0.6144, abs=0.005)
    assert q3.spectrum() == pytest.approx([8 / 9, 1 / 18, 1 / 18])
    d4 = machina.process("d4")
    assert d4.entropy(machina.INF) == pytest.approx(1.0)
    report = machina.strong_advantage_report(machina.process("q4"))
    assert report["verdict"] == "StrictlyMajorizes"
    assert report["entropy_bound_holds"]


def test_classical_round_trip_and_merge():
    split = machina.process("even_odd_split")
    assert not split.is_epsilon_machine()
    report = machina.strong_minimality_report(split)
    assert report["verdict"] == "StrictlyMajorizes"
    assert machina.isomorphic(report["machine"], machina.process("even_odd"))
    again = machina.parse_model(split.serialize())
    assert again.serialize() == split.serialize()


def test_qmachine_matches_words():
    mbw3 = machina.process("mbw3")
    q = machina.build_qmachine(mbw3)
    for w in ["A", "AB", "CCA", "BACA"]:
        assert q.word_probability(w) == pytest.approx(mbw3.word_probability(w), abs=1e-12)
    assert machina.process("biased_coin:0.6").word_probability("11") == pytest.approx(0.36)


def test_gauge_family():
    matrix, analytic, _ = machina.completeness_residual(2 * math.pi / 3)
    assert matrix == pytest.approx(0.25)
    assert analytic == pytest.approx(0.25)
    result = machina.counterexample(1000)
    assert result["pass"]
    assert result["verdict"] == "Incomparable"
    with pytest.raises(machina.MachinaError, match="UnphysicalTheta"):
        machina.completeness_residual(0.1)
