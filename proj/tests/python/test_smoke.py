from fractions import Fraction

import pytest

import sdkit


def test_fixture_checks_pass():
    checks = sdkit.fixture.verify()
    assert checks
    for name, passed, detail in checks:
        assert passed, f"{name}: {detail}"


def test_full_enumeration_reaches_poles():
    ds = sdkit.fixture.training_set()
    ens = sdkit.Ensemble.for_dataset(ds)
    for m in sdkit.fixture.subset_models():
        ens.push(m, ds)
    assert len(ens) == 252
    assert ens.symmetry_balanced()
    for q, label in zip(ds.points, ds.labels):
        assert ens.coverage_count(q) == 126
        assert ens.y_exact(q) == (1 if label == 1 else 0)
        assert ens.classify(q) == label


def test_first_model_rating_and_x():
    ds = sdkit.fixture.training_set()
    m1 = sdkit.fixture.subset_models()[0]
    r = sdkit.rate(m1, ds)
    assert r.rating_exact(1) == Fraction(1, 5)
    assert r.rating_exact(2) == Fraction(4, 5)
    assert sdkit.x_value(r, True) == Fraction(-1, 3)
    assert sdkit.x_value(r, False) == Fraction(4, 3)


def test_profile_strata_are_fractions():
    ds = sdkit.fixture.training_set()
    ens = sdkit.Ensemble.for_dataset(ds)
    for m in sdkit.fixture.subset_models()[:10]:
        ens.push(m, ds)
    f = [s["f"] for s in ens.profile(ds.points[0], 2)]
    assert f == [0, 1, Fraction(3, 4), 0, 0, 0]


def test_geometric_models_and_membership():
    test = sdkit.fixture.test_set()
    m1 = sdkit.fixture.geometric_models()[0]
    assert test.points[3] in m1
    ball = sdkit.WeakModel.l2_ball([0.0, 0.0], 1.0)
    assert sdkit.membership(ball, sdkit.Point([0.6, 0.8]))
    assert not sdkit.membership(ball, sdkit.Point([1.0, 1.0]))


def test_train_is_deterministic_and_round_trips(tmp_path):
    ds = sdkit.fixture.training_set()
    settings = {"seed": "7", "target-size": "30", "enrich-threshold": "0.1"}
    a, report = sdkit.train(ds, settings)
    b, _ = sdkit.train(ds, settings)
    assert report["accepted"] == 30
    assert not report["exhausted"]
    sdkit.write_ensemble(tmp_path / "a.sdm", a, {"seed": "7"})
    sdkit.write_ensemble(tmp_path / "b.sdm", b, {"seed": "7"})
    assert (tmp_path / "a.sdm").read_bytes() == (tmp_path / "b.sdm").read_bytes()
    loaded, meta = sdkit.read_ensemble(tmp_path / "a.sdm")
    assert meta == {"seed": "7"}
    assert len(loaded) == 30
    for q in ds.points:
        assert loaded.y(q) == a.y(q)


def test_errors_map_to_value_error(tmp_path):
    with pytest.raises(ValueError):
        sdkit.enumerate_k_subsets(3, 4)
    bad = tmp_path / "bad.csv"
    bad.write_text("x,label\n1,1\nzz,2\n")
    with pytest.raises(sdkit.DatasetFormatError):
        sdkit.read_dataset_csv(bad)
    with pytest.raises(sdkit.ContractError):
        sdkit.train(sdkit.fixture.training_set(), {"uniformity": "sometimes"})
