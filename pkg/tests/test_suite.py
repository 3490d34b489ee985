import pytest

from wignerkit.suite import ANCHORS, verify_suite


@pytest.fixture(scope="module")
def default_report():
    return verify_suite()


def test_default_run_passes_every_anchor(default_report):
    assert default_report["pass"]
    assert set(default_report["anchors"]) == set(ANCHORS)
    assert all(a["pass"] and a["trials"] > 0 for a in default_report["anchors"].values())
    assert default_report["dims"] == [[5, 2], [7, 3]]


def test_deterministic(default_report):
    assert verify_suite() == default_report


@pytest.mark.parametrize("anchor", ANCHORS)
def test_injected_fault_fails_only_its_anchor(anchor):
    rep = verify_suite(trials=3, inject_fault=anchor)
    assert not rep["pass"]
    assert rep["injected_fault"] == anchor
    assert [k for k, a in rep["anchors"].items() if not a["pass"]] == [anchor]


@pytest.mark.parametrize("dims", [[], [(4, 2)], [(5, 1)]])
def test_bad_dims(dims):
    with pytest.raises(ValueError):
        verify_suite(dims=dims)


def test_unknown_fault():
    with pytest.raises(ValueError):
        verify_suite(inject_fault="no-such-anchor")
