"""Seeded property campaign: registry, determinism, report schema."""

import json

import pytest

from lambdarisk import CampaignConfig, CampaignReport, PreconditionError, run_campaign

AXIOM_PROPS = (
    "lift_level_monotone",
    "lift_pointwise_monotone",
    "lift_family_chain",
    "lift_quasi_convex",
    "lift_point_mass_normalized",
    "lift_cash_subadditive",
    "lift_icx_monotone",
    "lift_mixture_quasi_concave",
)

MUST_FAIL_PROPS = (
    "must_fail_cash_additivity",
    "must_fail_convexity",
    "must_fail_mixture_concavity",
)


@pytest.fixture(scope="module")
def small_report():
    return run_campaign(CampaignConfig(seed=4, cases=8))


def test_small_campaign_passes(small_report):
    assert small_report.all_passed
    for out in small_report.outcomes:
        assert out.cases == 8
        assert out.passes + out.failures == out.cases
        assert out.failures == 0
        assert out.worst_violation == 0.0
        assert len(out.samples) == 0


def test_registry_covers_expected_properties(small_report):
    names = [o.name for o in small_report.outcomes]
    assert len(names) == len(set(names))
    for want in AXIOM_PROPS + MUST_FAIL_PROPS:
        assert want in names
    assert "es_reduction" in names
    assert "evar_weak_duality" in names
    assert "robust_delta_zero_identity" in names


def test_report_lookup_and_round_trip(small_report):
    out = small_report.outcome("lift_cash_subadditive")
    assert out.name == "lift_cash_subadditive"
    with pytest.raises(KeyError):
        small_report.outcome("no_such_property")
    blob = small_report.to_json()
    data = json.loads(blob)
    assert data["seed"] == 4
    assert data["cases"] == 8
    assert data["all_passed"] is True
    assert len(data["properties"]) == len(small_report.outcomes)
    row = data["properties"][0]
    assert set(row) == {"name", "cases", "passes", "failures", "worst_violation", "samples"}


def test_campaign_is_deterministic():
    a = run_campaign(CampaignConfig(seed=91, cases=5)).to_json()
    b = run_campaign(CampaignConfig(seed=91, cases=5)).to_json()
    assert a == b


def test_different_seeds_draw_different_cases():
    a = run_campaign(CampaignConfig(seed=0, cases=3))
    b = run_campaign(CampaignConfig(seed=1, cases=3))
    assert a.to_json() != b.to_json()


def test_config_validation():
    with pytest.raises(PreconditionError):
        run_campaign(CampaignConfig(cases=0))
    with pytest.raises(PreconditionError):
        run_campaign(CampaignConfig(max_support=1))
    with pytest.raises(PreconditionError):
        run_campaign(CampaignConfig(p_grid=(0.5,)))
    with pytest.raises(PreconditionError):
        run_campaign(CampaignConfig(tolerances={"no_such_property": 1e-9}))


def test_tolerance_override_can_force_failures():
    # an impossible tolerance turns an exact identity check into a failure,
    # and the failing payload carries enough to reproduce the case
    cfg = CampaignConfig(seed=2, cases=4, tolerances={"combine_affine_exact": -1.0})
    report = run_campaign(cfg)
    assert not report.all_passed
    out = report.outcome("combine_affine_exact")
    assert out.failures == 4
    assert 0 < len(out.samples) <= 3
    sample = out.samples[0]
    assert "atoms" in sample
    json.dumps(sample)  # payloads must stay JSON-safe


def test_report_is_plain_data(small_report):
    d = small_report.to_dict()
    assert isinstance(d, dict)
    rebuilt = json.loads(json.dumps(d, sort_keys=True))
    assert rebuilt == json.loads(small_report.to_json())
