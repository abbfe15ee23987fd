from __future__ import annotations

import json

import pytest

from vacpol.context import PhysicalContext
from vacpol.typo_ledger import build_typo_ledger

EXPECTED_IDS = {
    "uehling_tridiagonal_sign_swap",
    "uehling_spectral_k_form",
    "uehling_spectral_a_form",
    "wichmann_kroll_spectral_missing_inverse_r",
    "sommerfeld_eta_square_root",
    "coulomb_normalization_phase",
    "cross_section_prefactor",
    "hausdorff_scaling_reading",
    "field_equation_large_r",
}


@pytest.fixture(scope="module")
def ledger():
    return build_typo_ledger(PhysicalContext(Q=1.0))


def test_complete(ledger):
    assert {e.id for e in ledger.entries} == EXPECTED_IDS
    assert {e.id for e in ledger.corrected_checks} == {"uehling_spectral_corrected", "wichmann_kroll_spectral_corrected"}
    for e in ledger.entries:
        assert e.samples and e.description and e.reference_kind


def test_every_printed_variant_is_adjudicated_wrong(ledger):
    for e in ledger.entries:
        assert e.max_discrepancy > 0.1, e.id


def test_corrected_forms_match(ledger):
    for e in ledger.corrected_checks:
        assert e.max_discrepancy <= 1e-9, e.id


def test_cross_section_factor(ledger):
    # printed prefactor over the |f|^2 prefactor is 2 v^2 = 2 at k = 1
    for s in ledger.entry("cross_section_prefactor").samples:
        assert s.printed / s.reference == pytest.approx(2.0, rel=1e-12)


def test_lookup_and_serialization(ledger):
    with pytest.raises(KeyError):
        ledger.entry("nope")
    d = ledger.to_dict()
    text = json.dumps(d, sort_keys=True)
    assert json.loads(text)["entries"][0]["max_discrepancy"] == ledger.entries[0].max_discrepancy


def test_deterministic():
    a = build_typo_ledger(PhysicalContext(Q=1.0), k_count=3).to_dict()
    b = build_typo_ledger(PhysicalContext(Q=1.0), k_count=3).to_dict()
    assert json.dumps(a) == json.dumps(b)
