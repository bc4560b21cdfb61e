import json
from fractions import Fraction

import pytest

from ratsurf.config import classify_affine_dynkin
from ratsurf.construction import (
    ConstructedSurface,
    ConstructionError,
    ForbiddenTwistPoint,
    config_hypotheses,
    construct_d8,
    construct_e8,
    contractible_section,
    fingerprint,
    reblow_base_point,
    sweep_q,
    sweep_summary,
    torsion_certificate,
    twist_nontorsion,
    verify_hypotheses,
)
from ratsurf.lattice import noether_check
from ratsurf.pencils import PlaneCurve

from oracles import E8_MARKS


def test_e8_boundary(e8):
    assert e8.kind == "E_affine(8)"
    assert len(e8.boundary) == 9
    assert all(e8.boundary.gram[i][i] == -2 for i in range(9))
    assert e8.boundary_class == -e8.lattice.K
    assert e8.boundary_class.square == 0
    assert sorted(e8.marks) == sorted(E8_MARKS)
    assert e8.h0_antiK == 2


def test_d8_boundary(d8):
    assert d8.kind == "D_affine(8)"
    assert len(d8.boundary) == 9
    assert sorted(d8.marks) == [1, 1, 1, 1, 2, 2, 2, 2, 2]
    assert d8.boundary_class == -d8.lattice.K
    assert d8.h0_antiK == 2


@pytest.mark.parametrize("a, b", [(0, 1), (-1, 1), (2, -3), (Fraction(1, 2), 5)])
def test_e8_family_members(a, b):
    s = construct_e8(a, b)
    assert s.kind == "E_affine(8)"
    assert s.provenance["a"] == str(Fraction(a))


def test_singular_e8_cubic_rejected():
    with pytest.raises(ConstructionError, match="singular"):
        construct_e8(-3, 2)  # 4a^3 + 27b^2 = 0


def test_d8_choices_of_m():
    with pytest.raises(ConstructionError, match="non-reduced"):
        construct_d8([0, 0, 0])
    with pytest.raises(ConstructionError):
        construct_d8([1, 0])
    with pytest.raises(ConstructionError):
        construct_d8(PlaneCurve.parse("x^2"))
    assert construct_d8(None).kind == "D_affine(8)"


def test_d8_singular_c_advises_another_m():
    # M = z makes C = z^3 + z(xz - y^2) divisible by z
    with pytest.raises(ConstructionError, match="different M"):
        construct_d8([0, 0, 1])


def test_contractible_section(e8):
    data = contractible_section(e8)
    assert data.contracted == "E9"
    assert data.component == "E8"
    assert data.h0_after_blow_down == 2
    assert data.blown_down_square == 1


@pytest.mark.parametrize("fixture", ["e8_twisted", "d8_twisted"])
def test_twist_breaks_torsion(request, fixture):
    t = request.getfixturevalue(fixture)
    assert t.h0_antiK == 1
    cert = t.provenance["twist"]["certificate"]
    assert cert["normal_bundle"] == "non-torsion"
    assert verify_hypotheses(t).overall


def test_twist_keeps_the_boundary(e8, e8_twisted):
    assert e8_twisted.kind == e8.kind
    assert e8_twisted.marks == e8.marks
    assert e8_twisted.boundary.gram == e8.boundary.gram
    assert e8_twisted.lattice == e8.lattice


def test_reblow_gives_back_the_start(e8):
    back = reblow_base_point(e8)
    assert back.h0_antiK == 2
    assert back.cluster == e8.cluster
    assert back.provenance["twist"]["certificate"]["normal_bundle"] == "torsion (trivial)"


def test_forbidden_twist_points(e8):
    with pytest.raises(ForbiddenTwistPoint):
        twist_nontorsion(e8, 0)


def test_twisting_twice_is_refused(e8_twisted):
    with pytest.raises(ConstructionError):
        twist_nontorsion(e8_twisted, 2)


def test_torsion_certificate_states():
    assert torsion_certificate(2)["normal_bundle"] == "torsion (trivial)"
    assert torsion_certificate(1)["normal_bundle"] == "non-torsion"
    assert torsion_certificate(None)["normal_bundle"] == "undetermined"
    assert torsion_certificate(3)["normal_bundle"] == "unexpected"


def test_untwisted_report_fails_only_h0(e8):
    r = verify_hypotheses(e8, 3)
    assert r.failed == ["h0_antiK_one"]
    assert r["h0_antiK_one"].witness["h0(-nK)"] == {1: 2, 2: 3, 3: 4}


def test_report_rendering(e8_twisted):
    r = verify_hypotheses(e8_twisted, 2)
    text = r.render_text()
    assert "affine_dynkin" in text
    data = r.to_json()
    assert data["overall"] is True
    json.dumps(data)
    with pytest.raises(KeyError):
        r["nonexistent"]


def test_noether_on_constructed(e8, d8):
    for s in (e8, d8):
        ok, _ = noether_check(s.lattice)
        assert ok


def test_config_level_checks(e8):
    assert config_hypotheses(e8.boundary).overall


def test_json_round_trip(e8, d8, e8_twisted):
    for s in (e8, d8, e8_twisted):
        text = json.dumps(s.to_json())
        back = ConstructedSurface.from_json(json.loads(text))
        assert back == s
        assert back.to_json()["boundary"] == s.to_json()["boundary"]


def test_json_tampered_boundary_rejected(e8):
    data = e8.to_json()
    data["boundary"]["multiplicities"] = [1] * 9
    with pytest.raises(ConstructionError):
        ConstructedSurface.from_json(data)


def test_sweep(e8):
    entries = sweep_q(e8, [1, 2, Fraction(-1, 3), 0], n_max=2)
    summary = sweep_summary(entries)
    assert summary["valid"] == 3
    assert "0" in summary["errors"]
    assert summary["fingerprints_identical"]
    assert summary["all_verified"]
    assert summary["isomorphism"] == "undecided"
    assert entries[0].fingerprint == fingerprint(entries[1].surface)


def test_fingerprint_separates_twist(e8, e8_twisted):
    assert fingerprint(e8) != fingerprint(e8_twisted)
    assert classify_affine_dynkin(e8_twisted.boundary).name == "E_affine(8)"
