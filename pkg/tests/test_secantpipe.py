import json
from fractions import Fraction

import pytest

from weilspin import linalg
from weilspin.cli import main
from weilspin.exteralg import Multivector, wedge
from weilspin.fieldtower import TowerSpec
from weilspin.fmtransform import OrlovTransform
from weilspin.secantpipe import (
    PRESETS,
    Report,
    SheafClass,
    decompose_kappa,
    dual_sheaf_character,
    dualize,
    kappa,
    nonvanish_criterion,
    nonvanish_from_tensor,
    preset_ch_ideal_curves,
    run_all,
    transform_pair,
)
from weilspin.weilcm import WeilStructure


def test_preset_names():
    assert set(PRESETS) == {"sixfold-q2", "sixfold-q3", "sixfold-q5", "fourfold-rm2"}
    for name, build in PRESETS.items():
        datum = build()
        assert datum.name == name


def test_preset_chern_character(ws6):
    ch = preset_ch_ideal_curves(ws6)
    tow = ws6.datum.tower
    # q = 2: ch = 1 + Theta - Theta^2 - Theta^3/3
    th = ws6.theta
    th2 = wedge(th, th)
    th3 = wedge(th2, th)
    expected = ws6.space.sspace.one() + th - th2 - th3.scale(Fraction(1, 3))
    assert ch.ch == expected
    assert ch.rank == tow.one()
    red, piv = linalg.rref(ws6.B_rows, tow)
    assert linalg.in_span(red, piv, ch.ch.to_coords(), tow)


def test_dualize(ws6):
    ch = preset_ch_ideal_curves(ws6)
    dual = dualize(ch)
    assert dual.ch == ws6.alpha - ws6.beta
    assert dualize(dual).ch == ch.ch
    tow = ws6.datum.tower
    red, piv = linalg.rref(ws6.B_rows, tow)
    assert linalg.in_span(red, piv, dual.ch.to_coords(), tow)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_transform_rank_8q(q):
    ws = WeilStructure(PRESETS[f"sixfold-q{q}"]())
    orl = OrlovTransform(3, ws.datum.tower)
    ch = preset_ch_ideal_curves(ws)
    g = transform_pair(orl, ch, ch, "G")
    r = g.terms.get(0).as_rational()
    assert abs(r) == 8 * q
    # the mixed-dual boxing transforms to a rank-zero class (frozen regression)
    e_var = transform_pair(orl, ch, ch, "E")
    assert 0 not in e_var.terms
    # linearity in each argument
    double = SheafClass(ch.ch.scale(2), "2F")
    assert transform_pair(orl, double, ch, "G") == g.scale(2)


def test_kappa(ws6, orl6):
    tow = ws6.datum.tower
    sp = orl6.pa_xy.space
    r5 = Multivector(sp, {0: tow.scalar(5)})
    assert kappa(r5) == r5
    with pytest.raises(ValueError):
        kappa(sp.gen(0))  # rank zero
    ch = preset_ch_ideal_curves(ws6)
    che = dual_sheaf_character(transform_pair(orl6, ch, ch, "G"))
    kap = kappa(che)
    assert kap.degree_part(2).is_zero()
    assert kap.terms[0] == che.terms[0]


def test_dual_sheaf_rank(ws6, orl6):
    ch = preset_ch_ideal_curves(ws6)
    g = transform_pair(orl6, ch, ch, "G")
    che = dual_sheaf_character(g)
    assert che.terms[0].as_rational() == 16


def test_decompose_kappa(ws6, orl6):
    ch = preset_ch_ideal_curves(ws6)
    kap = kappa(dual_sheaf_character(transform_pair(orl6, ch, ch, "G")))
    kd = kap.degree_part(ws6.d)
    gamma, delta, coeffs = decompose_kappa(ws6, kd)
    assert gamma + delta == kd
    assert not gamma.is_zero()
    # gamma lies in the Weil space, delta in the polynomial line
    tow = ws6.datum.tower
    red, piv = linalg.rref(ws6.HW_rows, tow)
    assert linalg.in_span(red, piv, gamma.to_coords(), tow)
    # zero decomposes to (0, 0)
    g0, d0, _ = decompose_kappa(ws6, ws6.space.vspace.zero())
    assert g0.is_zero() and d0.is_zero()


def test_nonvanish(ws6, orl6):
    ch = preset_ch_ideal_curves(ws6)
    assert nonvanish_criterion(ws6, orl6, ch, dualize(ch))
    assert nonvanish_criterion(ws6, orl6, ch, ch)
    # the symmetrized overlap-zero tensor fails the criterion
    t_plus, t_minus = ws6.cm_types[0], ws6.cm_types[1]
    pm = orl6.pa_xx.box(ws6.ell[t_plus], Multivector(orl6.sx2, dict(ws6.ell[t_minus].terms)))
    mp = orl6.pa_xx.box(ws6.ell[t_minus], Multivector(orl6.sx2, dict(ws6.ell[t_plus].terms)))
    degenerate = (pm + mp).scale(Fraction(1, 2))
    assert all(c.is_rational() for c in degenerate.terms.values())
    assert not nonvanish_from_tensor(ws6, orl6, degenerate)


def test_run_all_filter_deterministic():
    r1 = run_all("sixfold-q2", seed=7, check_filter="secant")
    r2 = run_all("sixfold-q2", seed=7, check_filter="secant")
    assert r1.dumps() == r2.dumps()
    assert r1.all_pass()
    assert all("secant" in c.name for c in r1.checks)


def test_run_all_unknown_preset():
    with pytest.raises(ValueError):
        run_all("sevenfold-q9")


def test_report_shape():
    rep = run_all("sixfold-q2", seed=1, check_filter="tower.cm-types")
    data = rep.to_json()
    assert set(data) == {"instance", "checks", "summary"}
    assert data["summary"] == {"pass": 1, "fail": 0}
    check = data["checks"][0]
    assert set(check) == {"name", "anchor", "status", "witness"}
    assert check["status"] == "pass"
    assert data["instance"]["seed"] == 1


def test_report_exit_logic():
    good = Report({"name": "x"}, [], 0)
    assert good.all_pass()
    from weilspin.secantpipe import Check

    bad = Report({"name": "x"}, [Check("a", "b", False, {})], 0)
    assert not bad.all_pass() and bad.failed == 1


def test_cli_exit_codes(tmp_path):
    out = tmp_path / "rep.json"
    code = main(["verify", "--preset", "fourfold-rm2", "--seed", "3",
                 "--check", "tower", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["summary"]["fail"] == 0
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", "--input", str(bad)]) == 2
    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text(json.dumps({"tower": {"p": 1, "q": {"num": 1, "den": 1}}}))
    assert main(["verify", "--input", str(incomplete)]) == 2


def test_cli_custom_input(tmp_path):
    datum = PRESETS["fourfold-rm2"]()
    path = tmp_path / "datum.json"
    path.write_text(json.dumps(datum.to_json()))
    out = tmp_path / "rep.json"
    code = main(["verify", "--input", str(path), "--check", "weil.dimension",
                 "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["checks"][0]["witness"] == {"dim": 4}
