"""Smoke test for the bqtools extension.

Build it first, e.g. `pip install --no-build-isolation -e crates/py`.
"""

import bqtools as bq


def main():
    gf13 = bq.Field("GF(13)")
    assert gf13.modulus == 13 and gf13.is_finite

    a = gf13.elem("5")
    assert a * a == -1
    assert (1 / a) * 5 == 1

    group = bq.enumerate_orthogonal_group(gf13)
    assert len(group) == 24
    assert [str(e) for e in group[0]] == ["1", "0", "0", "1"]

    ids = bq.verify_transform_identities(gf13)
    assert ids["passed"] and ids["pairs_checked"] == 13**4, ids

    f = bq.Map(gf13, "translate(2,3) . rot(0,1)")
    assert f(gf13.point("(0,0)")) == gf13.point("(2,3)")
    assert f.preserves_unit_distance()["passed"]
    d = f.decompose()
    assert d["reconstruction"] == "(X -> [[0, 12], [1, 0]] X + (2, 3)) o (id, id)", d

    g = bq.Map.from_table(gf13, f.table())
    assert g.decompose()["gamma"] == d["gamma"]

    q = bq.Field("Q")
    path = bq.real_chain(q.point("(0,0)"), q.point("(8/5,1/5)"), rational=True)
    assert bq.verify_chain(path) == []
    try:
        bq.real_chain(q.point("(0,0)"), q.point("(7/3,22/5)"), rational=True)
    except bq.BqError as e:
        assert "prime factor 3" in str(e), e
    else:
        raise AssertionError("expected BqError")

    qi = bq.Field("Q[i]")
    x = qi.point("(2*i, 0)")
    path = bq.imaginary_chain(x)
    assert (str(path[0]), str(path[-1])) == ("(2*i, 0)", "(i, i)")
    assert bq.verify_chain(path, require_psi=True) == []

    tower = bq.Field("Q[sqrt 2][sqrt -1]")
    h = bq.Map(tower, "hom(conj@1) . translate(1,0)")
    assert h.decompose_lorentz()["branch"] == "theta"
    r2 = tower.generator(1)
    assert bq.phi(tower.point("(0,0)"), bq.Point(tower, r2, 0)) == 2

    census = bq.search_unit_preservers(13, budget=2000)
    assert not census["complete"] and census["anomalies"] == []

    print("bqtools smoke test: ok")


if __name__ == "__main__":
    main()
