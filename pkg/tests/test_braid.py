import pytest

from qtopo.braid import (BraidSyntaxError, PlatBraid, catalog, catalog_plat,
                         linking_number, parse_braid, plat_components, writhe)
from qtopo.qnum import Spin

H = Spin(1)


def test_parse():
    w = parse_braid("2 2 2", 4)
    assert w.letters == ((2, 1), (2, 1), (2, 1))
    w = parse_braid("1 -1", 2)
    assert w.letters == ((1, 1), (1, -1))
    with pytest.raises(BraidSyntaxError):
        parse_braid("5", 4)
    with pytest.raises(BraidSyntaxError):
        parse_braid("0", 4)
    with pytest.raises(BraidSyntaxError):
        parse_braid("x", 4)


def test_plat_needs_even_strands():
    with pytest.raises(BraidSyntaxError):
        PlatBraid(parse_braid("1 2", 3))


def test_components():
    assert plat_components(PlatBraid(parse_braid("", 4))).components == 2
    assert plat_components(PlatBraid(parse_braid("2 2 2", 4))).components == 1
    assert plat_components(PlatBraid(parse_braid("2 2", 4))).components == 2


def test_writhe():
    assert writhe(PlatBraid(parse_braid("2 2 2", 4))) == 3
    assert writhe(PlatBraid(parse_braid("1 -1", 2))) == 0
    assert writhe(PlatBraid(parse_braid("-2 1", 4))) == 0


def test_linking_number():
    p = PlatBraid(parse_braid("2 2", 4))
    assert abs(linking_number(p, 0, 1)) == 1
    with pytest.raises(ValueError):
        linking_number(p, 0, 0)


def test_orientation_override():
    word = parse_braid("2 2", 4)
    base = PlatBraid(word)
    lk0 = linking_number(base, 0, 1)
    flipped = PlatBraid(word, None, (1, -1, -1, 1))
    lk1 = linking_number(flipped, 0, 1)
    assert lk1 == -lk0  # reversing one component flips the linking sign
    with pytest.raises(ValueError):
        plat_components(PlatBraid(word, None, (1, 1, -1, 1)))


def test_free_reduction_invariance():
    base = PlatBraid(parse_braid("2 2 2", 4))
    padded = PlatBraid(parse_braid("2 2 2 1 -1", 4))
    a, b = plat_components(base), plat_components(padded)
    assert a.components == b.components
    assert a.strand_to_component == b.strand_to_component
    assert writhe(base) == writhe(padded)


def test_far_commutation_structure():
    a = plat_components(PlatBraid(parse_braid("1 3", 6)))
    b = plat_components(PlatBraid(parse_braid("3 1", 6)))
    assert a.components == b.components
    assert a.strand_to_component == b.strand_to_component
    assert a.crossings_between == b.crossings_between


def test_catalog():
    links = catalog()
    for required in ("unknot", "hopf", "trefoil", "figure_eight"):
        assert required in links
    assert links["hopf"]["word"] == "2 2"
    assert links["trefoil"]["word"] == "2 2 2"
    plat = catalog_plat("trefoil", H)
    assert plat.colors == (H, H, H, H)
    with pytest.raises(KeyError):
        catalog_plat("nope")


def test_catalog_component_counts():
    expected = {"unknot": 1, "unknot_kinked": 1, "hopf": 2, "trefoil": 1,
                "figure_eight": 1}
    for name, want in expected.items():
        entry = catalog()[name]
        plat = PlatBraid(parse_braid(entry["word"], entry["strands"]))
        assert plat_components(plat).components == want


def test_load_catalog_file(tmp_path):
    import json

    from qtopo.braid import load_catalog_file

    path = tmp_path / "links.json"
    path.write_text(json.dumps(
        {"solomon": {"strands": 4, "word": "2 2 2 2", "notes": "4^2_1"}}))
    loaded = load_catalog_file(path)
    assert loaded["solomon"]["strands"] == 4
