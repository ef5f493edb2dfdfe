import io
import json

import pytest

from sixtermk import E, F, F1, build, catalog_descriptors, k_groups_of, parse_descriptor
from sixtermk.catalog import DescriptorError, ExtensionDescriptor, trivial_ideal, trivial_quotient
from sixtermk.functors import mc_iter
from sixtermk.sixterm import seq_to_json, validate_exactness

FIRST_COLUMN = ("0", "0", "Z", "Z", "Z/{n}", "0")


def names(groups):
    return tuple(str(g) for g in groups)


@pytest.mark.parametrize("n", range(2, 13))
def test_first_rows_of_table(n):
    # column j of the F1 rows is the first column pushed down j places
    for j in range(6):
        want = tuple(FIRST_COLUMN[(i - j) % 6].format(n=n) for i in range(6))
        assert names(build(E(n, j)).groups) == want


def test_examples():
    s = build(E(4, 1))
    assert names(s.groups) == ("0", "0", "0", "Z", "Z", "Z/4")
    assert s.maps[3].matrix.tolist() == [[4]] and s.maps[4].matrix.tolist() == [[1]]
    s = build(F1(3))
    assert names(s.groups) == ("0", "0", "0", "Z", "Z", "0")
    # three cones negate position 3 relative to the plain shift
    assert s.maps[3].matrix.tolist() == [[-1]]


def test_k_groups():
    (i0, i1), (m0, m1), (q0, q1) = k_groups_of("E:5:0")
    assert names((i0, i1, m0, m1, q0, q1)) == ("0", "Z", "0", "Z/5", "Z", "0")
    assert names(sum(k_groups_of(F1(0)), ())) == ("Z", "0", "Z", "0", "0", "0")
    # E(n,2): groups (Z/n, 0, 0, 0, Z, Z), so the middle is (0, Z)
    assert names(k_groups_of(E(3, 2))[1]) == ("0", "Z")


@pytest.mark.parametrize("desc", catalog_descriptors(12), ids=str)
def test_catalog_is_exact_and_periodic(desc):
    s = build(desc)
    assert validate_exactness(s).ok
    assert mc_iter(s, 6) == s


def test_index_taken_mod_six():
    assert build("E:3:7") == build("E:3:1")


def test_parse_round_trip():
    for text in ["E:2:0", "F:7:5", "F1:3", "ideal:E:3:2", "quotient:F1:0", "file:/tmp/x.json"]:
        assert str(parse_descriptor(text)) == text


@pytest.mark.parametrize("bad", ["E:1:0", "E:3", "G:2:0", "F1", "E:x:0", "file:", "ideal:"])
def test_parse_errors(bad):
    with pytest.raises(DescriptorError):
        build(bad)


def test_file_descriptor(tmp_path, monkeypatch):
    s = build("E:6:2")
    p = tmp_path / "s.json"
    p.write_text(json.dumps(seq_to_json(s)))
    assert build(f"file:{p}") == s
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(seq_to_json(s))))
    assert build("file:-") == s


def test_trivial_pieces():
    d = E(4, 0)
    ideal = build(trivial_ideal(d))
    assert names(ideal.groups) == ("0", "0", "0", "Z", "Z", "0")
    quot = build(trivial_quotient(d))
    assert names(quot.groups) == ("0", "Z", "Z", "0", "0", "0")
    assert validate_exactness(ideal).ok and validate_exactness(quot).ok


def test_descriptor_validation():
    with pytest.raises(DescriptorError):
        ExtensionDescriptor("X")
    with pytest.raises(DescriptorError):
        F(1, 0)
