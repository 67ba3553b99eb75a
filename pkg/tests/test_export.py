from fractions import Fraction

from helpers import cset, random_set
from src.masks import Mask, phi_hat
from src.report import export_intervals, interval_frame, read_intervals
from src.sets import CylinderSet, lemma_stream


def test_single_interval(tmp_path):
    path = export_intervals(cset(2, "1."), tmp_path / "out" / "shannon.tsv")
    assert path.read_text() == "lo\thi\tvalue\n1/1\t2/1\t1\n"


def test_adjacent_cylinders_merge():
    df = interval_frame(cset(3, "1.", "2.", "0.1"))
    assert df.values.tolist() == [["1/3", "2/3", "1"], ["1/1", "3/1", "1"]]


def test_empty_set_writes_header_only(tmp_path):
    path = export_intervals(CylinderSet.empty(2), tmp_path / "empty.tsv")
    assert path.read_text() == "lo\thi\tvalue\n"


def test_step_table_rows():
    haar = Mask.exact(2, 1, [Fraction(1, 2), Fraction(1, 2)])
    df = interval_frame(phi_hat(haar, 2))
    assert df.values.tolist() == [["0/1", "1/1", "1"], ["1/1", "4/1", "0"]]


def test_stream_is_enumerated():
    df = interval_frame(lemma_stream(cset(2, "1.")), depth=3)
    assert df.values.tolist() == [["1/8", "1/1", "1"]]


def test_read_back(tmp_path, rng):
    for _ in range(20):
        s = random_set(rng, 3, 2, 1)
        path = export_intervals(s, tmp_path / "s.tsv")
        assert read_intervals(path, 3) == s
