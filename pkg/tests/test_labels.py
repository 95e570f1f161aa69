import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from obmo3d.errors import ContractViolation, ParseError
from obmo3d.geometry import Box2
from obmo3d.labels import (
    ObjectLabel,
    PseudoLabel,
    parse_labels,
    write_augmented_frame,
    write_labels,
)

from conftest import make_label

CAR_LINE = "Car 0.00 0 -1.57 100.0 100.0 200.0 180.0 1.53 1.63 3.88 5.0 1.0 50.0 -1.50"
DONTCARE_LINE = (
    "DontCare -1.00 -1 -10.000000 500.000000 160.000000 580.000000 190.000000 "
    "-1.000000 -1.000000 -1.000000 -1000.000000 -1000.000000 -1000.000000 -10.000000"
)


class TestParse:
    def test_reads_kitti_field_order(self):
        (label,) = parse_labels(CAR_LINE)
        assert label.class_name == "Car"
        assert label.dims == (1.53, 1.63, 3.88)
        assert label.location == (5.0, 1.0, 50.0)
        assert label.yaw == -1.50
        assert label.alpha == -1.57
        assert label.bbox2d == Box2(100.0, 100.0, 200.0, 180.0)
        assert label.score is None

    def test_trailing_score(self):
        (label,) = parse_labels(CAR_LINE + " 0.87")
        assert label.score == 0.87
        assert label.dims == (1.53, 1.63, 3.88)

    def test_wrong_field_count(self):
        with pytest.raises(ParseError) as info:
            parse_labels("Car 0.00 0")
        assert info.value.line_number == 1

    def test_non_numeric_field(self):
        with pytest.raises(ParseError):
            parse_labels(CAR_LINE.replace("3.88", "abc"))

    def test_line_numbers_in_errors(self):
        with pytest.raises(ParseError) as info:
            parse_labels(CAR_LINE + "\nCar 0.0 0\n")
        assert info.value.line_number == 2

    def test_angle_wrapping_warns(self, caplog):
        line = CAR_LINE.replace("-1.57", "4.00")  # alpha outside [-pi, pi]
        with caplog.at_level("WARNING"):
            (label,) = parse_labels(line)
        assert -math.pi <= label.alpha <= math.pi
        assert label.alpha == pytest.approx(4.0 - 2 * math.pi)
        assert any("wrapped" in r.message for r in caplog.records)

    def test_dontcare_passes_through_untouched(self):
        (label,) = parse_labels(DONTCARE_LINE)
        assert label.is_dontcare
        assert label.alpha == -10.0
        assert label.truncation == -1.0
        assert label.dims == (-1.0, -1.0, -1.0)

    def test_invariant_violations_are_parse_errors(self):
        bad_dims = CAR_LINE.replace("1.53", "-1.53")
        with pytest.raises(ParseError):
            parse_labels(bad_dims)


class TestWrite:
    def test_round_trip_identity(self):
        labels = parse_labels(CAR_LINE + " 0.87\n" + DONTCARE_LINE)
        text = write_labels(labels, with_score=False)
        assert parse_labels(text)[0].score is None
        text16 = write_labels(labels, with_score=True)
        again = parse_labels(text16)
        assert [l.location for l in again] == [l.location for l in labels]
        assert parse_labels(write_labels(again, with_score=True)) == again

    def test_gt_without_score_writes_one(self):
        (label,) = parse_labels(CAR_LINE)
        line = write_labels([label], with_score=True).rstrip("\n")
        assert line.endswith(" 1.000000")

    def test_empty_list(self):
        assert write_labels([]) == ""

    def test_decimals_configurable(self):
        (label,) = parse_labels(CAR_LINE)
        line = write_labels([label], decimals=2).splitlines()[0]
        assert " 3.88 " in line
        assert line.split()[1] == "0.00"  # truncation stays at 2 decimals


class TestAugmentedFrame:
    def test_counts_and_order(self, k100):
        gt = make_label(location=(0.0, 1.0, 20.0), calib=k100)
        pseudo = [
            PseudoLabel(make_label(location=(0.0, 1.04, 20.8), calib=k100), 0.04, 0.8, "linear"),
            PseudoLabel(make_label(location=(0.0, 0.96, 19.2), calib=k100), -0.04, 0.8, "linear"),
        ]
        text = write_augmented_frame([gt], pseudo)
        lines = text.splitlines()
        assert len(lines) == 3
        assert lines[0].endswith(" 1.000000")

    def test_single_gt(self, k100):
        gt = make_label(location=(0.0, 1.0, 20.0), calib=k100)
        assert len(write_augmented_frame([gt], []).splitlines()) == 1

    def test_quality_written_in_score_column(self, k100):
        pseudo = PseudoLabel(
            make_label(location=(5.2, 1.04, 52.0), calib=k100), 0.04, 0.5, "linear"
        )
        text = write_augmented_frame([], [pseudo])
        assert text.splitlines()[0].split()[15] == "0.500000"

    def test_nonpositive_quality_rejected(self, k100):
        pseudo = PseudoLabel(make_label(calib=k100), 0.04, 0.0, "linear")
        with pytest.raises(ContractViolation):
            write_augmented_frame([], [pseudo])


class TestInvariants:
    def test_bad_bbox_rejected(self):
        with pytest.raises(ValueError):
            make_label(bbox2d=Box2(10, 10, 5, 20))

    def test_bad_occlusion_rejected(self):
        with pytest.raises(ValueError):
            make_label(occlusion=7)

    def test_bad_truncation_rejected(self):
        with pytest.raises(ValueError):
            make_label(truncation=1.5)

    def test_out_of_range_yaw_rejected(self):
        with pytest.raises(ValueError):
            make_label(yaw=4.0, alpha=0.0)

    def test_pseudo_zero_shift_must_have_unit_quality(self):
        with pytest.raises(ValueError):
            PseudoLabel(make_label(), 0.0, 0.9, "linear")

    def test_pseudo_strategy_checked(self):
        with pytest.raises(ValueError):
            PseudoLabel(make_label(), 0.04, 0.9, "best")


six_dp = st.integers(min_value=-(10**8), max_value=10**8).map(lambda n: n / 10**6)
two_dp = st.integers(min_value=0, max_value=100).map(lambda n: n / 100)


@given(
    trunc=two_dp,
    occ=st.integers(0, 3),
    alpha=st.integers(-3141592, 3141592).map(lambda n: n / 10**6),
    yaw=st.integers(-3141592, 3141592).map(lambda n: n / 10**6),
    n_left=st.integers(-(10**8), 10**8),
    n_top=st.integers(-(10**8), 10**8),
    n_dw=st.integers(0, 10**6),
    n_dh=st.integers(0, 10**6),
    dims=st.tuples(
        st.integers(1, 10**7).map(lambda n: n / 10**6),
        st.integers(1, 10**7).map(lambda n: n / 10**6),
        st.integers(1, 10**7).map(lambda n: n / 10**6),
    ),
    loc=st.tuples(six_dp, six_dp, six_dp),
    score=st.one_of(st.none(), two_dp),
)
def test_round_trip_property(trunc, occ, alpha, yaw, n_left, n_top, n_dw, n_dh, dims, loc, score):
    """parse(write(label)) reproduces every field for 6-decimal values."""
    label = ObjectLabel(
        class_name="Car",
        truncation=trunc,
        occlusion=occ,
        alpha=alpha,
        bbox2d=Box2(
            n_left / 10**6, n_top / 10**6, (n_left + n_dw) / 10**6, (n_top + n_dh) / 10**6
        ),
        dims=dims,
        location=loc,
        yaw=yaw,
        score=score,
    )
    (again,) = parse_labels(write_labels([label], with_score=score is not None))
    assert again == label
