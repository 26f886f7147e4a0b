from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gray_images, sparse_gray_images
from HistEqualizeTool.core import GRAY_LEVELS, GrayImage, generate_hist
from HistEqualizeTool.corpus import build_corpus
from HistEqualizeTool.equalize import PixelMap, apply_map, he_map, mmbebhe
from HistEqualizeTool.errors import DimensionMismatch
from HistEqualizeTool.oracle import (ambe, brightness_report, brute_force_threshold, compare_maps,
                                     float_brightness_errors, float_histogram, float_reference_map,
                                     float_segment_cdf, float_segment_map, float_threshold, format_decimal,
                                     integer_map_from_rational, mean_brightness, reference_mmbebhe,
                                     remainder_rule, round_half_up, scaled_brightness_error, verify_image)
from HistEqualizeTool.smbe import smbe_closed_form


def test_reference_mmbebhe_worked_example(e1_image):
    rmap = reference_mmbebhe(e1_image)
    assert rmap.threshold == 50
    assert [(s.lo, s.hi, s.count) for s in rmap.segments] == [(0, 50, 5), (51, 255, 3)]
    assert rmap.entries[0] == Fraction(30)
    assert rmap.entries[100] == Fraction(51) + Fraction(204, 3)
    assert integer_map_from_rational(rmap) == mmbebhe(e1_image)


def test_reference_mmbebhe_threshold_255_has_one_segment(two_value_image):
    rmap = reference_mmbebhe(two_value_image)
    assert rmap.threshold == 255
    assert len(rmap.segments) == 1
    assert rmap.entries[0] == Fraction(255, 2)


def test_scaled_brightness_error_is_the_closed_form(e1_image):
    hist = generate_hist(e1_image)
    freq = [int(f) for f in hist.freq]
    for gamma in (0, 1, 50, 100, 200, 255):
        assert scaled_brightness_error(freq, gamma) == smbe_closed_form(hist, gamma)


@settings(deadline=None)
@given(gray_images(), st.integers(0, GRAY_LEVELS - 1))
def test_scaled_brightness_error_matches_closed_form(image, gamma):
    hist = generate_hist(image)
    freq = [int(f) for f in hist.freq]
    assert scaled_brightness_error(freq, gamma) == smbe_closed_form(hist, gamma)


@settings(deadline=None)
@given(gray_images())
def test_float_errors_match_exact_errors(image):
    hist = generate_hist(image)
    freq = [int(f) for f in hist.freq]
    errors = float_brightness_errors(float_histogram(image))
    for gamma in range(GRAY_LEVELS):
        if freq[gamma]:
            assert float(errors[gamma]) == scaled_brightness_error(freq, gamma)
        else:
            assert errors[gamma] == np.inf
    assert float_threshold(errors) == reference_mmbebhe(image).threshold


def test_brute_force_threshold(e1_image, white_image):
    assert brute_force_threshold(generate_hist(e1_image)) == 50
    assert brute_force_threshold(generate_hist(white_image)) == 255


def test_remainder_rule_and_round_half_up_differ_at_half():
    assert remainder_rule(Fraction(255, 2), 4) == 127
    assert round_half_up(Fraction(255, 2)) == 128
    assert remainder_rule(Fraction(301, 3), 3) == 100
    assert remainder_rule(Fraction(302, 3), 3) == 101
    assert round_half_up(Fraction(-1, 2)) == 0


def test_compare_maps():
    identity = PixelMap.identity()
    shifted = PixelMap(np.minimum(np.arange(GRAY_LEVELS) + 1, 255), 255)
    assert compare_maps(identity, identity) is None
    assert compare_maps(identity, shifted) == 0
    assert compare_maps(identity, shifted, tolerance=1) is None


def test_ambe_worked_example(e1_image):
    assert mean_brightness(e1_image) == 75
    assert ambe(e1_image, apply_map(e1_image, mmbebhe(e1_image))) == Fraction(219, 8)
    assert ambe(e1_image, apply_map(e1_image, he_map(e1_image))) == Fraction(707, 8)
    assert ambe(e1_image, e1_image) == 0


def test_ambe_two_value_image(two_value_image):
    assert ambe(two_value_image, apply_map(two_value_image, mmbebhe(two_value_image))) == Fraction(127, 2)


def test_ambe_dimension_mismatch(e1_image):
    with pytest.raises(DimensionMismatch):
        ambe(e1_image, GrayImage.from_pixels(4, 2, [0] * 8))


@pytest.mark.parametrize("value, digits, text", [
    (Fraction(219, 8), 6, "27.375"),
    (Fraction(1, 3), 6, "0.333333"),
    (Fraction(2, 3), 6, "0.666667"),
    (Fraction(5), 6, "5"),
    (Fraction(-1, 2), 6, "-0.5"),
    (Fraction(1, 10**7), 6, "0"),
    (Fraction(-1, 10**7), 6, "0"),
    (Fraction(7, 2), 0, "4"),
])
def test_format_decimal(value, digits, text):
    assert format_decimal(value, digits) == text


def test_verify_image_worked_example(e1_image):
    result = verify_image(e1_image)
    assert result.ok
    assert result.notes == ["threshold=50"]
    assert result.first_mismatch is None


@settings(deadline=None)
@given(gray_images())
def test_integer_map_equals_exact_remainder_rule(image):
    rmap = reference_mmbebhe(image)
    integer_map = mmbebhe(image)
    assert rmap.threshold == integer_map.threshold
    assert integer_map_from_rational(rmap) == integer_map
    nearest = PixelMap(np.array([round_half_up(e) for e in rmap.entries]), rmap.threshold)
    assert compare_maps(nearest, integer_map, tolerance=1) is None


@settings(deadline=None)
@given(sparse_gray_images())
def test_float_reference_within_one_level(image):
    assert compare_maps(float_reference_map(image), mmbebhe(image), tolerance=1) is None


def test_float_segment_stages():
    freq = float_histogram(GrayImage.from_pixels(8, 1, [0, 0, 0, 50, 50, 100, 200, 200]))
    cdf = float_segment_cdf(freq, 0, 50)
    assert cdf[0] == pytest.approx(0.6)
    assert cdf[-1] == pytest.approx(1.0)
    assert float_segment_map(cdf, 0, 50)[0] == 30
    empty = float_segment_cdf(freq, 201, 255)
    assert not empty.any()
    assert float_segment_map(empty, 201, 255).tolist() == list(range(201, 256))


def test_float_reference_worked_example(e1_image):
    assert float_reference_map(e1_image) == mmbebhe(e1_image)


@settings(deadline=None, max_examples=50)
@given(gray_images())
def test_verify_image_accepts_random_images(image):
    assert verify_image(image).ok


def test_brightness_report_mean_ratio_undefined(white_image):
    summary = brightness_report([("white", white_image)])
    assert summary.mean_ambe_he == 0
    assert summary.mean_ratio is None
    assert summary.preserved_share == 1


def test_brightness_report_needs_images():
    with pytest.raises(ValueError):
        brightness_report([])


def test_corpus_is_deterministic():
    first = build_corpus(size=12, seed=3, width=16, height=12)
    second = build_corpus(size=12, seed=3, width=16, height=12)
    assert [name for name, _ in first] == [name for name, _ in second]
    assert all(a == b for (_, a), (_, b) in zip(first, second))
    assert first[0][0] == "constant-7"


def test_corpus_brightness_preservation():
    images = build_corpus()
    assert len(images) >= 100
    summary = brightness_report(images)
    assert summary.preserved_share >= Fraction(9, 10)
    assert summary.mean_ratio < Fraction(1, 2)
    for name, image in images:
        assert verify_image(image).ok, name
