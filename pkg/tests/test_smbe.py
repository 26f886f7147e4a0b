import time

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import gray_images, sparse_gray_images
from HistEqualizeTool.core import GRAY_LEVELS, GrayImage, generate_hist, histogram_from_counts
from HistEqualizeTool.errors import InvalidImage
from HistEqualizeTool.oracle import brute_force_threshold
from HistEqualizeTool.smbe import (SENTINEL, SmbeTable, Threshold, calculate_smbe, find_threshold,
                                   smbe_closed_form)


def table_from(entries):
    values = np.full(GRAY_LEVELS, SENTINEL, dtype=np.int64)
    for gamma, smbe in entries.items():
        values[gamma] = smbe
    return SmbeTable(values)


def present(table):
    return {int(g): int(table.entries[g]) for g in table.candidates()}


def random_histograms(count, seed=7):
    """1..100000 像素的随机直方图，其中一部分只有不到 56 个灰度出现"""
    rng = np.random.default_rng(seed)
    for index in range(count):
        total = int(rng.integers(1, 100_001))
        if index % 2:
            support = rng.choice(GRAY_LEVELS, size=int(rng.integers(1, 56)), replace=False)
        else:
            support = np.arange(GRAY_LEVELS)
        weights = rng.random(support.size)
        freq = np.zeros(GRAY_LEVELS, dtype=np.int64)
        freq[support] = rng.multinomial(total, weights / weights.sum())
        yield histogram_from_counts(freq)


def test_calculate_smbe_worked_example(e1_image):
    table = calculate_smbe(generate_hist(e1_image))
    assert present(table) == {0: 80, 50: -32, 100: 112, 200: 400}
    assert int(np.count_nonzero(table.entries == SENTINEL)) == GRAY_LEVELS - 4


def test_calculate_smbe_constant_image(constant_image):
    assert present(calculate_smbe(generate_hist(constant_image))) == {7: -28}


def test_calculate_smbe_all_black(black_image):
    assert present(calculate_smbe(generate_hist(black_image))) == {0: 0}


def test_calculate_smbe_all_white(white_image):
    assert present(calculate_smbe(generate_hist(white_image))) == {255: -255 * 6}


def test_closed_form_examples(e1_image, black_image):
    hist = generate_hist(e1_image)
    assert smbe_closed_form(hist, 50) == -32
    assert smbe_closed_form(hist, 0) == 256 * (8 - 3) - 2 * 600
    assert smbe_closed_form(generate_hist(black_image), 0) == 0
    # 缺失灰度值同样有定义
    assert smbe_closed_form(hist, 1) == 80 + 8


def test_closed_form_rejects_out_of_range(e1_image):
    with pytest.raises(ValueError):
        smbe_closed_form(generate_hist(e1_image), 256)


def test_find_threshold_worked_example():
    threshold = find_threshold(table_from({0: 80, 50: -32, 100: 112, 200: 400}))
    assert threshold == Threshold(50, -32)


def test_find_threshold_tie_keeps_first_index():
    assert find_threshold(table_from({10: 5, 20: -5})) == Threshold(10, 5)


def test_find_threshold_single_candidate():
    assert find_threshold(table_from({7: -56})) == Threshold(7, -56)


def test_find_threshold_extreme_values():
    assert find_threshold(table_from({3: -(2**31) + 1, 9: SENTINEL - 1})) == Threshold(9, SENTINEL - 1)


def test_smbe_table_needs_a_candidate():
    with pytest.raises(InvalidImage):
        SmbeTable(np.full(GRAY_LEVELS, SENTINEL))


@pytest.mark.parametrize("pixels, expected", [
    ([28, 100], Threshold(28, 56)),   # SMBE 56 与 -56
    ([0, 128], Threshold(0, 0)),      # 两个 0
])
def test_constructed_exact_ties(pixels, expected):
    hist = generate_hist(GrayImage.from_pixels(len(pixels), 1, pixels))
    assert find_threshold(calculate_smbe(hist)) == expected
    assert brute_force_threshold(hist) == expected.value


def test_recursion_matches_closed_form_on_random_histograms():
    started = time.perf_counter()
    sparse_seen = 0
    for hist in random_histograms(1000):
        table = calculate_smbe(hist)
        present_values = hist.present_values()
        if GRAY_LEVELS - present_values.size >= 200:
            sparse_seen += 1
        for gamma in present_values:
            assert int(table.entries[gamma]) == smbe_closed_form(hist, int(gamma))
        assert np.array_equal(table.entries != SENTINEL, hist.freq > 0)
        assert find_threshold(table).value == brute_force_threshold(hist)
    assert sparse_seen >= 400
    assert time.perf_counter() - started < 10


@given(sparse_gray_images())
def test_recursion_matches_closed_form_sparse(image):
    hist = generate_hist(image)
    table = calculate_smbe(hist)
    for gamma in hist.present_values():
        assert int(table.entries[gamma]) == smbe_closed_form(hist, int(gamma))


@given(gray_images())
def test_threshold_is_never_absent(image):
    hist = generate_hist(image)
    threshold = find_threshold(calculate_smbe(hist))
    assert hist.freq[threshold.value] > 0
    candidates = [abs(smbe_closed_form(hist, int(g))) for g in hist.present_values()]
    assert abs(threshold.smbe) == min(candidates)


@given(gray_images(values=st.integers(0, 254)))
def test_brightening_by_one_shifts_pixel_sum(image):
    hist = generate_hist(image)
    shifted = GrayImage(image.width, image.height, image.pixels.astype(np.int64) + 1)
    shifted_hist = generate_hist(shifted)
    assert shifted_hist.pixel_sum == hist.pixel_sum + hist.total

    table = calculate_smbe(shifted_hist)
    for gamma in shifted_hist.present_values():
        gamma = int(gamma)
        # 平移后 f_c(γ) 等于原图的 f_c(γ-1)
        expected = smbe_closed_form(hist, gamma - 1) + hist.total - 2 * hist.total
        assert smbe_closed_form(shifted_hist, gamma) == expected
        assert int(table.entries[gamma]) == expected
