"""
测试公共配置与夹具
"""
import os
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from logger.logger import logger  # noqa: E402
from utils.config_manager import config  # noqa: E402
from HistEqualizeTool.core import GrayImage  # noqa: E402

# 测试不写日志文件；CLI 会按配置重新设置 logger
logger.set_file_enabled(False)
config.update_in_memory({"logging": {"to_file": False}})

E1_PIXELS = [0, 0, 0, 50, 50, 100, 200, 200]


@pytest.fixture
def e1_image():
    return GrayImage.from_pixels(8, 1, E1_PIXELS)


@pytest.fixture
def constant_image():
    return GrayImage.from_pixels(4, 1, [7, 7, 7, 7])


@pytest.fixture
def black_image():
    return GrayImage.from_pixels(3, 2, [0] * 6)


@pytest.fixture
def white_image():
    return GrayImage.from_pixels(3, 2, [255] * 6)


@pytest.fixture
def two_value_image():
    return GrayImage.from_pixels(4, 2, [0] * 4 + [255] * 4)


@st.composite
def gray_images(draw, max_side=12, values=st.integers(0, 255)):
    width = draw(st.integers(1, max_side))
    height = draw(st.integers(1, max_side))
    pixels = draw(st.lists(values, min_size=width * height, max_size=width * height))
    return GrayImage(width, height, np.array(pixels, dtype=np.uint8))


@st.composite
def sparse_gray_images(draw, max_side=16):
    """只用少数几个灰度值的图像，直方图中大部分灰度缺失"""
    levels = draw(st.lists(st.integers(0, 255), min_size=1, max_size=8, unique=True))
    return draw(gray_images(max_side=max_side, values=st.sampled_from(levels)))
