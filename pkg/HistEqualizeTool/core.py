"""
基础类型与直方图生成模块
对应流水线的 Generate_hist 阶段：逐像素统计频数并累计像素和
"""
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from logger.logger import logger
from .errors import ImageTooLarge, InvalidImage

# 灰度级数 L
GRAY_LEVELS = 256
MAX_GRAY = GRAY_LEVELS - 1

# |SMBE| < 1022·n，n 不超过该值时 SMBE 可放入有符号 32 位寄存器
MAX_PIXELS = 2_500_000

UINT32_MAX = 2**32 - 1


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class GrayImage:
    """
    8 位灰度图像，像素按光栅顺序存放

    属性:
        width: 宽度（像素）
        height: 高度（像素）
        pixels: 长度为 width*height 的只读 uint8 数组
    """
    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if int(self.width) < 1 or int(self.height) < 1:
            raise InvalidImage(f"image dimensions must be positive, got {self.width}x{self.height}")

        raw = np.asarray(self.pixels)
        if raw.size != int(self.width) * int(self.height):
            raise InvalidImage(
                f"pixel count {raw.size} does not match {self.width}x{self.height}"
            )
        if raw.size and raw.dtype != np.uint8:
            if not np.issubdtype(raw.dtype, np.integer):
                raise InvalidImage(f"pixels must be integers, got dtype {raw.dtype}")
            if raw.min() < 0 or raw.max() > MAX_GRAY:
                raise InvalidImage("pixel values must lie in [0, 255]")

        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))
        object.__setattr__(self, "pixels", _frozen(raw.astype(np.uint8).reshape(-1).copy()))

    @classmethod
    def from_pixels(cls, width: int, height: int, pixels: Iterable[int]) -> "GrayImage":
        """由光栅顺序的像素序列构造"""
        return cls(width, height, np.fromiter((int(p) for p in pixels), dtype=np.int64))

    @classmethod
    def from_array(cls, array: np.ndarray) -> "GrayImage":
        """由形状为 (height, width) 的二维数组构造"""
        array = np.asarray(array)
        if array.ndim != 2:
            raise InvalidImage(f"expected a 2-D array, got shape {array.shape}")
        height, width = array.shape
        return cls(width, height, array.reshape(-1))

    @property
    def pixel_count(self) -> int:
        return self.width * self.height

    def as_array(self) -> np.ndarray:
        """(height, width) 只读视图"""
        return self.pixels.reshape(self.height, self.width)

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return (self.width == other.width and self.height == other.height
                and np.array_equal(self.pixels, other.pixels))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Histogram:
    """
    频数直方图

    属性:
        freq: 256 个频数计数器 n^k（uint32）
        total: 像素总数 n
        pixel_sum: 像素值之和 S = Σ k·n^k
    """
    freq: np.ndarray
    total: int
    pixel_sum: int

    def __post_init__(self):
        freq = np.asarray(self.freq, dtype=np.int64).reshape(-1)
        if freq.size != GRAY_LEVELS:
            raise InvalidImage(f"histogram needs {GRAY_LEVELS} bins, got {freq.size}")
        if freq.min() < 0 or freq.max() > UINT32_MAX:
            raise InvalidImage("histogram counters must fit unsigned 32 bits")

        total = int(freq.sum())
        pixel_sum = int(np.dot(np.arange(GRAY_LEVELS, dtype=np.int64), freq))
        if total != int(self.total) or pixel_sum != int(self.pixel_sum):
            raise InvalidImage(
                f"inconsistent histogram: counts sum to {total}/{pixel_sum}, "
                f"declared {self.total}/{self.pixel_sum}"
            )
        if total < 1:
            raise InvalidImage("histogram must count at least one pixel")

        object.__setattr__(self, "freq", _frozen(freq.astype(np.uint32)))
        object.__setattr__(self, "total", total)
        object.__setattr__(self, "pixel_sum", pixel_sum)

    def present_values(self) -> np.ndarray:
        """出现过的灰度值（升序）"""
        return np.flatnonzero(self.freq)

    def cumulative(self) -> np.ndarray:
        """全局累积频数 f_c(k)，int64"""
        return np.cumsum(self.freq, dtype=np.int64)

    def __eq__(self, other):
        if not isinstance(other, Histogram):
            return NotImplemented
        return (self.total == other.total and self.pixel_sum == other.pixel_sum
                and np.array_equal(self.freq, other.freq))

    __hash__ = None


def check_pixel_limit(pixel_count: int) -> None:
    """超过 MAX_PIXELS 时抛出 ImageTooLarge"""
    if pixel_count > MAX_PIXELS:
        logger.warning(f"图像过大: {pixel_count} 像素 > {MAX_PIXELS}")
        raise ImageTooLarge(pixel_count, MAX_PIXELS)


def generate_hist(image: GrayImage) -> Histogram:
    """
    统计图像直方图（Generate_hist）

    参数:
        image: 输入灰度图像

    返回:
        Histogram: 频数、像素总数与像素和
    """
    check_pixel_limit(image.pixel_count)

    freq = np.bincount(image.pixels, minlength=GRAY_LEVELS).astype(np.int64)
    pixel_sum = int(image.pixels.sum(dtype=np.uint64))
    logger.debug(f"Generate_hist: n={image.pixel_count}, sum={pixel_sum}")
    return Histogram(freq, image.pixel_count, pixel_sum)


def histogram_from_counts(freq: Sequence[int]) -> Histogram:
    """
    直接由 256 个频数构造直方图

    参数:
        freq: 频数序列

    返回:
        Histogram: total 与 pixel_sum 由频数推出
    """
    counts = np.asarray(freq, dtype=np.int64).reshape(-1)
    if counts.size != GRAY_LEVELS:
        raise InvalidImage(f"histogram needs {GRAY_LEVELS} bins, got {counts.size}")
    total = int(counts.sum())
    check_pixel_limit(total)
    pixel_sum = int(np.dot(np.arange(GRAY_LEVELS, dtype=np.int64), counts))
    return Histogram(counts, total, pixel_sum)
