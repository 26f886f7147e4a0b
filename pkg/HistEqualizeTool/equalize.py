"""
均衡化模块
分段累积直方图（Gen_cumu_hist）、整数映射（Create_map）、MMBEBHE 驱动、普通 HE 与映射应用
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from logger.logger import logger
from .core import GRAY_LEVELS, MAX_GRAY, GrayImage, Histogram, generate_hist
from .errors import InvalidBounds, InvalidImage
from .smbe import calculate_smbe, find_threshold


@dataclass(frozen=True, eq=False)
class CumulativeSegment:
    """
    [lo, hi] 内的局部累积频数

    属性:
        lo: 下界 idx_l
        hi: 上界 idx_h
        cumu: 长度 hi-lo+1 的累积频数，下标为 γ-lo
        count: 段内像素数（即 cumu 最后一项）
    """
    lo: int
    hi: int
    cumu: np.ndarray
    count: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi <= MAX_GRAY:
            raise InvalidBounds(self.lo, self.hi)
        cumu = np.asarray(self.cumu, dtype=np.int64).reshape(-1)
        if cumu.size != self.hi - self.lo + 1:
            raise InvalidImage(f"segment [{self.lo}, {self.hi}] needs {self.hi - self.lo + 1} entries")
        if np.any(np.diff(cumu) < 0):
            raise InvalidImage("cumulative frequencies must be non-decreasing")
        if int(cumu[-1]) != int(self.count):
            raise InvalidImage(f"segment count {self.count} differs from last cumulative {cumu[-1]}")
        cumu.setflags(write=False)
        object.__setattr__(self, "cumu", cumu)
        object.__setattr__(self, "count", int(self.count))

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1


@dataclass(frozen=True, eq=False)
class PixelMap:
    """
    256 项灰度映射表 F

    属性:
        map: 输入灰度 -> 输出灰度
        threshold: 构造时使用的分割点（普通 HE 约定为 255）
    """
    map: np.ndarray
    threshold: int

    def __post_init__(self):
        values = np.asarray(self.map, dtype=np.int64).reshape(-1)
        if values.size != GRAY_LEVELS:
            raise InvalidImage(f"pixel map needs {GRAY_LEVELS} entries, got {values.size}")
        if values.min() < 0 or values.max() > MAX_GRAY:
            raise InvalidImage("pixel map entries must lie in [0, 255]")
        if not 0 <= int(self.threshold) <= MAX_GRAY:
            raise InvalidImage(f"threshold {self.threshold} out of range")
        frozen = values.astype(np.uint8)
        frozen.setflags(write=False)
        object.__setattr__(self, "map", frozen)
        object.__setattr__(self, "threshold", int(self.threshold))

    @classmethod
    def identity(cls, threshold: int = MAX_GRAY) -> "PixelMap":
        return cls(np.arange(GRAY_LEVELS), threshold)

    def __getitem__(self, gray: int) -> int:
        return int(self.map[gray])

    def __eq__(self, other):
        if not isinstance(other, PixelMap):
            return NotImplemented
        return self.threshold == other.threshold and np.array_equal(self.map, other.map)

    __hash__ = None


def gen_cumu_hist(hist: Histogram, lo: int, hi: int) -> CumulativeSegment:
    """
    计算 [lo, hi] 内的累积频数（Gen_cumu_hist）

    prev 寄存器在进入分段时清零，累积频数只在段内有效。

    参数:
        hist: 直方图
        lo: 下界
        hi: 上界

    返回:
        CumulativeSegment: 局部累积频数
    """
    if not 0 <= lo <= hi <= MAX_GRAY:
        raise InvalidBounds(lo, hi)
    cumu = np.cumsum(hist.freq[lo:hi + 1], dtype=np.int64)
    return CumulativeSegment(lo, hi, cumu, int(cumu[-1]))


def create_map(seg: CumulativeSegment) -> np.ndarray:
    """
    按整数公式生成 [lo, hi] 段的映射（Create_map）

    numerator = count·lo + (hi-lo)·cumu，商加上余数修正：余数 > (count >> 1) 时加一。
    段内没有像素时返回恒等映射。

    参数:
        seg: 分段累积频数

    返回:
        np.ndarray: 长度 hi-lo+1 的映射值，下标为 k-lo
    """
    if seg.count == 0:
        return np.arange(seg.lo, seg.hi + 1, dtype=np.int64)

    num_entries = seg.count
    half_num_entries = num_entries >> 1
    numerator = num_entries * seg.lo + (seg.hi - seg.lo) * seg.cumu
    quotient, remainder = np.divmod(numerator, num_entries)
    return quotient + (remainder > half_num_entries)


def equalize_segment(hist: Histogram, lo: int, hi: int) -> Tuple[CumulativeSegment, np.ndarray]:
    """对单个分段依次执行 Gen_cumu_hist 与 Create_map"""
    seg = gen_cumu_hist(hist, lo, hi)
    values = create_map(seg)
    logger.debug(f"segment [{lo}, {hi}]: count={seg.count}")
    return seg, values


def segment_bounds(threshold: int) -> List[Tuple[int, int]]:
    """阈值对应的分段；阈值为 255 时没有上半段"""
    if threshold >= MAX_GRAY:
        return [(0, MAX_GRAY)]
    return [(0, threshold), (threshold + 1, MAX_GRAY)]


def bi_histogram_map(hist: Histogram, threshold: int) -> PixelMap:
    """
    沿阈值拆分直方图，两半各自均衡后合并成一张映射表

    参数:
        hist: 直方图
        threshold: 分割点 T

    返回:
        PixelMap: 合并后的映射
    """
    merged = np.empty(GRAY_LEVELS, dtype=np.int64)
    for lo, hi in segment_bounds(threshold):
        _, values = equalize_segment(hist, lo, hi)
        merged[lo:hi + 1] = values
    return PixelMap(merged, threshold)


def mmbebhe_from_hist(hist: Histogram) -> PixelMap:
    """直方图层面的 MMBEBHE"""
    threshold = find_threshold(calculate_smbe(hist))
    logger.debug(f"MMBEBHE threshold={threshold.value}, smbe={threshold.smbe}")
    return bi_histogram_map(hist, threshold.value)


def mmbebhe(image: GrayImage) -> PixelMap:
    """
    MMBEBHE 驱动：直方图 -> SMBE -> 阈值 -> 两段累积直方图与映射

    参数:
        image: 输入图像

    返回:
        PixelMap: 输入灰度到输出灰度的映射
    """
    return mmbebhe_from_hist(generate_hist(image))


def he_map(image: GrayImage) -> PixelMap:
    """全范围单段的普通直方图均衡，threshold 约定为 255"""
    hist = generate_hist(image)
    _, values = equalize_segment(hist, 0, MAX_GRAY)
    return PixelMap(values, MAX_GRAY)


def apply_map(image: GrayImage, pixel_map: PixelMap) -> GrayImage:
    """Y = F(X)：逐像素查表"""
    return GrayImage(image.width, image.height, pixel_map.map[image.pixels])
