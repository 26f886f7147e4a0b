"""
HistEqualizeTool - 纯整数 MMBEBHE 对比度增强工具包

主要功能：
- 直方图生成、SMBE 递推与阈值选择
- 分段累积直方图与余数取整的整数映射
- 精确有理数参考实现与比对
- 阶段级流水线仿真与周期模型

使用示例：
    from HistEqualizeTool import GrayImage, mmbebhe, apply_map

    image = GrayImage.from_pixels(8, 1, [0, 0, 0, 50, 50, 100, 200, 200])
    output = apply_map(image, mmbebhe(image))
"""

from .core import GRAY_LEVELS, MAX_PIXELS, GrayImage, Histogram, generate_hist, histogram_from_counts
from .smbe import SENTINEL, SmbeTable, Threshold, calculate_smbe, find_threshold, smbe_closed_form
from .equalize import (CumulativeSegment, PixelMap, apply_map, create_map, gen_cumu_hist,
                       he_map, mmbebhe)
from .oracle import RationalMap, ambe, brute_force_threshold, reference_mmbebhe
from .errors import (HistEqualizeError, ImageTooLarge, InvalidBounds, DimensionMismatch,
                     MalformedHeader, UnsupportedMaxval, TruncatedData)

__version__ = "1.0.0"

__all__ = [
    'GRAY_LEVELS',
    'MAX_PIXELS',
    'SENTINEL',
    'GrayImage',
    'Histogram',
    'SmbeTable',
    'Threshold',
    'CumulativeSegment',
    'PixelMap',
    'RationalMap',
    'generate_hist',
    'histogram_from_counts',
    'calculate_smbe',
    'smbe_closed_form',
    'find_threshold',
    'gen_cumu_hist',
    'create_map',
    'mmbebhe',
    'he_map',
    'apply_map',
    'reference_mmbebhe',
    'brute_force_threshold',
    'ambe',
    'HistEqualizeError',
    'ImageTooLarge',
    'InvalidBounds',
    'DimensionMismatch',
    'MalformedHeader',
    'UnsupportedMaxval',
    'TruncatedData',
]
