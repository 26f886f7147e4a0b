"""
浮点参考实现的分阶段计时
按与仿真相同的五个阶段运行 float64 版本，用墙钟时间（μs）与仿真计时并列对比
"""
import time
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np

from logger.logger import logger
from ..core import GRAY_LEVELS, GrayImage
from ..equalize import PixelMap, segment_bounds
from ..oracle import (float_brightness_errors, float_histogram, float_segment_cdf, float_segment_map,
                      float_threshold)
from .cycle_model import Stage


@dataclass(frozen=True)
class FloatTiming:
    """各阶段最快一轮的墙钟时间（分段阶段为两段之和）与得到的映射"""
    micros: Dict[Stage, float]
    pixel_map: PixelMap


def _timed(fn: Callable, *args) -> Tuple[object, float]:
    started = time.perf_counter()
    result = fn(*args)
    return result, (time.perf_counter() - started) * 1e6


def _run_once(image: GrayImage) -> FloatTiming:
    micros = {stage: 0.0 for stage in Stage}

    freq, micros[Stage.GENERATE_HIST] = _timed(float_histogram, image)
    errors, micros[Stage.CALCULATE_SMBE] = _timed(float_brightness_errors, freq)
    threshold, micros[Stage.FIND_THRESHOLD] = _timed(float_threshold, errors)

    values = np.empty(GRAY_LEVELS, dtype=np.float64)
    for lo, hi in segment_bounds(threshold):
        cdf, elapsed = _timed(float_segment_cdf, freq, lo, hi)
        micros[Stage.GEN_CUMU_HIST] += elapsed
        values[lo:hi + 1], elapsed = _timed(float_segment_map, cdf, lo, hi)
        micros[Stage.CREATE_MAP] += elapsed

    return FloatTiming(micros, PixelMap(np.clip(values, 0, GRAY_LEVELS - 1), threshold))


def time_float_reference(image: GrayImage, repeats: int = 5) -> FloatTiming:
    """
    多次运行浮点参考流水线，每个阶段取最短时间

    参数:
        image: 输入图像
        repeats: 运行轮数

    返回:
        FloatTiming: 各阶段 μs 与映射表
    """
    if repeats < 1:
        raise ValueError(f"repeats must be positive, got {repeats}")
    runs = [_run_once(image) for _ in range(repeats)]
    best = {stage: min(run.micros[stage] for run in runs) for stage in Stage}
    logger.debug(f"浮点参考计时: {repeats} 轮, " +
                 ", ".join(f"{stage}={best[stage]:.2f}us" for stage in Stage))
    return FloatTiming(best, runs[0].pixel_map)
