"""
SMBE 计算与阈值选择模块
对应流水线的 Calculate_SMBE 与 Find_Threshold 阶段
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from logger.logger import logger
from .core import GRAY_LEVELS, MAX_GRAY, Histogram
from .errors import InvalidImage

# 不存在的灰度值对应的 SMBE，保证不会被选为阈值
SENTINEL = 0x7FFFFFFF

INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1


@dataclass(frozen=True, eq=False)
class SmbeTable:
    """
    256 项有符号 32 位 SMBE 表，缺失灰度值为 SENTINEL
    """
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.int64).reshape(-1)
        if entries.size != GRAY_LEVELS:
            raise InvalidImage(f"SMBE table needs {GRAY_LEVELS} entries, got {entries.size}")
        if entries.min() < INT32_MIN or entries.max() > INT32_MAX:
            raise InvalidImage("SMBE entries must fit signed 32 bits")
        if not np.any(entries != SENTINEL):
            raise InvalidImage("SMBE table has no candidate gray value")
        frozen = entries.astype(np.int32)
        frozen.setflags(write=False)
        object.__setattr__(self, "entries", frozen)

    def candidates(self) -> np.ndarray:
        """非哨兵项的灰度值"""
        return np.flatnonzero(self.entries != SENTINEL)

    def __eq__(self, other):
        if not isinstance(other, SmbeTable):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    __hash__ = None


@dataclass(frozen=True)
class Threshold:
    """阈值 γ 及其 SMBE"""
    value: int
    smbe: int


def calculate_smbe(hist: Histogram) -> SmbeTable:
    """
    按递推式逐灰度计算 SMBE（Calculate_SMBE）

    累加器在每个 γ 都更新（缺失灰度值贡献 +n），只有 freq[γ] > 0 时才写入表项。
    必须按 γ 升序串行执行。

    参数:
        hist: 输入直方图

    返回:
        SmbeTable: SMBE 表
    """
    n = int(hist.total)
    freq = [int(f) for f in hist.freq]
    entries: List[int] = [SENTINEL] * GRAY_LEVELS

    # prev 寄存器
    prev = GRAY_LEVELS * (n - freq[0]) - 2 * int(hist.pixel_sum)
    for gamma in range(GRAY_LEVELS):
        if gamma > 0:
            prev += n - GRAY_LEVELS * freq[gamma]
        if freq[gamma] == 0:
            continue
        # MAX_PIXELS 保证不会溢出
        assert INT32_MIN <= prev <= INT32_MAX and abs(prev) < SENTINEL, \
            f"SMBE {prev} at gray {gamma} does not fit 32 bits"
        entries[gamma] = prev

    logger.debug(f"Calculate_SMBE: {np.count_nonzero(hist.freq)} candidates")
    return SmbeTable(np.array(entries, dtype=np.int64))


def smbe_closed_form(hist: Histogram, gamma: int) -> int:
    """
    SMBE 的闭式解 n(L+γ) − L·f_c(γ) − 2S，对所有 γ 都有定义

    参数:
        hist: 输入直方图
        gamma: 灰度值

    返回:
        int: 64 位范围内的 SMBE
    """
    if not 0 <= gamma <= MAX_GRAY:
        raise ValueError(f"gray value {gamma} out of range")
    cumulative = int(np.sum(hist.freq[:gamma + 1], dtype=np.int64))
    n = int(hist.total)
    return n * (GRAY_LEVELS + gamma) - GRAY_LEVELS * cumulative - 2 * int(hist.pixel_sum)


def find_threshold(table: SmbeTable) -> Threshold:
    """
    寻找 |SMBE| 最小的灰度值（Find_Threshold）

    升序扫描，严格小于才替换，因此并列时保留最先出现的灰度值。

    参数:
        table: SMBE 表

    返回:
        Threshold: 阈值及其 SMBE
    """
    threshold_val = SENTINEL
    index = None
    smbe_at_index = None
    for gamma, smbe_val in enumerate(int(v) for v in table.entries):
        if smbe_val == SENTINEL:
            continue
        if (smbe_val < 0 and -smbe_val < threshold_val) or (smbe_val >= 0 and smbe_val < threshold_val):
            threshold_val = -smbe_val if smbe_val < 0 else smbe_val
            index = gamma
            smbe_at_index = smbe_val
        elif index is None:
            # |SMBE| == 2^31 时上面的比较不成立，仍取第一个候选
            index, smbe_at_index, threshold_val = gamma, smbe_val, abs(smbe_val)

    logger.debug(f"Find_Threshold: threshold={index}, smbe={smbe_at_index}")
    return Threshold(index, smbe_at_index)
