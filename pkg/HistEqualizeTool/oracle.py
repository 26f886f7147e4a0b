"""
参考实现模块
用精确有理数（fractions.Fraction）独立重算整条流水线，并提供穷举阈值、AMBE 与比对工具，
供 verify 命令和测试使用
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from logger.logger import logger
from .core import GRAY_LEVELS, MAX_GRAY, GrayImage, Histogram, generate_hist
from .equalize import PixelMap, apply_map, he_map, mmbebhe
from .errors import DimensionMismatch
from .smbe import calculate_smbe, find_threshold, smbe_closed_form


@dataclass(frozen=True)
class Segment:
    """参考实现中的一个分段及其像素数"""
    lo: int
    hi: int
    count: int


@dataclass(frozen=True)
class RationalMap:
    """
    未取整的映射 F_exact(k)

    属性:
        entries: 256 个精确有理数
        threshold: 分割点
        segments: 各分段的上下界与像素数（取整规则需要分母）
    """
    entries: Tuple[Fraction, ...]
    threshold: int
    segments: Tuple[Segment, ...]

    def segment_of(self, gray: int) -> Segment:
        for seg in self.segments:
            if seg.lo <= gray <= seg.hi:
                return seg
        raise ValueError(f"gray value {gray} not covered")


def _histogram_lists(image: GrayImage) -> Tuple[List[int], int, int]:
    # 与 core.generate_hist 相互独立的计数
    freq = [0] * GRAY_LEVELS
    for value in image.pixels.tolist():
        freq[value] += 1
    total = sum(freq)
    pixel_sum = sum(k * f for k, f in enumerate(freq))
    return freq, total, pixel_sum


def scaled_brightness_error(freq: Sequence[int], gamma: int) -> Fraction:
    """
    以精确有理数计算 2n·(Ê_γ − E)

    Ê_γ = ((γ+L)·n − L·f_c(γ)) / (2n) 是在 γ 处分割后的中点近似输出均值，E = S/n。
    """
    n = sum(freq)
    pixel_sum = sum(k * f for k, f in enumerate(freq))
    cumulative = sum(freq[:gamma + 1])
    mean_in = Fraction(pixel_sum, n)
    mean_out = Fraction((gamma + GRAY_LEVELS) * n - GRAY_LEVELS * cumulative, 2 * n)
    return 2 * n * (mean_out - mean_in)


def _exact_threshold(freq: Sequence[int]) -> int:
    n = sum(freq)
    mean_in = Fraction(sum(k * f for k, f in enumerate(freq)), n)
    best_gamma = None
    best_error = None
    cumulative = 0
    for gamma in range(GRAY_LEVELS):
        cumulative += freq[gamma]
        if freq[gamma] == 0:
            continue
        mean_out = Fraction((gamma + GRAY_LEVELS) * n - GRAY_LEVELS * cumulative, 2 * n)
        error = abs(2 * n * (mean_out - mean_in))
        if best_error is None or error < best_error:
            best_gamma, best_error = gamma, error
    return best_gamma


def reference_mmbebhe(image: GrayImage) -> RationalMap:
    """
    精确有理数版本的 MMBEBHE

    参数:
        image: 输入图像

    返回:
        RationalMap: 未取整的映射
    """
    freq, _, _ = _histogram_lists(image)
    threshold = _exact_threshold(freq)

    bounds = [(0, threshold)]
    if threshold < MAX_GRAY:
        bounds.append((threshold + 1, MAX_GRAY))

    entries: List[Fraction] = [Fraction(0)] * GRAY_LEVELS
    segments = []
    for lo, hi in bounds:
        count = sum(freq[lo:hi + 1])
        segments.append(Segment(lo, hi, count))
        running = 0
        for k in range(lo, hi + 1):
            running += freq[k]
            if count == 0:
                entries[k] = Fraction(k)
            else:
                # F(k) = X_0 + (X_{L-1} − X_0)·c(k)，c(k) = f_c / n
                entries[k] = lo + (hi - lo) * Fraction(running, count)

    return RationalMap(tuple(entries), threshold, tuple(segments))


def brute_force_threshold(hist: Histogram) -> int:
    """
    对每个出现过的灰度值求闭式 SMBE，返回 |SMBE| 最小且最靠前的灰度值

    参数:
        hist: 直方图

    返回:
        int: 阈值
    """
    candidates = [int(g) for g in np.flatnonzero(hist.freq)]
    errors = [abs(smbe_closed_form(hist, g)) for g in candidates]
    best = min(errors)
    return candidates[errors.index(best)]


def remainder_rule(value: Fraction, count: int) -> int:
    """把 count 为分母的有理数按“余数 > count >> 1 则进一”取整"""
    quotient = value.numerator // value.denominator
    remainder = (value - quotient) * count
    assert remainder.denominator == 1, f"{value} is not a multiple of 1/{count}"
    return quotient + (1 if int(remainder) > (count >> 1) else 0)


def round_half_up(value: Fraction) -> int:
    """就近取整，0.5 向上"""
    shifted = value + Fraction(1, 2)
    return shifted.numerator // shifted.denominator


def integer_map_from_rational(rmap: RationalMap) -> PixelMap:
    """对精确映射逐项套用余数取整规则"""
    values = []
    for k, entry in enumerate(rmap.entries):
        seg = rmap.segment_of(k)
        values.append(int(entry) if seg.count == 0 else remainder_rule(entry, seg.count))
    return PixelMap(np.array(values, dtype=np.int64), rmap.threshold)


def float_histogram(image: GrayImage) -> np.ndarray:
    """浮点版本的直方图（float64 频数）"""
    return np.bincount(image.pixels, minlength=GRAY_LEVELS).astype(np.float64)


def float_brightness_errors(freq: np.ndarray) -> np.ndarray:
    """
    每个 γ 的 2n·(Ê_γ − E)，缺失灰度为 inf

    各项都是绝对值小于 2^53 的整数，float64 下没有舍入误差。
    """
    n = freq.sum()
    pixel_sum = np.dot(np.arange(GRAY_LEVELS, dtype=np.float64), freq)
    gammas = np.arange(GRAY_LEVELS, dtype=np.float64)
    errors = n * (GRAY_LEVELS + gammas) - GRAY_LEVELS * np.cumsum(freq) - 2 * pixel_sum
    return np.where(freq > 0, errors, np.inf)


def float_threshold(errors: np.ndarray) -> int:
    # argmin 在并列时返回第一个下标
    return int(np.argmin(np.abs(errors)))


def float_segment_cdf(freq: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """段内归一化累积分布；空段返回全 0"""
    part = freq[lo:hi + 1]
    count = part.sum()
    if count == 0:
        return np.zeros(hi - lo + 1)
    return np.cumsum(part / count)


def float_segment_map(cdf: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """X_0 + (X_{L-1} − X_0)·c(k) 四舍五入；空段为恒等映射"""
    if not cdf.any():
        return np.arange(lo, hi + 1, dtype=np.float64)
    return np.floor(lo + (hi - lo) * cdf + 0.5)


def float_reference_map(image: GrayImage) -> PixelMap:
    """
    二进制浮点版本（float64 概率密度与累积分布、四舍五入）

    参数:
        image: 输入图像

    返回:
        PixelMap: 浮点参考映射
    """
    freq = float_histogram(image)
    threshold = float_threshold(float_brightness_errors(freq))
    values = np.empty(GRAY_LEVELS, dtype=np.float64)
    bounds = [(0, threshold)] + ([(threshold + 1, MAX_GRAY)] if threshold < MAX_GRAY else [])
    for lo, hi in bounds:
        values[lo:hi + 1] = float_segment_map(float_segment_cdf(freq, lo, hi), lo, hi)
    return PixelMap(np.clip(values, 0, MAX_GRAY), threshold)


def compare_maps(expected: PixelMap, actual: PixelMap, tolerance: int = 0) -> Optional[int]:
    """返回第一个相差超过 tolerance 的灰度值，全部一致时返回 None"""
    diff = np.abs(expected.map.astype(np.int64) - actual.map.astype(np.int64))
    offending = np.flatnonzero(diff > tolerance)
    return int(offending[0]) if offending.size else None


def mean_brightness(image: GrayImage) -> Fraction:
    return Fraction(int(image.pixels.sum(dtype=np.uint64)), image.pixel_count)


def ambe(a: GrayImage, b: GrayImage) -> Fraction:
    """
    绝对平均亮度误差 |mean(a) − mean(b)|

    参数:
        a, b: 尺寸相同的两幅图像

    返回:
        Fraction: 精确有理数
    """
    if (a.width, a.height) != (b.width, b.height):
        raise DimensionMismatch(
            f"cannot compare {a.width}x{a.height} with {b.width}x{b.height}"
        )
    return abs(mean_brightness(a) - mean_brightness(b))


def format_decimal(value: Fraction, digits: int = 6) -> str:
    """有理数转十进制字符串，最多 digits 位小数（四舍五入，去掉末尾的 0）"""
    sign = "-" if value < 0 else ""
    scaled = round_half_up(abs(value) * 10**digits)
    whole, frac = divmod(scaled, 10**digits)
    if digits == 0 or frac == 0:
        return f"{sign}{whole}" if scaled else "0"
    return f"{sign}{whole}.{str(frac).rjust(digits, '0').rstrip('0')}"


@dataclass
class VerifyResult:
    """verify 的检查结果；first_mismatch 为第一个出错的灰度值"""
    ok: bool
    check: str = ""
    first_mismatch: Optional[int] = None
    expected: Optional[int] = None
    actual: Optional[int] = None
    notes: List[str] = field(default_factory=list)


def verify_image(image: GrayImage) -> VerifyResult:
    """
    整数流水线与参考实现的逐项比对

    依次检查：递推/闭式 SMBE、阈值、余数规则下的逐位一致、与四舍五入及浮点版本相差都不超过 1。
    """
    hist = generate_hist(image)
    table = calculate_smbe(hist)
    for gamma in table.candidates():
        closed = smbe_closed_form(hist, int(gamma))
        if int(table.entries[gamma]) != closed:
            return VerifyResult(False, "smbe", int(gamma), closed, int(table.entries[gamma]))

    threshold = find_threshold(table).value
    expected_threshold = brute_force_threshold(hist)
    if threshold != expected_threshold:
        return VerifyResult(False, "threshold", threshold, expected_threshold, threshold)

    integer_map = mmbebhe(image)
    rmap = reference_mmbebhe(image)
    if rmap.threshold != threshold:
        return VerifyResult(False, "threshold", threshold, rmap.threshold, threshold)

    exact = integer_map_from_rational(rmap)
    gray = compare_maps(exact, integer_map)
    if gray is not None:
        return VerifyResult(False, "remainder-rule", gray, exact[gray], integer_map[gray])

    nearest = PixelMap(np.array([round_half_up(e) for e in rmap.entries], dtype=np.int64), threshold)
    gray = compare_maps(nearest, integer_map, tolerance=1)
    if gray is not None:
        return VerifyResult(False, "round-to-nearest", gray, nearest[gray], integer_map[gray])

    float_map = float_reference_map(image)
    gray = compare_maps(float_map, integer_map, tolerance=1)
    if gray is not None:
        return VerifyResult(False, "float-reference", gray, float_map[gray], integer_map[gray])

    result = VerifyResult(True, notes=[f"threshold={threshold}"])
    logger.debug(f"verify ok: threshold={threshold}")
    return result


@dataclass(frozen=True)
class BrightnessRow:
    """单幅图像的亮度对比结果"""
    name: str
    mean_in: Fraction
    ambe_he: Fraction
    ambe_mmbebhe: Fraction

    @property
    def preserved(self) -> bool:
        return self.ambe_mmbebhe <= self.ambe_he


@dataclass(frozen=True)
class BrightnessSummary:
    rows: Tuple[BrightnessRow, ...]
    preserved_share: Fraction
    mean_ambe_he: Fraction
    mean_ambe_mmbebhe: Fraction

    @property
    def mean_ratio(self) -> Optional[Fraction]:
        """MMBEBHE 与 HE 平均 AMBE 之比，HE 平均 AMBE 为 0 时无定义"""
        if self.mean_ambe_he == 0:
            return None
        return self.mean_ambe_mmbebhe / self.mean_ambe_he


def brightness_row(name: str, image: GrayImage) -> BrightnessRow:
    return BrightnessRow(
        name,
        mean_brightness(image),
        ambe(image, apply_map(image, he_map(image))),
        ambe(image, apply_map(image, mmbebhe(image))),
    )


def brightness_report(images: Iterable[Tuple[str, GrayImage]]) -> BrightnessSummary:
    """
    在图像集合上统计 AMBE(MMBEBHE) ≤ AMBE(HE) 的比例与平均 AMBE

    参数:
        images: (名称, 图像) 序列

    返回:
        BrightnessSummary: 每幅图像的结果与汇总
    """
    rows = tuple(brightness_row(name, image) for name, image in images)
    if not rows:
        raise ValueError("brightness report needs at least one image")
    count = len(rows)
    summary = BrightnessSummary(
        rows,
        Fraction(sum(1 for r in rows if r.preserved), count),
        sum((r.ambe_he for r in rows), Fraction(0)) / count,
        sum((r.ambe_mmbebhe for r in rows), Fraction(0)) / count,
    )
    logger.info(f"亮度报告: {count} 幅图像, 保持比例 {float(summary.preserved_share):.3f}")
    return summary
