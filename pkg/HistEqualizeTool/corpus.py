"""
合成测试图像集
固定种子生成，保证每次运行得到同一组图像
"""
from typing import List, Tuple

import numpy as np

from .core import MAX_GRAY, GrayImage

# 边界情况图像之后，随机图像按该顺序轮换生成
RANDOM_KINDS = ("gaussian-dark", "gaussian-bright", "bimodal") * 4 + ("uniform",)


def constant_image(value: int, width: int, height: int) -> GrayImage:
    return GrayImage(width, height, np.full(width * height, value, dtype=np.uint8))


def two_delta_image(low: int, high: int, width: int, height: int, low_share: float = 0.5) -> GrayImage:
    count = width * height
    low_count = int(round(count * low_share))
    pixels = np.full(count, high, dtype=np.uint8)
    pixels[:low_count] = low
    return GrayImage(width, height, pixels)


def _clipped(samples: np.ndarray, width: int, height: int) -> GrayImage:
    return GrayImage(width, height, np.clip(np.rint(samples), 0, MAX_GRAY).astype(np.uint8))


def gaussian_image(rng: np.random.Generator, mean: float, sigma: float, width: int, height: int) -> GrayImage:
    return _clipped(rng.normal(mean, sigma, width * height), width, height)


def bimodal_image(rng: np.random.Generator, width: int, height: int) -> GrayImage:
    """暗峰占多数的双峰图像"""
    count = width * height
    dark = rng.normal(rng.uniform(20, 80), rng.uniform(6, 15), count)
    light = rng.normal(rng.uniform(110, 170), rng.uniform(6, 15), count)
    choose_dark = rng.random(count) < rng.uniform(0.65, 0.85)
    return _clipped(np.where(choose_dark, dark, light), width, height)


def uniform_image(rng: np.random.Generator, width: int, height: int) -> GrayImage:
    return GrayImage(width, height, rng.integers(0, MAX_GRAY + 1, width * height, dtype=np.uint8))


def edge_images(width: int, height: int) -> List[Tuple[str, GrayImage]]:
    """文档中列出的边界情况"""
    return [
        ("constant-7", constant_image(7, width, height)),
        ("constant-128", constant_image(128, width, height)),
        ("all-black", constant_image(0, width, height)),
        ("all-white", constant_image(MAX_GRAY, width, height)),
        ("two-delta-0-255", two_delta_image(0, MAX_GRAY, width, height)),
        ("two-delta-40-90", two_delta_image(40, 90, width, height, low_share=0.3)),
    ]


def random_image(rng: np.random.Generator, kind: str, width: int, height: int) -> GrayImage:
    if kind == "gaussian-dark":
        return gaussian_image(rng, rng.uniform(30, 90), rng.uniform(8, 30), width, height)
    if kind == "gaussian-bright":
        return gaussian_image(rng, rng.uniform(165, 225), rng.uniform(8, 30), width, height)
    if kind == "bimodal":
        return bimodal_image(rng, width, height)
    if kind == "uniform":
        return uniform_image(rng, width, height)
    raise ValueError(f"unknown image kind {kind}")


def build_corpus(size: int = 120, seed: int = 20190101, width: int = 64,
                 height: int = 48) -> List[Tuple[str, GrayImage]]:
    """
    生成测试图像集：先是边界情况，再用随机图像补足 size 幅

    参数:
        size: 图像总数（不少于边界情况数量）
        seed: 随机种子
        width, height: 图像尺寸

    返回:
        List: (名称, 图像) 列表
    """
    images = edge_images(width, height)
    rng = np.random.default_rng(seed)
    index = 0
    while len(images) < size:
        kind = RANDOM_KINDS[index % len(RANDOM_KINDS)]
        images.append((f"{kind}-{index:03d}", random_image(rng, kind, width, height)))
        index += 1
    return images
