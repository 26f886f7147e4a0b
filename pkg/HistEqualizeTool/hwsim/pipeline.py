"""
阶段级流水线仿真
各模块串行执行，前一模块 done 标志置位后下一模块才启动；结果与 equalize.mmbebhe 完全一致
"""
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

import numpy as np

from logger.logger import logger
from ..core import GRAY_LEVELS, GrayImage, generate_hist
from ..equalize import PixelMap, create_map, gen_cumu_hist, segment_bounds
from ..smbe import calculate_smbe, find_threshold
from .cycle_model import CycleModel, Stage, StageReport


class StageModule:
    """带 done 标志的流水线模块"""

    stage: Stage = None

    def __init__(self, model: CycleModel, segment: str = ""):
        self.model = model
        self.segment = segment
        self.done = False
        self.output: Any = None
        self.report: Optional[StageReport] = None

    def run(self, upstream: Optional["StageModule"], *inputs) -> Any:
        """等待上游 done 后执行，完成时置位 done 并记录计时"""
        if upstream is not None and not upstream.done:
            raise RuntimeError(f"{self.stage} started before {upstream.stage} finished")
        self.output, iterations = self.compute(*inputs)
        self.report = self.model.report(self.stage, iterations, self.segment)
        self.done = True
        logger.debug(f"{self.stage}{'(' + self.segment + ')' if self.segment else ''}: "
                     f"{iterations} iterations, {self.report.cycles} cycles")
        return self.output

    def compute(self, *inputs) -> Tuple[Any, int]:
        raise NotImplementedError


class GenerateHistModule(StageModule):
    stage = Stage.GENERATE_HIST

    def compute(self, image):
        # 每个时钟读取一个像素
        return generate_hist(image), image.pixel_count


class CalculateSmbeModule(StageModule):
    stage = Stage.CALCULATE_SMBE

    def compute(self, hist):
        return calculate_smbe(hist), GRAY_LEVELS


class FindThresholdModule(StageModule):
    stage = Stage.FIND_THRESHOLD

    def compute(self, table):
        return find_threshold(table), GRAY_LEVELS


class GenCumuHistModule(StageModule):
    stage = Stage.GEN_CUMU_HIST

    def compute(self, hist, lo, hi):
        seg = gen_cumu_hist(hist, lo, hi)
        return seg, seg.width


class CreateMapModule(StageModule):
    stage = Stage.CREATE_MAP

    def compute(self, seg):
        return create_map(seg), seg.width


@dataclass(frozen=True)
class SimulationResult:
    """仿真输出：按启动顺序排列的阶段计时与映射表"""
    reports: Tuple[StageReport, ...]
    pixel_map: PixelMap

    @property
    def threshold(self) -> int:
        return self.pixel_map.threshold

    @property
    def total_cycles(self) -> int:
        return sum(r.cycles for r in self.reports)

    def stage_cycles(self, stage: Stage) -> int:
        """同一阶段多次调用的周期之和"""
        return sum(r.cycles for r in self.reports if r.stage == stage)

    def stage_micros(self, stage: Stage) -> float:
        return sum(r.micros for r in self.reports if r.stage == stage)


def simulate(image: GrayImage, model: Optional[CycleModel] = None) -> SimulationResult:
    """
    MMBEBHE 驱动模块的仿真

    参数:
        image: 输入图像
        model: 周期模型，默认取配置

    返回:
        SimulationResult: 阶段计时序列与映射表
    """
    model = model or CycleModel.from_config()
    modules: List[StageModule] = []

    hist_module = GenerateHistModule(model)
    hist = hist_module.run(None, image)
    modules.append(hist_module)

    smbe_module = CalculateSmbeModule(model)
    table = smbe_module.run(hist_module, hist)
    modules.append(smbe_module)

    threshold_module = FindThresholdModule(model)
    threshold = threshold_module.run(smbe_module, table)
    modules.append(threshold_module)

    merged = np.empty(GRAY_LEVELS, dtype=np.int64)
    upstream: StageModule = threshold_module
    for label, (lo, hi) in zip(("lower", "upper"), segment_bounds(threshold.value)):
        cumu_module = GenCumuHistModule(model, label)
        seg = cumu_module.run(upstream, hist, lo, hi)
        map_module = CreateMapModule(model, label)
        merged[lo:hi + 1] = map_module.run(cumu_module, seg)
        modules.extend([cumu_module, map_module])
        upstream = map_module

    result = SimulationResult(tuple(m.report for m in modules), PixelMap(merged, threshold.value))
    logger.info(f"仿真完成: threshold={result.threshold}, 共 {result.total_cycles} 周期")
    return result
