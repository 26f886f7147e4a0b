"""
周期模型
每个阶段的周期数 = overhead(stage) + iterations × cpi(stage)，时间 = 周期 / 时钟频率
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Mapping, Optional

from utils.config_manager import get_config


class Stage(str, Enum):
    """流水线阶段，按执行顺序排列"""
    GENERATE_HIST = "GenerateHist"
    CALCULATE_SMBE = "CalculateSmbe"
    FIND_THRESHOLD = "FindThreshold"
    GEN_CUMU_HIST = "GenCumuHist"
    CREATE_MAP = "CreateMap"

    def __str__(self):
        return self.value


DEFAULT_CPI = {
    Stage.GENERATE_HIST: 1,
    Stage.CALCULATE_SMBE: 3,
    Stage.FIND_THRESHOLD: 3,
    Stage.GEN_CUMU_HIST: 3,
    Stage.CREATE_MAP: 3,
}

DEFAULT_OVERHEAD = {
    Stage.GENERATE_HIST: 0,
    Stage.CALCULATE_SMBE: 3,
    Stage.FIND_THRESHOLD: 3,
    Stage.GEN_CUMU_HIST: 6,
    Stage.CREATE_MAP: 6,
}


@dataclass(frozen=True)
class StageReport:
    """
    一次阶段执行的计时

    属性:
        stage: 阶段
        iterations: 处理的元素数
        cycles: 仿真周期数
        micros: cycles / clock_mhz
        segment: 分段阶段的标签（lower / upper），其他阶段为空
    """
    stage: Stage
    iterations: int
    cycles: int
    micros: float
    segment: str = ""


@dataclass(frozen=True)
class CycleModel:
    """
    校准后的周期模型

    属性:
        clock_mhz: 时钟频率（MHz）
        cpi: 每次迭代的周期数
        overhead: 每次调用的固定周期数
    """
    clock_mhz: float = 300.0
    cpi: Mapping[Stage, int] = field(default_factory=lambda: dict(DEFAULT_CPI))
    overhead: Mapping[Stage, int] = field(default_factory=lambda: dict(DEFAULT_OVERHEAD))

    def __post_init__(self):
        if not self.clock_mhz > 0:
            raise ValueError(f"clock frequency must be positive, got {self.clock_mhz}")
        for stage in Stage:
            if stage not in self.cpi or stage not in self.overhead:
                raise ValueError(f"cycle model has no constants for {stage}")
            if int(self.cpi[stage]) < 1:
                raise ValueError(f"cpi of {stage} must be positive")
            if int(self.overhead[stage]) < 0:
                raise ValueError(f"overhead of {stage} must not be negative")

    @classmethod
    def from_config(cls, clock_mhz: Optional[float] = None) -> "CycleModel":
        """从 config.yaml 的 hwsim 段构造，clock_mhz 非空时覆盖配置中的时钟"""
        stages = get_config('hwsim', 'stages', default={}) or {}
        cpi: Dict[Stage, int] = dict(DEFAULT_CPI)
        overhead: Dict[Stage, int] = dict(DEFAULT_OVERHEAD)
        for stage in Stage:
            entry = stages.get(stage.value, {})
            cpi[stage] = int(entry.get('cpi', cpi[stage]))
            overhead[stage] = int(entry.get('overhead', overhead[stage]))
        if clock_mhz is None:
            clock_mhz = float(get_config('hwsim', 'clock_mhz', default=300))
        return cls(float(clock_mhz), cpi, overhead)

    def cycles(self, stage: Stage, iterations: int) -> int:
        return int(self.overhead[stage]) + int(iterations) * int(self.cpi[stage])

    def report(self, stage: Stage, iterations: int, segment: str = "") -> StageReport:
        cycles = self.cycles(stage, iterations)
        return StageReport(stage, int(iterations), cycles, cycles / self.clock_mhz, segment)


def reference_micros() -> Dict[Stage, float]:
    """配置中的 FPGA 参考计时（μs），分段阶段为两次调用之和"""
    configured = get_config('hwsim', 'reference_micros', default={}) or {}
    return {stage: float(configured[stage.value]) for stage in Stage if stage.value in configured}
