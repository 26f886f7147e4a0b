"""
流水线仿真子包
阶段级的 done 标志串行执行与周期模型，以及浮点参考实现的分阶段计时
"""
from .cycle_model import CycleModel, Stage, StageReport, reference_micros
from .float_timing import FloatTiming, time_float_reference
from .pipeline import SimulationResult, simulate

__all__ = ['CycleModel', 'Stage', 'StageReport', 'reference_micros', 'FloatTiming', 'time_float_reference',
           'SimulationResult', 'simulate']
