"""
异常定义
所有模块抛出的错误都从 HistEqualizeError 派生，CLI 据此统一转换为退出码 1
"""


class HistEqualizeError(Exception):
    """工具包错误基类"""


class InvalidImage(HistEqualizeError, ValueError):
    """GrayImage 不满足尺寸或像素范围约束"""


class ImageTooLarge(HistEqualizeError, ValueError):
    """像素数超过 MAX_PIXELS，SMBE 将无法放入 32 位寄存器"""

    def __init__(self, pixel_count, limit):
        self.pixel_count = pixel_count
        self.limit = limit
        super().__init__(f"image has {pixel_count} pixels, limit is {limit}")


class InvalidBounds(HistEqualizeError, ValueError):
    """分段上下界非法（lo > hi 或越出 [0, 255]）"""

    def __init__(self, lo, hi):
        self.lo = lo
        self.hi = hi
        super().__init__(f"invalid segment bounds [{lo}, {hi}]")


class DimensionMismatch(HistEqualizeError, ValueError):
    """两幅图像尺寸不一致"""


class ImageFormatError(HistEqualizeError):
    """PGM 解析错误基类"""


class MalformedHeader(ImageFormatError):
    """PGM 头部无法解析"""


class UnsupportedMaxval(ImageFormatError):
    """maxval 不是 255"""

    def __init__(self, maxval):
        self.maxval = maxval
        super().__init__(f"unsupported maxval {maxval}, only 255 is accepted")


class TruncatedData(ImageFormatError):
    """像素数据比头部声明的少"""


class MalformedMapFile(HistEqualizeError):
    """映射表文件格式错误"""
