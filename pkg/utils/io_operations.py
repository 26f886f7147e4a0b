"""
图像与结果文件的读写
PGM（P2/P5，maxval 255）、映射表文件、直方图 CSV 与计时 CSV
"""
import csv
import io
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np

from logger.logger import logger
from HistEqualizeTool.core import GRAY_LEVELS, MAX_GRAY, GrayImage, Histogram, check_pixel_limit
from HistEqualizeTool.equalize import PixelMap
from HistEqualizeTool.errors import (ImageFormatError, MalformedHeader, MalformedMapFile,
                                     TruncatedData, UnsupportedMaxval)
from HistEqualizeTool.hwsim import StageReport
from HistEqualizeTool.oracle import format_decimal

PathLike = Union[str, Path]

WHITESPACE = b" \t\r\n\v\f"
MAP_HEADER_PREFIX = "# threshold="
HIST_CSV_HEADER = ["value", "frequency"]
TIMING_CSV_HEADER = ["stage", "iterations", "cycles", "micros"]


def _next_token(data: bytes, pos: int) -> Tuple[bytes, int]:
    """跳过空白和 '#' 注释，返回下一个记号及其结束位置"""
    length = len(data)
    while pos < length:
        byte = data[pos:pos + 1]
        if byte in WHITESPACE and byte:
            pos += 1
        elif byte == b"#":
            while pos < length and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            break
    start = pos
    while pos < length and data[pos:pos + 1] not in WHITESPACE and data[pos:pos + 1] != b"#":
        pos += 1
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, name: str) -> Tuple[int, int]:
    token, pos = _next_token(data, pos)
    if not token:
        raise MalformedHeader(f"PGM header ends before {name}")
    if not token.isdigit():
        raise MalformedHeader(f"PGM {name} is not a decimal number: {token[:16]!r}")
    return int(token), pos


def read_pgm(data: bytes) -> GrayImage:
    """
    解析 P5（二进制）或 P2（ASCII）PGM

    参数:
        data: 文件内容

    返回:
        GrayImage: 灰度图像
    """
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise MalformedHeader(f"not a PGM file (magic {magic!r})")

    pos = 2
    if pos < len(data) and data[pos:pos + 1] not in WHITESPACE + b"#":
        raise MalformedHeader("missing whitespace after PGM magic number")
    width, pos = _header_int(data, pos, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise MalformedHeader(f"PGM dimensions must be positive, got {width}x{height}")
    if maxval != MAX_GRAY:
        logger.warning(f"拒绝 maxval={maxval} 的 PGM")
        raise UnsupportedMaxval(maxval)
    check_pixel_limit(width * height)

    count = width * height
    if magic == b"P5":
        # maxval 之后恰好一个空白字符，然后是光栅数据
        if pos >= len(data) or data[pos:pos + 1] not in WHITESPACE:
            raise TruncatedData("PGM raster is missing")
        raster = data[pos + 1:pos + 1 + count]
        if len(raster) < count:
            raise TruncatedData(f"PGM raster has {len(raster)} bytes, expected {count}")
        pixels = np.frombuffer(raster, dtype=np.uint8)
    else:
        values: List[int] = []
        while len(values) < count:
            token, pos = _next_token(data, pos)
            if not token:
                raise TruncatedData(f"PGM has {len(values)} samples, expected {count}")
            if not token.isdigit():
                raise ImageFormatError(f"PGM sample is not a decimal number: {token[:16]!r}")
            value = int(token)
            if value > maxval:
                raise ImageFormatError(f"PGM sample {value} exceeds maxval {maxval}")
            values.append(value)
        pixels = np.array(values, dtype=np.uint8)

    logger.debug(f"读取 {magic.decode()} 图像 {width}x{height}")
    return GrayImage(width, height, pixels)


def write_pgm(image: GrayImage, binary: bool = True) -> bytes:
    """
    生成 PGM 字节串

    参数:
        image: 灰度图像
        binary: True 为 P5，False 为 P2（每行一条光栅行）

    返回:
        bytes: 文件内容
    """
    if binary:
        header = f"P5\n{image.width} {image.height}\n{MAX_GRAY}\n".encode("ascii")
        return header + image.pixels.tobytes()

    lines = [f"P2\n{image.width} {image.height}\n{MAX_GRAY}\n"]
    for row in image.as_array():
        lines.append(" ".join(str(int(v)) for v in row) + "\n")
    return "".join(lines).encode("ascii")


def read_pgm_file(path: PathLike) -> GrayImage:
    path = Path(path)
    logger.info(f"读取图像: {path}")
    return read_pgm(path.read_bytes())


def write_pgm_file(image: GrayImage, path: PathLike, binary: bool = True) -> None:
    path = Path(path)
    path.write_bytes(write_pgm(image, binary))
    logger.info(f"✓ 成功保存图像: {path}")


def format_map_file(pixel_map: PixelMap) -> str:
    """映射表文件：一行阈值注释加 256 行 "k<TAB>map[k]" """
    lines = [f"{MAP_HEADER_PREFIX}{pixel_map.threshold}"]
    lines.extend(f"{k}\t{int(v)}" for k, v in enumerate(pixel_map.map))
    return "\n".join(lines) + "\n"


def _ascii_number(text: str) -> bool:
    # str.isdigit 也接受全角等非 ASCII 数字
    return text.isascii() and text.isdigit()


def parse_map_file(text: str) -> PixelMap:
    """
    解析映射表文件

    参数:
        text: 文件内容

    返回:
        PixelMap: 映射表
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != GRAY_LEVELS + 1:
        raise MalformedMapFile(f"map file has {len(lines)} lines, expected {GRAY_LEVELS + 1}")
    header = lines[0]
    if not header.startswith(MAP_HEADER_PREFIX) or not _ascii_number(header[len(MAP_HEADER_PREFIX):]):
        raise MalformedMapFile(f"bad map file header: {header!r}")
    threshold = int(header[len(MAP_HEADER_PREFIX):])

    values = []
    for k, line in enumerate(lines[1:]):
        parts = line.split("\t")
        if len(parts) != 2 or not _ascii_number(parts[0]) or not _ascii_number(parts[1]):
            raise MalformedMapFile(f"bad map file line {k + 2}: {line!r}")
        if int(parts[0]) != k:
            raise MalformedMapFile(f"map file line {k + 2} has gray value {parts[0]}, expected {k}")
        value = int(parts[1])
        if value > MAX_GRAY or threshold > MAX_GRAY:
            raise MalformedMapFile(f"map file line {k + 2} is out of range")
        values.append(value)
    return PixelMap(np.array(values, dtype=np.int64), threshold)


def write_map_file(pixel_map: PixelMap, path: PathLike) -> None:
    path = Path(path)
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(format_map_file(pixel_map))
    logger.info(f"✓ 成功保存映射表: {path}")


def read_map_file(path: PathLike) -> PixelMap:
    path = Path(path)
    logger.info(f"读取映射表: {path}")
    try:
        with open(path, "r", encoding="ascii", newline="") as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise MalformedMapFile(f"map file {path} is not ASCII text (byte {e.start})") from e
    return parse_map_file(text)


def _csv_text(header: List[str], rows: Iterable[Iterable]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def format_hist_csv(hist: Histogram) -> str:
    """直方图 CSV：表头 value,frequency 加 256 行"""
    return _csv_text(HIST_CSV_HEADER, ((k, int(f)) for k, f in enumerate(hist.freq)))


def format_hist_columns_csv(columns: Dict[str, Histogram]) -> str:
    """多幅图像的直方图并排：表头 value 加各列名，256 行"""
    names = list(columns)
    counts = [columns[name].freq for name in names]
    return _csv_text(["value"] + names,
                     ([k] + [int(freq[k]) for freq in counts] for k in range(GRAY_LEVELS)))


def format_timing_csv(reports: Iterable[StageReport]) -> str:
    """计时 CSV：每个 StageReport 一行"""
    return _csv_text(TIMING_CSV_HEADER,
                     ((r.stage.value, r.iterations, r.cycles, f"{r.micros:.6f}") for r in reports))


def write_text_file(text: str, path: PathLike) -> None:
    path = Path(path)
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(text)
    logger.info(f"✓ 成功保存文件: {path}")


def write_hist_csv(hist: Histogram, path: PathLike) -> None:
    write_text_file(format_hist_csv(hist), path)


def write_timing_csv(reports: Iterable[StageReport], path: PathLike) -> None:
    write_text_file(format_timing_csv(reports), path)


def format_brightness_csv(rows, digits: int = 6) -> str:
    """亮度报告 CSV：每幅图像一行"""
    return _csv_text(["image", "mean_in", "ambe_he", "ambe_mmbebhe"],
                     ((r.name, format_decimal(r.mean_in, digits), format_decimal(r.ambe_he, digits),
                       format_decimal(r.ambe_mmbebhe, digits)) for r in rows))
