"""
命令行入口
enhance / apply / threshold / compare / simulate / verify / corpus 子命令
"""
import argparse
import sys
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

from logger.logger import logger
from utils.config_manager import get_config
from utils import io_operations
from .core import GrayImage, generate_hist
from .corpus import build_corpus
from .equalize import apply_map, he_map, mmbebhe
from .errors import HistEqualizeError
from .hwsim import CycleModel, SimulationResult, Stage, reference_micros, simulate, time_float_reference
from .oracle import (ambe, brightness_report, float_reference_map, format_decimal, mean_brightness,
                     verify_image)
from .smbe import calculate_smbe, find_threshold

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _digits() -> int:
    return int(get_config('report', 'fraction_digits', default=6))


def format_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """左对齐的纯文本表格，列间两个空格"""
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = []
    for row in [list(header)] + [list(r) for r in rows]:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def cmd_enhance(args, out: TextIO) -> int:
    image = io_operations.read_pgm_file(args.input)
    pixel_map = he_map(image) if args.method == "he" else mmbebhe(image)
    io_operations.write_pgm_file(apply_map(image, pixel_map), args.output)
    if args.emit_map:
        io_operations.write_map_file(pixel_map, args.emit_map)
    if args.emit_hist:
        io_operations.write_hist_csv(generate_hist(image), args.emit_hist)
    return EXIT_OK


def cmd_apply(args, out: TextIO) -> int:
    image = io_operations.read_pgm_file(args.input)
    pixel_map = io_operations.read_map_file(args.map)
    io_operations.write_pgm_file(apply_map(image, pixel_map), args.output)
    return EXIT_OK


def cmd_threshold(args, out: TextIO) -> int:
    image = io_operations.read_pgm_file(args.input)
    threshold = find_threshold(calculate_smbe(generate_hist(image)))
    print(f"threshold={threshold.value} smbe={threshold.smbe}", file=out)
    return EXIT_OK


def compare_outputs(image: GrayImage) -> List[Tuple[str, GrayImage]]:
    """HE、整数 MMBEBHE、浮点参考 MMBEBHE 与原图"""
    return [
        ("HE", apply_map(image, he_map(image))),
        ("MMBEBHE", apply_map(image, mmbebhe(image))),
        ("MMBEBHE-float", apply_map(image, float_reference_map(image))),
        ("identity", image),
    ]


def compare_rows(image: GrayImage, outputs: List[Tuple[str, GrayImage]]) -> List[List[str]]:
    """各方法的输出均值和 AMBE"""
    digits = _digits()
    return [[name, format_decimal(mean_brightness(output), digits),
             format_decimal(ambe(image, output), digits)] for name, output in outputs]


def cmd_compare(args, out: TextIO) -> int:
    image = io_operations.read_pgm_file(args.input)
    outputs = compare_outputs(image)
    print(format_table(["method", "output_mean", "ambe"], compare_rows(image, outputs)), file=out)
    if args.emit_hist:
        # 原图、整数输出与浮点输出的直方图并排
        named = dict(outputs)
        columns = {"input": generate_hist(image),
                   "mmbebhe": generate_hist(named["MMBEBHE"]),
                   "mmbebhe_float": generate_hist(named["MMBEBHE-float"])}
        io_operations.write_text_file(io_operations.format_hist_columns_csv(columns), args.emit_hist)
    return EXIT_OK


def simulation_table(result: SimulationResult, float_micros: Optional[Dict[Stage, float]] = None) -> str:
    """阶段计时表，后附各阶段合计与参考计时的偏差；给出 float_micros 时再加一列浮点实现实测时间"""
    rows = [[r.stage.value, r.segment, str(r.iterations), str(r.cycles), f"{r.micros:.2f}"]
            for r in result.reports]
    text = format_table(["stage", "segment", "iterations", "cycles", "micros"], rows)

    reference = reference_micros()
    header = ["stage", "total_cycles", "micros", "reference_micros", "deviation"]
    if float_micros is not None:
        header.append("float_micros")
    totals = []
    for stage in Stage:
        micros = result.stage_micros(stage)
        expected = reference.get(stage)
        deviation = "" if not expected else f"{(micros - expected) / expected * 100:+.1f}%"
        row = [stage.value, str(result.stage_cycles(stage)), f"{micros:.2f}",
               "" if expected is None else f"{expected:.2f}", deviation]
        if float_micros is not None:
            row.append(f"{float_micros[stage]:.2f}")
        totals.append(row)
    summary = format_table(header, totals)
    return f"{text}\n\nthreshold={result.threshold} total_cycles={result.total_cycles}\n\n{summary}"


def cmd_simulate(args, out: TextIO) -> int:
    image = io_operations.read_pgm_file(args.input)
    model = CycleModel.from_config(clock_mhz=args.clock_mhz)
    result = simulate(image, model)
    float_micros = None
    if args.float_timing:
        # 墙钟时间每次运行都不同，只在显式要求时输出
        timing = time_float_reference(image, int(get_config('hwsim', 'float_timing_repeats', default=5)))
        float_micros = timing.micros
    print(simulation_table(result, float_micros), file=out)
    if args.csv:
        io_operations.write_timing_csv(result.reports, args.csv)
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    image = io_operations.read_pgm_file(args.input)
    result = verify_image(image)
    if not result.ok:
        print(f"mismatch at gray level {result.first_mismatch} ({result.check}): "
              f"expected {result.expected}, got {result.actual}", file=out)
        logger.info(f"verify 失败: {args.input} 灰度 {result.first_mismatch}")
        return EXIT_FAILURE
    print(f"ok {' '.join(result.notes)}", file=out)
    return EXIT_OK


def cmd_corpus(args, out: TextIO) -> int:
    size = args.size if args.size is not None else int(get_config('corpus', 'size', default=120))
    seed = args.seed if args.seed is not None else int(get_config('corpus', 'seed', default=0))
    images = build_corpus(size, seed,
                          int(get_config('corpus', 'width', default=64)),
                          int(get_config('corpus', 'height', default=48)))
    summary = brightness_report(images)
    digits = _digits()

    rows = [[r.name, format_decimal(r.mean_in, digits), format_decimal(r.ambe_he, digits),
             format_decimal(r.ambe_mmbebhe, digits), "yes" if r.preserved else "no"]
            for r in summary.rows]
    print(format_table(["image", "mean_in", "ambe_he", "ambe_mmbebhe", "mmbebhe<=he"], rows), file=out)
    ratio = summary.mean_ratio
    print(f"\nimages={len(summary.rows)} "
          f"preserved_share={format_decimal(summary.preserved_share, digits)} "
          f"mean_ambe_he={format_decimal(summary.mean_ambe_he, digits)} "
          f"mean_ambe_mmbebhe={format_decimal(summary.mean_ambe_mmbebhe, digits)} "
          f"mean_ratio={'n/a' if ratio is None else format_decimal(ratio, digits)}", file=out)
    if args.csv:
        io_operations.write_text_file(io_operations.format_brightness_csv(summary.rows, digits), args.csv)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="histeq",
        description="Integer-only MMBEBHE contrast enhancement toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="echo debug log to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    enhance = sub.add_parser("enhance", help="equalize a PGM image")
    enhance.add_argument("input", help="input PGM (P2 or P5, maxval 255)")
    enhance.add_argument("-o", "--output", required=True, help="output PGM (P5)")
    enhance.add_argument("--emit-map", metavar="MAP", help="write the pixel map file")
    enhance.add_argument("--emit-hist", metavar="CSV", help="write the input histogram CSV")
    enhance.add_argument("--method", choices=["mmbebhe", "he"], default="mmbebhe",
                         help="mapping method (default: mmbebhe)")
    enhance.set_defaults(handler=cmd_enhance)

    apply = sub.add_parser("apply", help="apply a saved pixel map file to a PGM image")
    apply.add_argument("input", help="input PGM")
    apply.add_argument("--map", required=True, help="pixel map file")
    apply.add_argument("-o", "--output", required=True, help="output PGM (P5)")
    apply.set_defaults(handler=cmd_apply)

    threshold = sub.add_parser("threshold", help="print the minimum-SMBE threshold")
    threshold.add_argument("input", help="input PGM")
    threshold.set_defaults(handler=cmd_threshold)

    compare = sub.add_parser("compare", help="compare mean brightness of HE, MMBEBHE, float MMBEBHE and identity")
    compare.add_argument("input", help="input PGM")
    compare.add_argument("--emit-hist", metavar="CSV",
                         help="write input, integer and float output histograms side by side")
    compare.set_defaults(handler=cmd_compare)

    sim = sub.add_parser("simulate", help="print the stage timing table")
    sim.add_argument("input", help="input PGM")
    sim.add_argument("--clock-mhz", type=float, default=None, help="clock frequency in MHz")
    sim.add_argument("--csv", metavar="CSV", help="write the timing CSV")
    sim.add_argument("--float-timing", action="store_true",
                     help="also measure wall-clock time of each float reference stage")
    sim.set_defaults(handler=cmd_simulate)

    verify = sub.add_parser("verify", help="check the integer pipeline against the exact reference")
    verify.add_argument("input", help="input PGM")
    verify.set_defaults(handler=cmd_verify)

    corpus = sub.add_parser("corpus", help="brightness report over the synthetic image corpus")
    corpus.add_argument("--size", type=int, default=None, help="number of images")
    corpus.add_argument("--seed", type=int, default=None, help="random seed")
    corpus.add_argument("--csv", metavar="CSV", help="write the per-image report CSV")
    corpus.set_defaults(handler=cmd_corpus)

    return parser


def configure_logging(verbose: bool = False) -> None:
    settings = get_config('logging', default={}) or {}
    logger.configure(log_dir=settings.get('dir'),
                     max_log_files=settings.get('max_log_files'),
                     console_level="DEBUG" if verbose else settings.get('console_level'),
                     to_file=settings.get('to_file'))


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None) -> int:
    """
    命令行主函数

    参数:
        argv: 参数列表，默认取 sys.argv[1:]
        out: 结果输出流，默认 stdout

    返回:
        int: 退出码（0 成功，1 运行错误，2 用法错误）
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    configure_logging(args.verbose)
    logger.debug(f"命令: {args.command}")
    try:
        if getattr(args, "clock_mhz", None) is not None and not args.clock_mhz > 0:
            parser.print_usage(sys.stderr)
            print("histeq: error: --clock-mhz must be positive", file=sys.stderr)
            return EXIT_USAGE
        return args.handler(args, out)
    except (HistEqualizeError, OSError) as e:
        logger.info(f"{args.command} 失败: {e}")
        print(f"histeq: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
