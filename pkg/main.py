"""
直方图均衡工具主程序入口
"""
import sys

from HistEqualizeTool.cli import main


if __name__ == "__main__":
    sys.exit(main())
