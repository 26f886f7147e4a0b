import os
import sys
import datetime
import traceback

LEVELS = {
    "DEBUG": 10,
    "INFO": 20,
    "WARNING": 30,
    "ERROR": 40,
    "CRITICAL": 50,
}


class Logger:
    def __init__(self, log_dir="logs", max_log_files=20, console_level="ERROR", to_file=True):
        """
        初始化Logger

        日志文件在第一次写入时才创建，避免只读命令也留下空文件。

        Args:
            log_dir: 日志目录
            max_log_files: 保留的最大日志文件数量，默认为20
            console_level: 控制台输出的最低级别（控制台输出走 stderr）
            to_file: 是否写入日志文件
        """
        self.log_file = None
        self.configure(log_dir=log_dir, max_log_files=max_log_files,
                       console_level=console_level, to_file=to_file)

    def configure(self, log_dir=None, max_log_files=None, console_level=None, to_file=None, **_ignored):
        """
        根据 config.yaml 的 logging 段重新配置

        未知的键被忽略，方便直接传入整段配置字典。
        """
        if log_dir is not None:
            self.log_dir = str(log_dir)
            self.log_file = None
        if max_log_files is not None:
            self.max_log_files = int(max_log_files)
        if console_level is not None:
            level = str(console_level).upper()
            if level not in LEVELS:
                raise ValueError(f"未知的日志级别: {console_level}")
            self.console_level = level
        if to_file is not None:
            self.to_file = bool(to_file)

    def set_file_enabled(self, enabled):
        """开关文件日志（测试中关闭）"""
        self.to_file = bool(enabled)

    def _open_log_file(self):
        os.makedirs(self.log_dir, exist_ok=True)

        # 生成日志文件名（包含日期时间戳）
        current_time = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
        self.log_file = os.path.join(self.log_dir, f"app_{current_time}.log")
        open(self.log_file, 'a').close()

        self._cleanup_old_logs()

    def _cleanup_old_logs(self):
        """
        清理旧的日志文件，只保留最新的max_log_files个文件
        """
        try:
            log_files = []
            for filename in os.listdir(self.log_dir):
                if filename.endswith('.log') and filename.startswith('app_'):
                    filepath = os.path.join(self.log_dir, filename)
                    log_files.append((filepath, os.path.getmtime(filepath)))

            # 最新的在前
            log_files.sort(key=lambda x: x[1], reverse=True)

            for filepath, _ in log_files[self.max_log_files:]:
                try:
                    os.remove(filepath)
                except OSError as e:
                    print(f"[WARNING] 删除日志文件失败: {filepath}, 错误: {e}", file=sys.stderr)

        except OSError as e:
            print(f"[WARNING] 清理日志文件时出错: {e}", file=sys.stderr)

    def get_caller_info(self):
        stack = traceback.extract_stack()
        # 跳过logger自身的帧，找到实际调用的文件和行号
        for i in range(len(stack) - 2, 0, -1):
            frame = stack[i]
            if frame.filename != __file__:
                filename = os.path.basename(frame.filename)
                if filename and '.py' in filename:
                    return filename, frame.lineno
        return "unknown", 0

    def log(self, level, message):
        if self.to_file:
            filename, line_number = self.get_caller_info()
            current_time = datetime.datetime.now().strftime("%M:%S")
            # 格式：filename-line-Debug_Level-Min:Sec-内容
            log_entry = f"{filename}-{line_number}-{level}-{current_time}-{message}\n"
            try:
                if self.log_file is None:
                    self._open_log_file()
                with open(self.log_file, 'a', encoding='utf-8') as f:
                    f.write(log_entry)
            except OSError as e:
                # 日志目录不可写时只保留控制台输出
                self.to_file = False
                print(f"[WARNING] 无法写入日志文件: {e}", file=sys.stderr)

        if LEVELS[level] >= LEVELS[self.console_level]:
            print(f"[{level}] {message}", file=sys.stderr)

    def debug(self, message):
        self.log("DEBUG", message)

    def info(self, message):
        self.log("INFO", message)

    def warning(self, message):
        self.log("WARNING", message)

    def error(self, message):
        self.log("ERROR", message)

    def critical(self, message):
        self.log("CRITICAL", message)


# 创建全局logger实例
logger = Logger()
