#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
日志系统模块
控制台（stderr）与滚动日志文件；报告正文只写 stdout 或 --out 文件，不经过日志
"""

import logging
import logging.handlers
import os
import sys
import time
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Iterator, Optional

LOGGER_NAME = 'AqsVerify'
CONSOLE_FORMAT = '%(asctime)s [%(levelname)s] %(message)s'
FILE_FORMAT = '%(asctime)s [%(levelname)s] %(name)s - %(message)s'


def get_data_dir() -> Path:
    """数据目录：优先环境变量 AQSVERIFY_HOME，否则 ~/.aqsverify"""
    env_dir = os.environ.get('AQSVERIFY_HOME')
    if env_dir:
        return Path(env_dir)
    return Path.home() / '.aqsverify'


class Logger:
    """日志管理器 - 单例模式"""
    _instance = None
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Logger, cls).__new__(cls)
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self.log_dir: Optional[Path] = None
        try:
            self.log_dir = get_data_dir()
            self.log_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            print(f"警告: 无法创建数据目录，日志只输出到控制台: {e}", file=sys.stderr)
            self.log_dir = None

        self.log_file: Optional[Path] = None
        self.file_handler: Optional[logging.Handler] = None

        # 与 config.LogConfig 的默认值一致；main 加载配置后调用 set_log_config
        self.output_to_file = True
        self.clear_log_on_startup = True
        self.split_by_date = False
        self.max_log_size = 10

        self.logger = logging.getLogger(LOGGER_NAME)
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False
        self.console_handler = logging.StreamHandler(sys.stderr)
        self.console_handler.setLevel(logging.INFO)
        self.console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT, datefmt='%H:%M:%S'))
        self.logger.addHandler(self.console_handler)

        self._rebuild_file_handler(clear=True)
        self._initialized = True

    def _log_path(self) -> Optional[Path]:
        if self.log_dir is None:
            return None
        if self.split_by_date:
            return self.log_dir / f"log_{datetime.now().strftime('%Y%m%d')}.txt"
        return self.log_dir / 'log.txt'

    def _rebuild_file_handler(self, clear: bool):
        """按当前设置重建文件处理器；clear 为 True 且配置要求时先清空旧文件"""
        if self.file_handler is not None:
            self.logger.removeHandler(self.file_handler)
            self.file_handler.close()
            self.file_handler = None
        self.log_file = None

        path = self._log_path()
        if not self.output_to_file or path is None:
            return
        try:
            if clear and self.clear_log_on_startup and path.exists():
                path.write_text('', encoding='utf-8')
            if self.split_by_date:
                handler = logging.handlers.TimedRotatingFileHandler(
                    path, when='midnight', backupCount=30, encoding='utf-8')
            else:
                handler = logging.handlers.RotatingFileHandler(
                    path, maxBytes=self.max_log_size * 1024 * 1024, backupCount=5, encoding='utf-8')
        except OSError as e:
            print(f"警告: 无法创建日志文件 {path}: {e}", file=sys.stderr)
            return
        handler.setLevel(logging.WARNING)
        handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt='%Y-%m-%d %H:%M:%S'))
        self.logger.addHandler(handler)
        self.file_handler = handler
        self.log_file = path

    def set_log_config(self, log_config):
        """从 Config 同步日志配置并重建文件处理器"""
        self.output_to_file = log_config.output_to_file
        self.clear_log_on_startup = log_config.clear_log_on_startup
        self.split_by_date = log_config.split_by_date
        self.max_log_size = log_config.max_log_size
        self._rebuild_file_handler(clear=False)

    def set_console_level(self, level: int):
        self.console_handler.setLevel(level)

    def debug(self, message: str, *args, **kwargs):
        self.logger.debug(message, *args, **kwargs)

    def info(self, message: str, *args, **kwargs):
        self.logger.info(message, *args, **kwargs)

    def warning(self, message: str, *args, **kwargs):
        self.logger.warning(message, *args, **kwargs)

    def error(self, message: str, *args, **kwargs):
        self.logger.error(message, *args, **kwargs)

    def exception(self, message: str, *args, **kwargs):
        self.logger.exception(message, *args, **kwargs)

    def failure(self, category: str, where: str, message: str):
        """报告中的失败项：统一格式，写入文件日志"""
        self.logger.warning(f"[{category}] {where}: {message}")

    @contextmanager
    def section(self, name: str) -> Iterator[None]:
        """记录一个报告部分的耗时（DEBUG）"""
        start = time.perf_counter()
        self.logger.debug(f"开始: {name}")
        try:
            yield
        finally:
            self.logger.debug(f"完成: {name} ({(time.perf_counter() - start) * 1000:.1f} ms)")


# 全局日志实例
logger = Logger()


def get_logger() -> Logger:
    """获取日志实例"""
    return logger
