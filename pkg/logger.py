#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
日志模块

所有模块通过 get_logger 取得 ZZFree 下的子记录器；命令行入口用
Logger 一次性装配处理器。控制台输出走标准错误，标准输出只留给结果表格。

作者: ZZFree Team
版本: 1.0.0
"""

import logging
import sys
import time
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Iterator, Optional

from error_handler import ConfigurationError

ROOT_LOGGER_NAME = 'ZZFree'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def get_logger(name: str) -> logging.Logger:
    """返回 ZZFree 下的子日志记录器"""
    return logging.getLogger(f'{ROOT_LOGGER_NAME}.{name}')


def parse_level(level: str) -> int:
    """把 DEBUG/INFO 等名称转换为 logging 级别"""
    value = logging.getLevelName(str(level).upper())
    if not isinstance(value, int):
        raise ConfigurationError(f"未知日志级别: {level}")
    return value


class Logger:
    """装配 ZZFree 根记录器的控制台与文件处理器"""

    def __init__(self, log_level: str = 'INFO', log_dir: Optional[Path] = None):
        """
        Args:
            log_level: 日志级别名称
            log_dir: 日志目录，为空时只输出到控制台
        """
        self.log_level = parse_level(log_level)
        self.log_file: Optional[Path] = None
        self.formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

        self.logger = logging.getLogger(ROOT_LOGGER_NAME)
        self.logger.setLevel(self.log_level)
        self.close()

        if log_dir is not None:
            self.log_file = self._run_log_path(Path(log_dir))
            self._attach(logging.FileHandler(self.log_file, encoding='utf-8'))
        self._attach(logging.StreamHandler(sys.stderr))

    @classmethod
    def from_config(cls, config) -> 'Logger':
        """按 Config 中的 log_level/log_dir 装配"""
        return cls(config.log_level, config.log_dir)

    @staticmethod
    def _run_log_path(log_dir: Path) -> Path:
        log_dir.mkdir(parents=True, exist_ok=True)
        return log_dir / f'zzfree_{datetime.now().strftime("%Y%m%d_%H%M%S")}.log'

    def _attach(self, handler: logging.Handler):
        handler.setLevel(self.log_level)
        handler.setFormatter(self.formatter)
        self.logger.addHandler(handler)

    def close(self):
        """关闭并移除已有处理器，重复装配时不会重复输出"""
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)


@contextmanager
def timed(stage: str, log: Optional[logging.Logger] = None) -> Iterator[None]:
    """
    记录一个计算阶段的耗时

    Args:
        stage: 阶段名称，例如 "static-zz 扫描"
        log: 使用的记录器，默认 ZZFree.timing
    """
    log = log or get_logger('timing')
    start = time.perf_counter()
    log.debug(f"开始: {stage}")
    try:
        yield
    finally:
        log.info(f"完成: {stage}，耗时 {time.perf_counter() - start:.2f} s")
