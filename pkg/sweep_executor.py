#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
扫描执行模块

该模块负责将纯函数并发地映射到扫描网格上，结果按网格索引归并，
输出顺序与线程调度无关。

作者: ZZFree Team
版本: 1.0.0
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, Dict, List, Optional, Sequence

from error_handler import NumericalGuardError
from logger import get_logger

logger = get_logger('sweep_executor')


class SweepExecutor:
    """扫描执行器"""

    def __init__(self, config):
        """
        初始化扫描执行器

        Args:
            config: 配置对象
        """
        self.config = config
        # 用于收集失败的网格点
        self.failed_points = []

    def map(self, func: Callable[[Any], Any], items: Sequence[Any], strict: bool = False) -> List[Optional[Any]]:
        """
        并发计算每个网格点

        Args:
            func: 作用于单个网格点的纯函数
            items: 网格点列表
            strict: 为真时重新抛出第一个（按索引）数值保护错误

        Returns:
            与 items 顺序一致的结果列表，失败点为 None
        """
        if not items:
            return []

        results: Dict[int, Any] = {}
        failures: Dict[int, Exception] = {}

        with ThreadPoolExecutor(max_workers=self.config.threads) as executor:
            future_to_index = {
                executor.submit(func, item): index
                for index, item in enumerate(items)
            }

            for future in as_completed(future_to_index):
                index = future_to_index[future]
                try:
                    results[index] = future.result()
                except Exception as e:
                    failures[index] = e
                    self.failed_points.append({
                        'index': index,
                        'point': items[index],
                        'error': str(e),
                        'error_type': type(e).__name__
                    })
                    logger.warning(f"网格点 {index} ({items[index]}) 计算失败: {e}")

        if failures:
            self.failed_points.sort(key=lambda record: record['index'])
            if strict:
                for index in sorted(failures):
                    if isinstance(failures[index], NumericalGuardError):
                        raise failures[index]
                raise failures[min(failures)]

        logger.debug(f"扫描完成: {len(results)}/{len(items)} 个网格点成功")
        return [results.get(index) for index in range(len(items))]

    def get_failed_points(self) -> List[Dict[str, Any]]:
        """
        获取失败的网格点记录

        Returns:
            失败记录列表
        """
        return self.failed_points.copy()
