#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
结果表格模块

该模块负责把扫描结果写成 CSV 或 JSON 表格。列顺序固定，
浮点数统一保留6位有效数字，相同输入产生逐字节相同的输出。

作者: ZZFree Team
版本: 1.0.0
"""

import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from error_handler import ConfigurationError
from logger import get_logger

logger = get_logger('table_writer')

FLOAT_FORMAT = '%.6g'
NA_REP = 'none'


class ResultWriter:
    """结果写出器"""

    def __init__(self, config):
        """
        初始化结果写出器

        Args:
            config: 配置对象
        """
        self.config = config

    def to_frame(self, rows: List[Dict[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
        """按固定列顺序构造 DataFrame，缺失列报错"""
        df = pd.DataFrame(rows, columns=list(columns))
        if rows:
            extra = set().union(*(row.keys() for row in rows)) - set(columns)
            if extra:
                raise ConfigurationError(f"结果中含未声明的列: {', '.join(sorted(extra))}")
        return df

    def render(self, rows: List[Dict[str, Any]], columns: Sequence[str]) -> str:
        """
        渲染为文本

        Args:
            rows: 每行一个字典
            columns: 列顺序

        Returns:
            CSV 或 JSON 文本
        """
        df = self.to_frame(rows, columns)
        if self.config.output_format == 'json':
            records = df.astype(object).where(pd.notna(df), None).to_dict(orient='records')
            records = [{key: self._round(value) for key, value in record.items()} for record in records]
            return json.dumps(records, ensure_ascii=False, indent=2) + '\n'
        return df.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep=NA_REP, lineterminator='\n')

    @staticmethod
    def _round(value: Any) -> Any:
        if isinstance(value, float):
            return float(FLOAT_FORMAT % value)
        return value

    def write(self, rows: List[Dict[str, Any]], columns: Sequence[str], path: Optional[Path] = None) -> str:
        """写到文件或标准输出，返回写出的文本"""
        text = self.render(rows, columns)
        target = path or self.config.output_path
        if target is None:
            sys.stdout.write(text)
            return text
        try:
            target = Path(target)
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding='utf-8')
            logger.info(f"结果已保存: {target} (共 {len(rows)} 行)")
        except OSError as e:
            raise ConfigurationError(f"写入结果文件失败 {target}: {e}")
        return text
