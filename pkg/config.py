#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置模块

该模块提供ZZFree的配置管理：运行时参数 (Config) 与 YAML 运行文件 (RunConfig)。

运行文件单位约定：频率与非谐性为 GHz，耦合强度与驱动幅度为 MHz。

作者: ZZFree Team
版本: 1.0.0
"""

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import yaml

from circuit_hamiltonian import CircuitParams
from error_handler import ConfigurationError

THREADS_ENV = 'ZZFREE_THREADS'
OUTPUT_FORMATS = ('csv', 'json')

CIRCUIT_KEYS = {
    'omega1': None,
    'delta1': None,
    'omega2': None,
    'delta2': None,
    'omega_c': None,
    'g1c': 0.0,
    'g2c': 0.0,
    'g12': 0.0,
    'truncation': [5, 5, 5],
    'q1_kind': 'transmon',
    'q2_kind': 'transmon',
}
SWEEP_KEYS = {'axis': 'detuning', 'start': None, 'stop': None, 'points': 11}
SWEEP_AXES = ('detuning', 'delta1', 'g1c', 'g2c', 'g12', 'amplitude')
DRIVE_KEYS = {'amplitudes': [], 'method': 'LA', 'physical': False}
DRIVE_METHODS = ('LA', 'SW')
OUTPUT_KEYS = {'path': None, 'format': 'csv'}


class Config:
    """配置类"""

    def __init__(self,
                 threads: Optional[int] = None,
                 log_level: str = 'INFO',
                 log_dir: Optional[Path] = None,
                 output_path: Optional[Path] = None,
                 output_format: str = 'csv',
                 eps_div: float = 1e-3,
                 truncation: Tuple[int, int, int] = (5, 5, 5)):
        """
        初始化配置

        Args:
            threads: 并发线程数，为空时读取环境变量 ZZFREE_THREADS
            log_level: 日志级别
            log_dir: 日志目录
            output_path: 结果文件路径，为空时写到标准输出
            output_format: 输出格式 csv 或 json
            eps_div: 微扰分母保护阈值 (GHz)
            truncation: 默认截断 (n1, nc, n2)
        """
        self.threads = self._resolve_threads(threads)
        self.log_level = log_level
        self.log_dir = Path(log_dir) if log_dir else None
        self.output_path = Path(output_path) if output_path else None
        self.eps_div = eps_div
        self.truncation = tuple(truncation)

        if output_format not in OUTPUT_FORMATS:
            raise ConfigurationError(f"不支持的输出格式: {output_format}")
        self.output_format = output_format

    @staticmethod
    def _resolve_threads(threads: Optional[int]) -> int:
        if threads is None:
            env_value = os.environ.get(THREADS_ENV)
            if env_value:
                try:
                    threads = int(env_value)
                except ValueError:
                    raise ConfigurationError(f"{THREADS_ENV} 必须是整数: {env_value}")
            else:
                threads = min(8, os.cpu_count() or 1)
        if threads < 1:
            raise ConfigurationError(f"线程数必须为正: {threads}")
        return threads


def apply_axis(params: CircuitParams, axis: str, value: float) -> CircuitParams:
    """
    在扫描轴上取一个点

    Args:
        params: 基准参数
        axis: 扫描轴，detuning 与 delta1 为 GHz，耦合为 MHz
        value: 轴上的取值

    Returns:
        新的 CircuitParams
    """
    if axis == 'detuning':
        return params.with_detuning(float(value))
    if axis == 'delta1':
        return replace(params, delta1=float(value))
    if axis in ('g1c', 'g2c', 'g12'):
        return replace(params, **{axis: float(value) / 1000})
    raise ConfigurationError(f"扫描轴 {axis} 不作用于电路参数")


def _merge_section(name: str, data: Optional[Dict[str, Any]], defaults: Dict[str, Any]) -> Dict[str, Any]:
    data = data or {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"配置段 [{name}] 必须是映射")
    unknown = sorted(set(data) - set(defaults))
    if unknown:
        raise ConfigurationError(f"配置段 [{name}] 含未知键: {', '.join(unknown)}")
    merged = dict(defaults)
    merged.update(data)
    return merged


@dataclass
class RunConfig:
    """YAML 运行文件"""
    circuit: Dict[str, Any]
    sweep: Dict[str, Any] = field(default_factory=lambda: dict(SWEEP_KEYS))
    drive: Dict[str, Any] = field(default_factory=lambda: dict(DRIVE_KEYS))
    output: Dict[str, Any] = field(default_factory=lambda: dict(OUTPUT_KEYS))

    def __post_init__(self):
        self.circuit = _merge_section('circuit', self.circuit, CIRCUIT_KEYS)
        self.sweep = _merge_section('sweep', self.sweep, SWEEP_KEYS)
        self.drive = _merge_section('drive', self.drive, DRIVE_KEYS)
        self.output = _merge_section('output', self.output, OUTPUT_KEYS)
        self._validate()

    def _validate(self):
        missing = [key for key, value in self.circuit.items() if value is None]
        if missing:
            raise ConfigurationError(f"配置段 [circuit] 缺少: {', '.join(missing)}")
        if len(self.circuit['truncation']) != 3:
            raise ConfigurationError("truncation 必须是三个整数 [n1, nc, n2]")
        if self.sweep['axis'] not in SWEEP_AXES:
            raise ConfigurationError(f"不支持的扫描轴: {self.sweep['axis']}")
        if self.drive['method'] not in DRIVE_METHODS:
            raise ConfigurationError(f"不支持的驱动方法: {self.drive['method']}")
        if any(amplitude < 0 for amplitude in self.drive['amplitudes']):
            raise ConfigurationError("驱动幅度不能为负")
        if self.output['format'] not in OUTPUT_FORMATS:
            raise ConfigurationError(f"不支持的输出格式: {self.output['format']}")

    @classmethod
    def from_preset(cls, preset) -> 'RunConfig':
        """由器件预设生成运行文件"""
        circuit = {
            'omega1': preset.omega1,
            'delta1': preset.delta1,
            'omega2': preset.omega2,
            'delta2': preset.delta2,
            'omega_c': preset.omega_c,
            'g1c': preset.g1c_mhz,
            'g2c': preset.g2c_mhz,
            'g12': preset.g12_mhz,
            'truncation': list(preset.truncation),
            'q1_kind': preset.q1_kind,
            'q2_kind': preset.q2_kind,
        }
        return cls(circuit=circuit)

    @classmethod
    def loads(cls, text: str) -> 'RunConfig':
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(f"YAML 解析失败: {e}")
        if not isinstance(data, dict):
            raise ConfigurationError("运行文件顶层必须是映射")
        unknown = sorted(set(data) - {'circuit', 'sweep', 'drive', 'output'})
        if unknown:
            raise ConfigurationError(f"未知配置段: {', '.join(unknown)}")
        if 'circuit' not in data:
            raise ConfigurationError("运行文件缺少 [circuit] 段")
        return cls(circuit=data['circuit'], sweep=data.get('sweep'),
                   drive=data.get('drive'), output=data.get('output'))

    @classmethod
    def load(cls, path: Path) -> 'RunConfig':
        """
        读取运行文件

        Args:
            path: YAML 文件路径

        Returns:
            RunConfig
        """
        try:
            text = Path(path).read_text(encoding='utf-8')
        except OSError as e:
            raise ConfigurationError(f"无法读取运行文件 {path}: {e}")
        return cls.loads(text)

    def dumps(self) -> str:
        data = {
            'circuit': dict(self.circuit, truncation=list(self.circuit['truncation'])),
            'sweep': self.sweep,
            'drive': dict(self.drive, amplitudes=list(self.drive['amplitudes'])),
            'output': self.output,
        }
        return yaml.safe_dump(data, allow_unicode=True, sort_keys=False)

    def circuit_params(self) -> CircuitParams:
        """转换为 GHz 单位的电路参数"""
        c = self.circuit
        return CircuitParams(
            omega1=float(c['omega1']),
            delta1=float(c['delta1']),
            omega2=float(c['omega2']),
            delta2=float(c['delta2']),
            omega_c=float(c['omega_c']),
            g1c=float(c['g1c']) / 1000,
            g2c=float(c['g2c']) / 1000,
            g12=float(c['g12']) / 1000,
            truncation=tuple(int(n) for n in c['truncation']),
            q1_kind=c['q1_kind'],
            q2_kind=c['q2_kind'],
        )

    def sweep_values(self) -> np.ndarray:
        if self.sweep['start'] is None or self.sweep['stop'] is None:
            raise ConfigurationError("配置段 [sweep] 缺少 start/stop")
        if int(self.sweep['points']) < 1:
            raise ConfigurationError("扫描点数必须为正")
        return np.linspace(float(self.sweep['start']), float(self.sweep['stop']), int(self.sweep['points']))

    def drive_amplitudes(self) -> List[float]:
        """驱动幅度 (GHz)"""
        return [float(amplitude) / 1000 for amplitude in self.drive['amplitudes']]
