#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
器件库模块

该模块提供十个基准器件（1-5 为 CSFQ-transmon，6-10 为 transmon-transmon）
以及各研究图的基准参数与扫描轴。

预设只给出失谐，绝对频率取同类器件的参考值：
器件 1-5 取 ω2 = 5.292 GHz，器件 6-10 取 ω2 = 4.914 GHz。

作者: ZZFree Team
版本: 1.0.0
"""

from dataclasses import dataclass, replace
from typing import Dict, Tuple

import numpy as np

from circuit_hamiltonian import CircuitParams, CircuitSpec
from error_handler import ConfigurationError

CT_OMEGA2 = 5.292
TT_OMEGA2 = 4.914


@dataclass(frozen=True)
class DevicePreset:
    """基准器件，频率为 GHz，耦合为 MHz"""
    id: int
    q1_kind: str
    q2_kind: str
    delta1: float
    delta2: float
    g1c_mhz: float
    g2c_mhz: float
    g12_mhz: float
    detuning: float
    coupler_detuning: float
    omega2: float
    truncation: Tuple[int, int, int] = (5, 5, 5)

    @property
    def omega1(self) -> float:
        return self.omega2 - self.detuning

    @property
    def omega_c(self) -> float:
        return self.omega2 + self.coupler_detuning

    def to_params(self) -> CircuitParams:
        return CircuitParams(omega1=self.omega1, delta1=self.delta1, omega2=self.omega2, delta2=self.delta2,
                             omega_c=self.omega_c, g1c=self.g1c_mhz / 1000, g2c=self.g2c_mhz / 1000,
                             g12=self.g12_mhz / 1000, truncation=self.truncation,
                             q1_kind=self.q1_kind, q2_kind=self.q2_kind)

    def to_circuit(self) -> CircuitSpec:
        return self.to_params().build()


def _csfq_transmon(device_id: int, detuning: float, coupler_detuning: float) -> DevicePreset:
    return DevicePreset(device_id, 'csfq', 'transmon', 0.6, -0.33, 80.0, 80.0, 0.0,
                        detuning, coupler_detuning, CT_OMEGA2)


def _transmon_transmon(device_id: int, detuning: float, coupler_detuning: float) -> DevicePreset:
    return DevicePreset(device_id, 'transmon', 'transmon', -0.33, -0.33, 98.0, 83.0, 2.5,
                        detuning, coupler_detuning, TT_OMEGA2)


PRESETS: Dict[int, DevicePreset] = {
    1: _csfq_transmon(1, 0.070, 1.1),
    2: _csfq_transmon(2, 0.070, 1.2),
    3: _csfq_transmon(3, 0.105, 1.2),
    4: _csfq_transmon(4, 0.150, 1.2),
    5: _csfq_transmon(5, 0.180, 1.2),
    6: _transmon_transmon(6, -0.200, 1.4),
    7: _transmon_transmon(7, -0.150, 1.4),
    8: _transmon_transmon(8, -0.100, 1.4),
    9: _transmon_transmon(9, -0.050, 1.4),
    10: _transmon_transmon(10, -0.070, 2.0),
}


def preset(device_id: int) -> DevicePreset:
    """
    按编号取基准器件

    Args:
        device_id: 1-10

    Returns:
        DevicePreset
    """
    try:
        return PRESETS[int(device_id)]
    except (KeyError, ValueError):
        raise ConfigurationError(f"未知的器件编号: {device_id}，可选 1-10")


@dataclass(frozen=True)
class FigureConfig:
    """
    研究图的基准参数与扫描轴

    axis 的单位同运行文件：detuning、delta1 为 GHz，耦合与驱动幅度为 MHz。
    series 为多条曲线各自的参数，缺省时只有基准一条。
    """
    name: str
    params: CircuitParams
    axis: str
    start: float
    stop: float
    points: int
    series: Tuple[Tuple[str, CircuitParams], ...] = ()
    description: str = ''

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def curves(self) -> Tuple[Tuple[str, CircuitParams], ...]:
        return self.series or (('base', self.params),)


CT_BASE = CircuitParams(omega1=CT_OMEGA2 - 0.1, delta1=0.6, omega2=CT_OMEGA2, delta2=-0.33, omega_c=6.492,
                        g1c=0.08, g2c=0.08, g12=0.0, q1_kind='csfq')
TT_BASE = CircuitParams(omega1=TT_OMEGA2 + 0.1, delta1=-0.33, omega2=TT_OMEGA2, delta2=-0.33, omega_c=6.31,
                        g1c=0.098, g2c=0.083, g12=0.0)


def _g12_series(base: CircuitParams, values_mhz) -> Tuple[Tuple[str, CircuitParams], ...]:
    return tuple((f'g12={value:g}MHz', replace(base, g12=value / 1000)) for value in values_mhz)


def _anharmonicity_series(base: CircuitParams, sets) -> Tuple[Tuple[str, CircuitParams], ...]:
    return tuple((f'delta1={d1:g}_delta2={d2:g}', replace(base, delta1=d1, delta2=d2)) for d1, d2 in sets)


FIGURES: Dict[str, FigureConfig] = {
    'zz_map_ct': FigureConfig('zz_map_ct', CT_BASE, 'detuning', 0.02, 0.4, 39,
                              tuple((f'delta1={d1:.2f}', replace(CT_BASE, delta1=float(d1)))
                                    for d1 in np.round(np.linspace(0.2, 1.0, 9), 2)),
                              'CSFQ-transmon 静态 ZZ 随 Δ 变化，δ1 = 0.2..1.0 GHz 共 9 条，用于零点边界'),
    'zz_ct': FigureConfig('zz_ct', CT_BASE, 'detuning', 0.02, 0.4, 39,
                          description='CSFQ-transmon 静态 ZZ 随 Δ 变化，精确与微扰对比'),
    'zz_tt': FigureConfig('zz_tt', TT_BASE, 'detuning', -0.4, -0.05, 36, _g12_series(TT_BASE, (0.0, 2.5, 5.0)),
                          'transmon-transmon 静态 ZZ 随 Δ 变化，g12 = 0/2.5/5 MHz'),
    'zz_coupling_tt': FigureConfig('zz_coupling_tt', TT_BASE.with_detuning(-0.1), 'g2c', 20.0, 150.0, 27,
                                   _g12_series(TT_BASE.with_detuning(-0.1), (0.0, 2.5, 5.0)),
                                   'transmon-transmon 静态 ZZ 随 g2c 变化，Δ = -0.1 GHz'),
    'cr_ct': FigureConfig('cr_ct', CT_BASE.with_detuning(0.1), 'amplitude', 0.0, 150.0, 31,
                          description='CSFQ-transmon 的 α_ZX 与 α_ZZ 随 CR 幅度变化，LA 与 SW 对比'),
    'eta_ct': FigureConfig('eta_ct', CT_BASE, 'detuning', 0.05, 0.2, 16,
                           description='CSFQ-transmon 的 η 随 Δ 变化'),
    'eta_tt': FigureConfig('eta_tt', replace(TT_BASE, g12=0.0025), 'detuning', -0.3, -0.03, 28,
                           description='transmon-transmon 的 η 随 Δ 变化，g12 = 2.5 MHz'),
    'omega_star_ct': FigureConfig('omega_star_ct', CT_BASE, 'detuning', 0.05, 0.2, 16,
                                  _anharmonicity_series(CT_BASE, ((0.6, -0.33), (0.41, -0.39))),
                                  'CSFQ-transmon 的 Ω* 随 Δ 变化，两组非谐性'),
    'omega_star_tt': FigureConfig('omega_star_tt', replace(TT_BASE, omega_c=TT_OMEGA2 + 1.4, g12=0.0025),
                                  'detuning', -0.2, -0.04, 17,
                                  _anharmonicity_series(replace(TT_BASE, omega_c=TT_OMEGA2 + 1.4, g12=0.0025),
                                                        ((-0.33, -0.33), (-0.41, -0.33))),
                                  'transmon-transmon 的 Ω* 随 Δ 变化，两组非谐性'),
}


def figure_help() -> str:
    """研究图配置名称与内容的对照，供命令行帮助使用"""
    width = max(len(name) for name in FIGURES)
    return '\n'.join(f'  {name:<{width}}  {fig.description}' for name, fig in FIGURES.items())


def figure_config(name: str) -> FigureConfig:
    """按名称取研究图配置"""
    try:
        return FIGURES[name]
    except KeyError:
        raise ConfigurationError(f"未知的图配置: {name}，可选 {', '.join(FIGURES)}")
