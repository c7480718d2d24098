#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
门误差模块

该模块构造回波 CR 门 (echoed CR)：+CR(τ)、π、-CR(τ)、π，CR 段只保留
ZX 与 ZZ 项，并计算残余 ZZ 造成的平均门误差随门长度的变化。

时间单位 ns，频率单位 GHz。

作者: ZZFree Team
版本: 1.0.0
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import qutip
from scipy import linalg

from config import Config
from cr_gate import CrossResonanceModel, PauliCoefficients, pauli_matrix
from error_handler import ParameterError
from logger import get_logger
from sweep_executor import SweepExecutor

logger = get_logger('gate_error')

PI_PULSE_NS = 40.0
ZX_FLOOR = 1e-9
TWO_QUBIT_DIMS = [[2, 2], [2, 2]]

ZX = pauli_matrix('ZX')
ZZ = pauli_matrix('ZZ')
X_CONTROL = pauli_matrix('XI')


def echo_frequency(alpha_zx: float, alpha_zz: float) -> float:
    """目标比特的回波振荡频率 f = 2√(α_ZX² + α_ZZ²/4)"""
    return 2 * np.sqrt(alpha_zx ** 2 + alpha_zz ** 2 / 4)


def flat_top_for_pi_over_2(alpha_zx: float) -> float:
    """
    单个 CR 音的平顶时长 τ = 1/(8α_ZX)

    Args:
        alpha_zx: α_ZX (GHz)，必须为正

    Returns:
        τ (ns)
    """
    if alpha_zx <= 0:
        raise ParameterError(f"α_ZX 必须为正: {alpha_zx}")
    return 1 / (8 * alpha_zx)


def min_gate_length(alpha_zx_max: float, pi_pulse: float = PI_PULSE_NS) -> float:
    """可达到的最短回波门长度 1/(4α_ZX^max) + 两个 π 脉冲"""
    if alpha_zx_max <= 0:
        raise ParameterError(f"α_ZX 最大值必须为正: {alpha_zx_max}")
    return 1 / (4 * alpha_zx_max) + 2 * pi_pulse


@dataclass
class EchoSequence:
    """回波 CR 序列"""
    tau: float
    plus_cr: PauliCoefficients
    minus_cr: PauliCoefficients
    static_zz: float = 0.0
    pi_pulse: float = PI_PULSE_NS
    zz_during_pi: bool = True

    def __post_init__(self):
        if self.tau < 0 or self.pi_pulse < 0:
            raise ParameterError(f"脉冲时长不能为负: τ = {self.tau}, π = {self.pi_pulse}")

    @property
    def gate_length(self) -> float:
        return 2 * self.tau + 2 * self.pi_pulse

    @classmethod
    def from_coefficients(cls, coefficients: PauliCoefficients, static_zz: float = 0.0,
                          pi_pulse: float = PI_PULSE_NS, zz_during_pi: bool = True) -> 'EchoSequence':
        """由 +CR 段系数构造 π/2 回波序列，-CR 段取相移 π 的系数"""
        return cls(tau=flat_top_for_pi_over_2(coefficients.zx), plus_cr=coefficients,
                   minus_cr=coefficients.phase_shifted(), static_zz=static_zz,
                   pi_pulse=pi_pulse, zz_during_pi=zz_during_pi)


def _segment(alpha_zx: float, alpha_zz: float, duration: float) -> np.ndarray:
    h = alpha_zx / 2 * ZX + alpha_zz / 4 * ZZ
    return linalg.expm(-2j * np.pi * h * duration)


def echo_unitary(seq: EchoSequence) -> np.ndarray:
    """
    回波序列的 4×4 演化算符

    U = X_c · F · U_-CR · X_c · F · U_+CR，π 脉冲为瞬时理想 X，
    F 为 π 脉冲期间的自由演化（仅在 zz_during_pi 时包含静态 ZZ）。

    Args:
        seq: 回波序列

    Returns:
        4×4 幺正矩阵
    """
    plus = _segment(seq.plus_cr.zx, seq.plus_cr.zz, seq.tau)
    minus = _segment(seq.minus_cr.zx, seq.minus_cr.zz, seq.tau)
    free = _segment(0.0, seq.static_zz if seq.zz_during_pi else 0.0, seq.pi_pulse)
    return X_CONTROL @ free @ minus @ X_CONTROL @ free @ plus


def ideal_cr_gate() -> np.ndarray:
    """理想门 exp(-i(π/2)ZX/2)"""
    return linalg.expm(-1j * np.pi / 4 * ZX)


def average_gate_fidelity(unitary: np.ndarray, target: Optional[np.ndarray] = None) -> float:
    """两比特平均门保真度 (|Tr(U_ideal†U)|² + 4)/20，与全局相位无关"""
    target = ideal_cr_gate() if target is None else target
    return float(qutip.average_gate_fidelity(qutip.Qobj(unitary, dims=TWO_QUBIT_DIMS),
                                             qutip.Qobj(target, dims=TWO_QUBIT_DIMS)))


@dataclass(frozen=True)
class GateErrorPoint:
    """一个驱动幅度下的回波门 (Ω、α 为 GHz，τ、t_g 为 ns)"""
    amplitude: float
    alpha_zx: float
    alpha_zz: float
    tau: float
    gate_length: float
    error: float


def gate_error_curve(model: CrossResonanceModel, amplitudes: Sequence[float], zz_during_pi: bool = True,
                     pi_pulse: float = PI_PULSE_NS, config: Optional[Config] = None) -> List[GateErrorPoint]:
    """
    门误差随门长度的变化

    每个 Ω 由驱动系数确定 τ = 1/(8α_ZX)，α_ZX 不超过 ZX_FLOOR 的点跳过。
    -CR 段系数取自相位为 π 的驱动。

    Args:
        model: CR 模型
        amplitudes: 驱动幅度网格 (GHz)
        zz_during_pi: π 脉冲期间是否演化静态 ZZ
        pi_pulse: π 脉冲时长 (ns)
        config: 运行配置，决定线程数

    Returns:
        GateErrorPoint 列表，按幅度顺序
    """
    executor = SweepExecutor(config or Config())

    def point(amplitude):
        plus = model.coefficients(float(amplitude))
        if plus.zx <= ZX_FLOOR:
            logger.debug(f"Ω = {amplitude * 1e3:.2f} MHz 处 α_ZX 近似为零，跳过")
            return None
        seq = EchoSequence(flat_top_for_pi_over_2(plus.zx), plus, model.coefficients(float(amplitude), np.pi),
                           model.zeta, pi_pulse, zz_during_pi)
        error = 1 - average_gate_fidelity(echo_unitary(seq))
        return GateErrorPoint(float(amplitude), plus.zx, plus.zz, seq.tau, seq.gate_length, max(error, 0.0))

    return [p for p in executor.map(point, list(amplitudes)) if p is not None]


def gate_length_cutoff(model: CrossResonanceModel, amplitudes: Sequence[float],
                       pi_pulse: float = PI_PULSE_NS) -> float:
    """由网格上达到的最大 α_ZX 给出最短门长度 (ns)"""
    alpha_max = max(model.coefficients(float(a)).zx for a in amplitudes)
    return min_gate_length(alpha_max, pi_pulse)
