#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
电路哈密顿量模块

该模块构造两个量子比特经谐振耦合器相连的三模哈密顿量，基矢为
带标签的裸态直积 |n1, nc, n2>，按行优先排列（n1 最慢，n2 最快）。

作者: ZZFree Team
版本: 1.0.0
"""

from dataclasses import dataclass, replace
from typing import List, NamedTuple, Tuple

import numpy as np

from error_handler import ParameterError
from qubit_models import ModeSpectrum, TransmonSpec, lowering_operator, transmon_spectrum

QUBIT_KINDS = ('transmon', 'csfq')
DISPERSIVE_RATIO = 0.1


class BareLabel(NamedTuple):
    """裸态占据数"""
    n1: int
    nc: int
    n2: int


@dataclass(frozen=True)
class CircuitSpec:
    """
    两比特加耦合器的器件描述

    Args:
        q1: 量子比特1能级
        q2: 量子比特2能级
        coupler: 耦合器能级（谐振子）
        g12: 比特间直接耦合 (GHz)
        g1c: 比特1与耦合器耦合 (GHz)
        g2c: 比特2与耦合器耦合 (GHz)
        truncation: (n1, nc, n2) 截断
    """
    q1: ModeSpectrum
    q2: ModeSpectrum
    coupler: ModeSpectrum
    g12: float = 0.0
    g1c: float = 0.0
    g2c: float = 0.0
    truncation: Tuple[int, int, int] = (5, 5, 5)
    q1_kind: str = 'transmon'
    q2_kind: str = 'transmon'

    def __post_init__(self):
        for kind in (self.q1_kind, self.q2_kind):
            if kind not in QUBIT_KINDS:
                raise ParameterError(f"未知的量子比特类型: {kind}")
        for mode, size in zip((self.q1, self.coupler, self.q2), self.truncation):
            if size < 1 or size > len(mode):
                raise ParameterError(f"截断 {size} 超出模式能级数 {len(mode)}")

    @property
    def dim(self) -> int:
        return int(np.prod(self.truncation))

    @property
    def dispersive(self) -> bool:
        """|g| < 0.1|Δ| 时视为色散区，仅作标记"""
        omega1, omega2, omega_c = self.q1.frequency, self.q2.frequency, self.coupler.frequency
        pairs = ((self.g1c, omega_c - omega1), (self.g2c, omega_c - omega2), (self.g12, omega2 - omega1))
        return all(g == 0 or abs(g) < DISPERSIVE_RATIO * abs(detuning) for g, detuning in pairs)

    def basis(self) -> List[BareLabel]:
        n1_max, nc_max, n2_max = self.truncation
        return [BareLabel(n1, nc, n2)
                for n1 in range(n1_max) for nc in range(nc_max) for n2 in range(n2_max)]

    def bare_energy(self, label: BareLabel) -> float:
        return self.q1.energies[label.n1] + self.coupler.energies[label.nc] + self.q2.energies[label.n2]


@dataclass(frozen=True)
class CircuitParams:
    """Duffing 参数形式的器件描述，所有频率与耦合均为 GHz"""
    omega1: float
    delta1: float
    omega2: float
    delta2: float
    omega_c: float
    g1c: float = 0.0
    g2c: float = 0.0
    g12: float = 0.0
    truncation: Tuple[int, int, int] = (5, 5, 5)
    q1_kind: str = 'transmon'
    q2_kind: str = 'transmon'

    @property
    def detuning(self) -> float:
        """Δ = ω2 - ω1"""
        return self.omega2 - self.omega1

    @property
    def coupler_detuning(self) -> float:
        """Δ2 = ωc - ω2"""
        return self.omega_c - self.omega2

    def with_detuning(self, detuning: float) -> 'CircuitParams':
        """保持 ω2 不变，令 ω1 = ω2 - Δ"""
        return replace(self, omega1=self.omega2 - detuning)

    def build(self) -> CircuitSpec:
        n1_max, nc_max, n2_max = self.truncation
        q1 = transmon_spectrum(TransmonSpec(self.omega1, self.delta1), n1_max)
        q2 = transmon_spectrum(TransmonSpec(self.omega2, self.delta2), n2_max)
        coupler = transmon_spectrum(TransmonSpec(self.omega_c, 0.0), nc_max)
        return CircuitSpec(q1=q1, q2=q2, coupler=coupler, g12=self.g12, g1c=self.g1c, g2c=self.g2c,
                           truncation=self.truncation, q1_kind=self.q1_kind, q2_kind=self.q2_kind)


@dataclass
class OperatorMatrix:
    """带裸态标签的稠密厄米矩阵"""
    matrix: np.ndarray
    basis: List[BareLabel]

    def __post_init__(self):
        if self.matrix.shape != (len(self.basis), len(self.basis)):
            raise ParameterError(f"矩阵维度 {self.matrix.shape} 与基矢数 {len(self.basis)} 不符")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def hermiticity_residual(self) -> float:
        scale = np.max(np.abs(self.matrix)) or 1.0
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)) / scale)


def bare_index(label: BareLabel, spec: CircuitSpec) -> int:
    """行优先索引"""
    n1_max, nc_max, n2_max = spec.truncation
    if not (0 <= label[0] < n1_max and 0 <= label[1] < nc_max and 0 <= label[2] < n2_max):
        raise ParameterError(f"裸态 {tuple(label)} 超出截断 {spec.truncation}")
    return (label[0] * nc_max + label[1]) * n2_max + label[2]


def bare_label(index: int, spec: CircuitSpec) -> BareLabel:
    n1_max, nc_max, n2_max = spec.truncation
    if not 0 <= index < spec.dim:
        raise ParameterError(f"索引 {index} 超出维度 {spec.dim}")
    n1, rest = divmod(index, nc_max * n2_max)
    nc, n2 = divmod(rest, n2_max)
    return BareLabel(n1, nc, n2)


def excitation_numbers(basis: List[BareLabel]) -> np.ndarray:
    """每个基矢的总激发数 n1 + nc + n2"""
    return np.array([sum(label) for label in basis])


def build_full_hamiltonian(spec: CircuitSpec) -> OperatorMatrix:
    """
    构造三模哈密顿量

    对角元为各模能级之和，耦合项为 g_ij (a_i + a_i†)(a_j + a_j†)，
    保留反旋转项。

    Args:
        spec: 器件描述

    Returns:
        OperatorMatrix
    """
    n1_max, nc_max, n2_max = spec.truncation
    eye1, eyec, eye2 = np.eye(n1_max), np.eye(nc_max), np.eye(n2_max)

    def quadrature(n):
        a = lowering_operator(n)
        return a + a.T

    x1 = np.kron(np.kron(quadrature(n1_max), eyec), eye2)
    xc = np.kron(np.kron(eye1, quadrature(nc_max)), eye2)
    x2 = np.kron(np.kron(eye1, eyec), quadrature(n2_max))

    diagonal = (np.kron(np.kron(spec.q1.array[:n1_max], np.ones(nc_max)), np.ones(n2_max))
                + np.kron(np.kron(np.ones(n1_max), spec.coupler.array[:nc_max]), np.ones(n2_max))
                + np.kron(np.kron(np.ones(n1_max), np.ones(nc_max)), spec.q2.array[:n2_max]))

    matrix = np.diag(diagonal) + spec.g1c * x1 @ xc + spec.g2c * x2 @ xc + spec.g12 * x1 @ x2
    return OperatorMatrix(matrix=matrix, basis=spec.basis())
