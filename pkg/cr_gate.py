#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
交叉共振门模块

该模块负责交叉共振 (CR) 驱动下的有效哈密顿量：旋转坐标系与旋转波近似、
4×4 计算块的 Pauli 分解、动态 ZZ 的二次系数 η、η 的闭式近似，
以及总 ZZ 为零时的驱动幅度 Ω*。

驱动作用在比特1（控制比特）上，频率与缀饰目标比特共振：ω_d = ω̃2 + ζ/2。
默认把驱动加在消去耦合器后的比特-比特有效哈密顿量上，先用最小作用量
约化到 4×4 计算块，再按控制比特状态块对角化，最后做 Pauli 分解。

作者: ZZFree Team
版本: 1.0.0
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np
from scipy import optimize

from block_diagonalization import (computational_partition, control_partition, decouple_control_states,
                                   reduce_to_computational, reduce_to_two_qubit_manifold)
from circuit_hamiltonian import CircuitParams, CircuitSpec, OperatorMatrix, build_full_hamiltonian
from config import Config
from effective_theory import (EPS_DIV, _guard, build_effective_hamiltonian, detuning_set, gamma_closed_form,
                              j_coupling, perturbative_block_diagonalize, perturbative_block_reduce,
                              static_zz_perturbative)
from error_handler import DegeneracyError, ParameterError, RegimeError
from exact_diagonalization import ZZ_LABELS, dressed_assignment, hamiltonian_assignment, zz_from_assignment
from logger import get_logger
from sweep_executor import SweepExecutor

logger = get_logger('cr_gate')

SINGLE_PAULIS = {
    'I': np.eye(2),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]]),
    'Z': np.diag([1.0, -1.0]),
}
PAULI_LABELS = tuple(first + second for first in 'IXYZ' for second in 'IXYZ')

METHODS = ('LA', 'SW')
HAMILTONIANS = ('effective', 'circuit')
DRIVE_STAGES = ('two_qubit', 'circuit')
CALIBRATION_AMPLITUDE = 0.005
FIT_AMPLITUDES = (0.002, 0.004)
OMEGA_SCAN_MAX = 0.2
OMEGA_SCAN_STEP = 0.005


def pauli_matrix(label: str) -> np.ndarray:
    """两比特 Pauli 矩阵，首字母作用在比特1"""
    return np.kron(SINGLE_PAULIS[label[0]], SINGLE_PAULIS[label[1]])


@dataclass(frozen=True)
class DriveSpec:
    """CR 驱动参数 (GHz)，phase 为驱动相位 (rad)"""
    amplitude: float
    frequency: float
    physical: bool = False
    phase: float = 0.0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ParameterError(f"驱动幅度不能为负: {self.amplitude}")


@dataclass(frozen=True)
class PauliCoefficients:
    """
    4×4 有效哈密顿量的 Pauli 系数 c_P = Tr(P H)/4

    α 按 H = Σ α_P P/2 归一化，其中 ZZ 项按 α_ZZ ZZ/4 归一化。
    """
    coefficients: Dict[str, float]

    def alpha(self, label: str) -> float:
        value = self.coefficients[label]
        return 4 * value if label == 'ZZ' else 2 * value

    @property
    def zi(self) -> float:
        return self.alpha('ZI')

    @property
    def iz(self) -> float:
        return self.alpha('IZ')

    @property
    def ix(self) -> float:
        return self.alpha('IX')

    @property
    def zx(self) -> float:
        return self.alpha('ZX')

    @property
    def zz(self) -> float:
        return self.alpha('ZZ')

    @property
    def zy(self) -> float:
        return self.alpha('ZY')

    @property
    def iy(self) -> float:
        return self.alpha('IY')

    def as_matrix(self) -> np.ndarray:
        return sum(value * pauli_matrix(label) for label, value in self.coefficients.items())

    def phase_shifted(self) -> 'PauliCoefficients':
        """
        驱动相位移 π 后的系数

        相移等价于用宇称 (-1)^{n1+n2} 共轭，限制在计算子空间上即 Z⊗Z 共轭，
        与 Z⊗Z 反对易的项变号。
        """
        flipped = {}
        for label, value in self.coefficients.items():
            odd = sum(1 for p in label if p in 'XY') % 2 == 1
            flipped[label] = -value if odd else value
        return PauliCoefficients(flipped)


def pauli_decompose(h4: np.ndarray) -> PauliCoefficients:
    """
    4×4 厄米矩阵的 Pauli 分解

    Args:
        h4: 基矢顺序 |00>, |01>, |10>, |11> 的矩阵

    Returns:
        PauliCoefficients
    """
    h4 = np.asarray(h4)
    if h4.shape != (4, 4):
        raise ParameterError(f"Pauli 分解需要 4×4 矩阵，实际 {h4.shape}")
    if np.max(np.abs(h4 - h4.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(h4))):
        raise ParameterError("Pauli 分解的输入必须是厄米矩阵")
    return PauliCoefficients({label: float(np.real(np.trace(pauli_matrix(label) @ h4)) / 4)
                              for label in PAULI_LABELS})


def cr_drive_matrix(amplitude: float, levels: int, physical: bool = False) -> np.ndarray:
    """
    比特1能级阶梯上的驱动矩阵 Ω Σ (|n><n+1| + h.c.)

    physical 为真时矩阵元带 √(n+1)。
    """
    if amplitude < 0:
        raise ParameterError(f"驱动幅度不能为负: {amplitude}")
    factors = np.sqrt(np.arange(1, levels)) if physical else np.ones(levels - 1)
    return amplitude * (np.diag(factors, k=1) + np.diag(factors, k=-1))


def rotating_frame_rwa(h: OperatorMatrix, drive: DriveSpec) -> OperatorMatrix:
    """
    旋转坐标系加旋转波近似

    所有模以 ω_d 旋转：丢弃改变总激发数的矩阵元，对角元减去 ω_d·N，
    驱动在比特1的相邻能级之间留下 (Ω/2)e^{±iφ}，相位 π 等价于驱动反号。

    Args:
        h: 带标签的哈密顿量（两比特流形或完整电路）
        drive: 驱动参数

    Returns:
        与时间无关的 OperatorMatrix
    """
    excitations = np.array([sum(label) for label in h.basis])
    same_sector = excitations[:, None] == excitations[None, :]
    matrix = np.where(same_sector, h.matrix, 0.0).astype(complex)
    matrix -= np.diag(drive.frequency * excitations)

    positions = {tuple(label): i for i, label in enumerate(h.basis)}
    phase = np.exp(1j * drive.phase)
    for i, label in enumerate(h.basis):
        j = positions.get((label[0] + 1,) + tuple(label[1:]))
        if j is None:
            continue
        element = drive.amplitude / 2 * (np.sqrt(label[0] + 1) if drive.physical else 1.0) * phase
        matrix[i, j] += element
        matrix[j, i] += np.conj(element)
    return OperatorMatrix(matrix=matrix, basis=list(h.basis))


class CrossResonanceModel:
    """单个器件的 CR 驱动模型，缓存无驱动的哈密顿量、ζ、ω_d 与第一级约化"""

    def __init__(self, spec: CircuitSpec, method: str = 'LA', hamiltonian: str = 'effective',
                 drive_stage: str = 'two_qubit', physical_drive: bool = False):
        """
        初始化 CR 模型

        Args:
            spec: 器件描述
            method: 计算子空间约化方法 LA 或 SW
            hamiltonian: 驱动加在比特-比特有效哈密顿量 (effective) 或完整三模电路 (circuit) 上
            drive_stage: 完整电路时，驱动加在消去耦合器之后 (two_qubit) 或之前 (circuit)
            physical_drive: 驱动矩阵元是否带 √(n+1)
        """
        if method not in METHODS:
            raise ParameterError(f"未知的约化方法: {method}")
        if hamiltonian not in HAMILTONIANS:
            raise ParameterError(f"未知的哈密顿量模型: {hamiltonian}")
        if drive_stage not in DRIVE_STAGES:
            raise ParameterError(f"未知的驱动位置: {drive_stage}")
        self.spec = spec
        self.method = method
        self.hamiltonian = hamiltonian
        self.drive_stage = drive_stage
        self.physical_drive = physical_drive

        if hamiltonian == 'effective':
            self.h_full = None
            self.h_2q = build_effective_hamiltonian(spec)
            assignment = hamiltonian_assignment(self.h_2q)
        else:
            self.h_full = build_full_hamiltonian(spec)
            self.h_2q = reduce_to_two_qubit_manifold(self.h_full) if drive_stage == 'two_qubit' else None
            assignment = dressed_assignment(spec, check_labels=ZZ_LABELS)
        self.zeta = zz_from_assignment(assignment)
        self.drive_frequency = assignment.energy(ZZ_LABELS[2]) - assignment.energy(ZZ_LABELS[0]) + self.zeta / 2

        self._phase = 1
        if self._raw_coefficients(CALIBRATION_AMPLITUDE).zx < 0:
            self._phase = -1
        logger.debug(f"CR 模型就绪 ({hamiltonian}/{method}): ζ = {self.zeta * 1e6:.2f} kHz, "
                     f"ω_d = {self.drive_frequency:.6f} GHz")

    def computational_block(self, amplitude: float, phase: float = 0.0) -> np.ndarray:
        """
        驱动下按控制比特块对角的 4×4 计算块

        Args:
            amplitude: 驱动幅度 Ω (GHz)
            phase: 驱动相位 (rad)，π 对应回波序列的 -CR 段
        """
        drive = DriveSpec(amplitude, self.drive_frequency, self.physical_drive, phase)
        if self.h_2q is not None:
            h_2q = rotating_frame_rwa(self.h_2q, drive)
        else:
            h_2q = reduce_to_two_qubit_manifold(rotating_frame_rwa(self.h_full, drive))

        if self.method == 'LA':
            return decouple_control_states(reduce_to_computational(h_2q)).matrix
        partition = computational_partition(h_2q.basis)
        h4 = perturbative_block_reduce(h_2q.matrix, partition, order=4)
        basis = [h_2q.basis[i] for i in partition.kept]
        return perturbative_block_diagonalize(h4, control_partition(basis), order=4)

    def _raw_coefficients(self, amplitude: float, phase: float = 0.0) -> PauliCoefficients:
        return pauli_decompose(self.computational_block(amplitude, phase))

    def coefficients(self, amplitude: float, phase: float = 0.0) -> PauliCoefficients:
        """
        驱动幅度 Ω (GHz)、相位 φ 下的 Pauli 系数

        全局相位已校准，使 φ = 0 的弱驱动 α_ZX ≥ 0。
        """
        if amplitude < 0:
            raise ParameterError(f"驱动幅度不能为负: {amplitude}")
        return self._raw_coefficients(amplitude, phase + (0.0 if self._phase > 0 else np.pi))

    def alpha_zz(self, amplitude: float) -> float:
        return self.coefficients(amplitude).zz


def driven_coefficients(spec: CircuitSpec, amplitude: float, method: str = 'LA', hamiltonian: str = 'effective',
                        drive_stage: str = 'two_qubit', physical_drive: bool = False) -> PauliCoefficients:
    """单次计算给定驱动幅度下的 Pauli 系数"""
    return CrossResonanceModel(spec, method, hamiltonian, drive_stage, physical_drive).coefficients(amplitude)


def eta_fit(source: Union[CrossResonanceModel, Callable[[float], float]],
            amplitudes: Sequence[float] = FIT_AMPLITUDES, regime_tolerance: float = 0.02) -> float:
    """
    两点拟合 α_ZZ = ζ + ηΩ²

    用减半的幅度再拟合一次，两次结果相差超过 regime_tolerance 时认为
    不在二次区间。

    Args:
        source: CR 模型，或返回 α_ZZ(Ω) 的函数
        amplitudes: 拟合幅度 (GHz)
        regime_tolerance: 二次区间的相对容差

    Returns:
        η (1/GHz)
    """
    alpha_zz = source.alpha_zz if isinstance(source, CrossResonanceModel) else source
    low, high = amplitudes

    def fit(a, b):
        return (alpha_zz(b) - alpha_zz(a)) / (b ** 2 - a ** 2)

    eta = fit(low, high)
    check = fit(low / 2, high / 2)
    scale = max(abs(eta), abs(check))
    if scale > 1e-12 and abs(eta - check) > regime_tolerance * scale:
        raise RegimeError(f"η 拟合不在二次区间: η = {eta:.6g}, 减半幅度后 η = {check:.6g}",
                          details={'eta': eta, 'eta_half': check})
    return eta


def eta_closed_form_tt(delta: float, detuning: float, j01: float, eps_div: float = EPS_DIV) -> float:
    """transmon-transmon 对 (δ1 = δ2 = δ) 的 η 闭式"""
    d, dd = delta, detuning
    denominator = (2 * _guard(d, 'δ', eps_div) * _guard(dd, 'Δ', eps_div) ** 2
                   * _guard(d - 2 * dd, 'δ-2Δ', eps_div) * _guard(d - dd, 'δ-Δ', eps_div) ** 3
                   * _guard(d + dd, 'δ+Δ', eps_div) ** 2)
    polynomial = (8 * d ** 6 - 15 * d ** 5 * dd - 18 * d ** 4 * dd ** 2 + 38 * d ** 3 * dd ** 3
                  + 6 * d ** 2 * dd ** 4 - d * dd ** 5 + 2 * dd ** 6)
    return j01 ** 2 / denominator * polynomial


def eta_closed_form_ct(delta: float, detuning: float, j01: float, eps_div: float = EPS_DIV) -> float:
    """transmon-CSFQ 对 (δ1 ≈ -2δ2 = -2δ) 的 η 闭式"""
    d, dd = delta, detuning
    denominator = (16 * _guard(d, 'δ', eps_div) * _guard(dd, 'Δ', eps_div) ** 2
                   * _guard(d + dd, 'δ+Δ', eps_div) * _guard(2 * d + dd, '2δ+Δ', eps_div) ** 3)
    polynomial = (8 * dd ** 5 - 208 * d ** 5 - 472 * d ** 4 * dd - 304 * d ** 3 * dd ** 2
                  + 57 * d ** 2 * dd ** 3 + 97 * d * dd ** 4)
    return j01 ** 2 / denominator * polynomial


def omega_star_formula(detuning: float, delta1: float, delta2: float, gamma: float) -> Optional[float]:
    """
    Δ/δ2 一阶近似下的动态 ZZ 消除幅度

    Returns:
        Ω* (GHz)，根号内为负时返回 None
    """
    if delta1 == 0 or delta2 == 0:
        raise ParameterError("非谐性不能为零")
    r = delta1 / delta2
    base_denominator = r + gamma * (2 + gamma)
    if abs(base_denominator) < 1e-12 or abs(r + gamma ** 2) < 1e-12:
        return None
    first = 2 * (r + gamma ** 2) / base_denominator
    c = ((0.5 + 2 * gamma + gamma ** 2 + r ** 2 + r * gamma * (2 + gamma) + gamma ** 2 * (1 + 2 * gamma ** 2) / (2 * r))
         / ((r + gamma ** 2) * base_denominator))
    second = 1 - c * detuning / delta2
    if first < 0 or second < 0:
        return None
    return abs(detuning) * np.sqrt(first) * np.sqrt(second)


def _same_sign_pair(spec: CircuitSpec) -> bool:
    return spec.q1.anharmonicity * spec.q2.anharmonicity > 0


def _perturbative_eta(spec: CircuitSpec, eta_source: str) -> float:
    """
    O(n) 路线使用的 η

    auto 时同号非谐性（transmon-transmon）用闭式，异号（CSFQ-transmon）用
    四阶 SW 约化的两点拟合：后者的闭式在 δ1 ≈ -2δ2 的近似下对基准器件 1-3 给出
    负的 η，与 SW 拟合和 LA 的结果都不符。
    """
    if eta_source == 'auto':
        eta_source = 'closed_form' if _same_sign_pair(spec) else 'sw_fit'
    if eta_source == 'sw_fit':
        return eta_fit(CrossResonanceModel(spec, method='SW'))
    if eta_source != 'closed_form':
        raise ParameterError(f"未知的 η 来源: {eta_source}")
    detunings = detuning_set(spec)
    j01 = j_coupling(spec, 0, 1)
    if _same_sign_pair(spec):
        return eta_closed_form_tt(detunings.delta2, detunings.detuning, j01)
    return eta_closed_form_ct(detunings.delta2, detunings.detuning, j01)


def _scan_la_root(model: CrossResonanceModel, omega_max: float, step: float) -> Optional[float]:
    previous_amplitude, previous_value = 0.0, model.zeta
    for amplitude in np.arange(step, omega_max + step / 2, step):
        try:
            value = model.alpha_zz(float(amplitude))
        except DegeneracyError as e:
            logger.warning(f"Ω = {amplitude * 1e3:.1f} MHz 处块分配失败，停止扫描: {e}")
            return None
        if previous_value == 0:
            return previous_amplitude
        if previous_value * value < 0:
            return float(optimize.bisect(model.alpha_zz, previous_amplitude, float(amplitude), xtol=1e-4))
        previous_amplitude, previous_value = float(amplitude), value
    return None


def cancellation_amplitude(spec: CircuitSpec, method: str = 'la', eta_source: str = 'auto',
                           omega_max: float = OMEGA_SCAN_MAX, step: float = OMEGA_SCAN_STEP) -> Optional[float]:
    """
    总 ZZ 为零的 CR 幅度 Ω*

    Args:
        spec: 器件描述
        method: la（非微扰扫描）、on（微扰 ζ 与 η）或 formula（一阶闭式）
        eta_source: on 方法的 η 来源 auto、closed_form 或 sw_fit
        omega_max: la 扫描上限 (GHz)
        step: la 扫描步长 (GHz)

    Returns:
        Ω* (GHz)，不存在时返回 None
    """
    method = method.lower()
    if method == 'la':
        return _scan_la_root(CrossResonanceModel(spec, method='LA'), omega_max, step)
    if method == 'on':
        zeta = static_zz_perturbative(spec)
        eta = _perturbative_eta(spec, eta_source)
        if eta == 0 or zeta / eta >= 0:
            return None
        return float(np.sqrt(-zeta / eta))
    if method == 'formula':
        detunings = detuning_set(spec)
        gamma = gamma_closed_form(detunings.delta1, detunings.delta2, detunings.detuning,
                                  detunings.coupler_detuning)
        return omega_star_formula(detunings.detuning, detunings.delta1, detunings.delta2, gamma)
    raise ParameterError(f"未知的 Ω* 计算方法: {method}")


def eta_sweep(params: CircuitParams, detunings: Sequence[float], method: str = 'LA',
              config: Optional[Config] = None) -> List[Optional[float]]:
    """η 随比特失谐 Δ 的变化，失败点为 None"""
    executor = SweepExecutor(config or Config())

    def point(detuning):
        return eta_fit(CrossResonanceModel(params.with_detuning(float(detuning)).build(), method=method))

    return executor.map(point, list(detunings))


def omega_star_sweep(params: CircuitParams, detunings: Sequence[float], method: str = 'la',
                     config: Optional[Config] = None) -> List[Optional[float]]:
    """Ω* 随比特失谐 Δ 的变化"""
    executor = SweepExecutor(config or Config())

    def point(detuning):
        return cancellation_amplitude(params.with_detuning(float(detuning)).build(), method=method)

    return executor.map(point, list(detunings))
