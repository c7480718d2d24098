#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
有效理论模块

该模块提供色散区的微扰结果：比特间 J 耦合、缀饰频率与非谐性、
读出残余修正、比特-比特有效哈密顿量、微扰静态 ZZ、静态 ZZ 消除条件
及其解析边界，以及用于驱动流水线的四阶 Schrieffer-Wolff 块约化。

所有微扰分母都受 eps_div 保护，过小时抛出 DivergenceError。

作者: ZZFree Team
版本: 1.0.0
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import optimize

from block_diagonalization import BlockPartition
from circuit_hamiltonian import BareLabel, CircuitParams, CircuitSpec, OperatorMatrix
from error_handler import ConvergenceError, DivergenceError, ParameterError
from exact_diagonalization import hamiltonian_assignment, zz_from_assignment
from logger import get_logger

logger = get_logger('effective_theory')

EPS_DIV = 1e-3
EFFECTIVE_LEVELS = 3


def _guard(value: float, name: str, eps_div: float = EPS_DIV) -> float:
    if abs(value) < eps_div:
        raise DivergenceError(f"分母 {name} = {value:.3e} GHz 小于保护阈值 {eps_div:.1e} GHz",
                              details={'denominator': name, 'value': value})
    return value


@dataclass(frozen=True)
class DressedParams:
    """缀饰参数 (GHz)"""
    omega1_bar: float
    omega2_bar: float
    delta1_bar: float
    delta2_bar: float
    omega1_tilde: float
    omega2_tilde: float

    @property
    def detuning_bar(self) -> float:
        """Δ̄ = ω̄2 - ω̄1"""
        return self.omega2_bar - self.omega1_bar


@dataclass(frozen=True)
class DetuningSet:
    """器件的各类失谐，Δ_q(n) 与 Σ_q(n) 按 n 排列"""
    detuning: float
    coupler_detuning: float
    delta1: float
    delta2: float
    coupler_gaps1: Tuple[float, ...]
    coupler_gaps2: Tuple[float, ...]
    coupler_sums1: Tuple[float, ...]
    coupler_sums2: Tuple[float, ...]

    @property
    def b(self) -> float:
        return self.detuning / self.coupler_detuning

    @property
    def a1(self) -> float:
        return self.delta1 / self.coupler_detuning

    @property
    def a2(self) -> float:
        return self.delta2 / self.coupler_detuning


def detuning_set(spec: CircuitSpec) -> DetuningSet:
    omega_c = spec.coupler.frequency
    transitions1 = [spec.q1.transition(n) for n in range(len(spec.q1) - 1)]
    transitions2 = [spec.q2.transition(n) for n in range(len(spec.q2) - 1)]
    return DetuningSet(
        detuning=spec.q2.frequency - spec.q1.frequency,
        coupler_detuning=omega_c - spec.q2.frequency,
        delta1=spec.q1.anharmonicity,
        delta2=spec.q2.anharmonicity,
        coupler_gaps1=tuple(omega_c - w for w in transitions1),
        coupler_gaps2=tuple(omega_c - w for w in transitions2),
        coupler_sums1=tuple(omega_c + w for w in transitions1),
        coupler_sums2=tuple(omega_c + w for w in transitions2),
    )


def j_coupling(spec: CircuitSpec, n1: int, n2: int, counter_rotating: bool = True,
               eps_div: float = EPS_DIV) -> float:
    """
    两光子极限下的比特间耦合 J_{n1 n2}

    J = g12 - (g1c g2c / 2) Σ_q [1/Δ_q(n_q) + 1/Σ_q(n_q)]

    Args:
        spec: 器件描述
        n1: 比特1能级
        n2: 比特2能级
        counter_rotating: 是否保留 1/Σ 项
        eps_div: 分母保护阈值

    Returns:
        J (GHz)
    """
    if not spec.dispersive:
        logger.warning("器件不在色散区，J 耦合的微扰结果可能不准确")
    omega_c = spec.coupler.frequency
    total = 0.0
    for name, mode, n in (('Δ_1', spec.q1, n1), ('Δ_2', spec.q2, n2)):
        transition = mode.transition(n)
        total += 1 / _guard(omega_c - transition, f'{name}({n})', eps_div)
        if counter_rotating:
            total += 1 / (omega_c + transition)
    return spec.g12 - spec.g1c * spec.g2c / 2 * total


def dressed_level(spec: CircuitSpec, qubit: int, n: int, eps_div: float = EPS_DIV) -> float:
    """
    缀饰能级 ω̄_q(n-1) = E_n - g_qc² n/Δ_q(n-1)，以基态为零点

    |n> 只与 |n-1, 1_c> 发生排斥，Δ_q(n-1) = ωc - ω_q(n-1)。
    """
    if n == 0:
        return 0.0
    mode, g = (spec.q1, spec.g1c) if qubit == 1 else (spec.q2, spec.g2c)
    gap = _guard(spec.coupler.frequency - mode.transition(n - 1), f'Δ_{qubit}({n - 1})', eps_div)
    return mode.energies[n] - g ** 2 * n / gap


def dressed_transition(spec: CircuitSpec, qubit: int, n: int, eps_div: float = EPS_DIV) -> float:
    """缀饰跃迁频率 ω̄(n+1) - ω̄(n)，n = 0 时即 ω̄_q = ω_q - g_qc²/Δ_q"""
    return dressed_level(spec, qubit, n + 1, eps_div) - dressed_level(spec, qubit, n, eps_div)


def _dressed_qubits(spec: CircuitSpec, eps_div: float) -> Tuple[float, float, float, float]:
    omega_c = spec.coupler.frequency

    def dressed_anharmonicity(mode, g, name):
        gap = _guard(omega_c - mode.frequency, f'{name}(0)', eps_div)
        delta = mode.anharmonicity
        _guard(gap - delta, f'{name}-δ', eps_div)
        return delta * (1 - 2 * g ** 2 / (gap * (gap - delta)))

    return (dressed_transition(spec, 1, 0, eps_div),
            dressed_transition(spec, 2, 0, eps_div),
            dressed_anharmonicity(spec.q1, spec.g1c, 'Δ_1'),
            dressed_anharmonicity(spec.q2, spec.g2c, 'Δ_2'))


def dressed_params(spec: CircuitSpec, eps_div: float = EPS_DIV) -> DressedParams:
    """
    计算缀饰频率、缀饰非谐性以及计算子空间频率 ω̃

    Args:
        spec: 器件描述
        eps_div: 分母保护阈值

    Returns:
        DressedParams
    """
    omega1_bar, omega2_bar, delta1_bar, delta2_bar = _dressed_qubits(spec, eps_div)

    j00 = j_coupling(spec, 0, 0, eps_div=eps_div)
    if j00 == 0:
        return DressedParams(omega1_bar, omega2_bar, delta1_bar, delta2_bar, omega1_bar, omega2_bar)
    detuning_bar = _guard(omega2_bar - omega1_bar, 'Δ̄', eps_div)
    shift = j00 ** 2 / detuning_bar
    return DressedParams(omega1_bar, omega2_bar, delta1_bar, delta2_bar,
                         omega1_bar - shift, omega2_bar + shift)


def readout_leftovers(g: float, detuning: float, coupler_detuning: float,
                      delta1: float, delta2: float,
                      eps_div: float = EPS_DIV) -> Tuple[float, float, float, float]:
    """
    读出谐振腔消除顺序带来的 O(g⁶) 残余修正

    上符号对应比特1，下符号对应比特2。

    Returns:
        (đω̃1, đω̃2, đδ̃1, đδ̃2)
    """
    d, d2 = detuning, coupler_detuning
    _guard(d, 'Δ', eps_div)
    _guard(d2, 'Δ2', eps_div)
    if max(abs(delta1), abs(delta2), abs(d)) > 0.5 * abs(d2):
        logger.warning("读出残余公式要求 δ1, δ2, Δ 远小于 Δ2")
    g6 = g ** 6

    omega2_shift = g6 * (d + 2 * d2) ** 2 * (d ** 2 + d * d2 + d2 ** 2) / (
        2 * d * d2 ** 4 * _guard(d + d2, 'Δ+Δ2', eps_div) ** 4)

    def anharmonicity_shift(delta, sign):
        numerator = (d2 - delta) ** 3 + (delta + d2) * d2 ** 2
        denominator = _guard(d2 ** 3 * d - sign * delta, 'Δ2³Δ∓δ', eps_div) * _guard(d2 - delta, 'Δ2-δ', eps_div) ** 4
        return 2 * g6 * (-numerator / denominator + sign * 2 / (d * d2 ** 4))

    return -omega2_shift, omega2_shift, anharmonicity_shift(delta1, +1), anharmonicity_shift(delta2, -1)


def static_zz_perturbative(spec: CircuitSpec, eps_div: float = EPS_DIV) -> float:
    """ζ = 2J10²/(Δ̄ - δ̄1) - 2J01²/(Δ̄ + δ̄2)，单位 GHz；J 全为零时直接返回 0"""
    j10 = j_coupling(spec, 1, 0, eps_div=eps_div)
    j01 = j_coupling(spec, 0, 1, eps_div=eps_div)
    if j10 == 0 and j01 == 0:
        return 0.0
    params = dressed_params(spec, eps_div)
    detuning_bar = params.detuning_bar
    return (2 * j10 ** 2 / _guard(detuning_bar - params.delta1_bar, 'Δ̄-δ̄1', eps_div)
            - 2 * j01 ** 2 / _guard(detuning_bar + params.delta2_bar, 'Δ̄+δ̄2', eps_div))


def build_effective_hamiltonian(spec: CircuitSpec, levels: int = EFFECTIVE_LEVELS,
                                eps_div: float = EPS_DIV) -> OperatorMatrix:
    """
    消去耦合器后的比特-比特多能级哈密顿量

    H = Σ_q ω̄_q(n_q - 1)|n_q><n_q| + Σ √((n1+1)(n2+1)) J_{n1 n2}(|n1, n2+1><n1+1, n2| + h.c.)

    基矢沿用 BareLabel 且 nc = 0，可以直接进入与完整电路相同的旋转坐标系
    与块约化流程。

    Args:
        spec: 器件描述
        levels: 每个比特保留的能级数，不超过截断
        eps_div: 分母保护阈值

    Returns:
        OperatorMatrix，维度 levels²
    """
    n1_max, n2_max = min(levels, spec.truncation[0]), min(levels, spec.truncation[2])
    if min(n1_max, n2_max) < 2:
        raise ParameterError(f"有效哈密顿量每个比特至少需要 2 个能级: {levels}")
    ladder1 = [dressed_level(spec, 1, n, eps_div) for n in range(n1_max)]
    ladder2 = [dressed_level(spec, 2, n, eps_div) for n in range(n2_max)]

    basis = [BareLabel(n1, 0, n2) for n1 in range(n1_max) for n2 in range(n2_max)]
    positions = {label: i for i, label in enumerate(basis)}
    matrix = np.diag([ladder1[label.n1] + ladder2[label.n2] for label in basis])
    for n1 in range(n1_max - 1):
        for n2 in range(n2_max - 1):
            coupling = np.sqrt((n1 + 1) * (n2 + 1)) * j_coupling(spec, n1, n2, eps_div=eps_div)
            i, j = positions[BareLabel(n1, 0, n2 + 1)], positions[BareLabel(n1 + 1, 0, n2)]
            matrix[i, j] = matrix[j, i] = coupling
    return OperatorMatrix(matrix=matrix, basis=basis)


def static_zz_effective(spec: CircuitSpec, levels: int = EFFECTIVE_LEVELS, eps_div: float = EPS_DIV) -> float:
    """对角化比特-比特有效哈密顿量得到的静态 ZZ (GHz)"""
    h = build_effective_hamiltonian(spec, levels, eps_div)
    return zz_from_assignment(hamiltonian_assignment(h))


def gamma_closed_form(delta1: float, delta2: float, detuning: float, coupler_detuning: float,
                      eps_div: float = EPS_DIV) -> float:
    """
    忽略反旋转项时 γ = J10/J01 的闭式表达

    Args:
        delta1: 比特1非谐性
        delta2: 比特2非谐性
        detuning: Δ = ω2 - ω1
        coupler_detuning: Δ2 = ωc - ω2

    Returns:
        γ
    """
    d, d2 = detuning, coupler_detuning
    outer = _guard(2 * d2 + d, '2Δ2+Δ', eps_div)
    _guard(d2, 'Δ2', eps_div)
    inner = _guard(d2 + d, 'Δ2+Δ', eps_div)
    first = (1 - delta1 / outer) / _guard(1 - delta2 / outer, '1-δ2/(2Δ2+Δ)', 1e-12)
    second = (1 - delta2 / d2) / _guard(1 - delta1 / inner, '1-δ1/(Δ2+Δ)', 1e-12)
    return first * second


def gamma_ratio(spec: CircuitSpec, eps_div: float = EPS_DIV) -> float:
    detunings = detuning_set(spec)
    return gamma_closed_form(detunings.delta1, detunings.delta2, detunings.detuning,
                             detunings.coupler_detuning, eps_div)


def zz_free_detuning(gamma: float, delta1_bar: float, delta2_bar: float) -> float:
    """静态 ZZ 为零时的缀饰失谐 Δ̄ = (δ̄1 + δ̄2 γ²)/(1 - γ²)"""
    denominator = 1 - gamma ** 2
    if abs(denominator) < 1e-12:
        raise DivergenceError(f"γ² = {gamma ** 2:.12f} 等于 1，ZZ 消除条件没有有限解")
    return (delta1_bar + delta2_bar * gamma ** 2) / denominator


@dataclass(frozen=True)
class ZZFreePoint:
    """自洽求得的静态 ZZ 消除点"""
    detuning: float
    detuning_bar: float
    gamma: float
    zeta: float


def solve_zz_free_point(params: CircuitParams, maxiter: int = 20, eps_div: float = EPS_DIV) -> ZZFreePoint:
    """
    自洽求解静态 ZZ 消除点

    初值取裸参数下的零阶解 Δ0 = (δ1 + δ2 γ0²)/(1 - γ0²)，γ0 为 Δ = 0 处的闭式 γ。
    每次迭代在当前裸失谐下重新计算 γ = J10/J01 与缀饰参数，再按 Δ̄ 的差值修正
    裸失谐。迭代映射只用 ω̄ 与 δ̄，不经过 Δ̄ 的分母保护。

    Args:
        params: 器件参数，ω1 会被改写
        maxiter: 最大迭代次数
        eps_div: 分母保护阈值

    Returns:
        ZZFreePoint
    """
    def update(detuning):
        spec = params.with_detuning(float(detuning)).build()
        omega1_bar, omega2_bar, delta1_bar, delta2_bar = _dressed_qubits(spec, eps_div)
        gamma = j_coupling(spec, 1, 0, eps_div=eps_div) / _guard(j_coupling(spec, 0, 1, eps_div=eps_div), 'J01', 1e-12)
        target = zz_free_detuning(gamma, delta1_bar, delta2_bar)
        return detuning + target - (omega2_bar - omega1_bar)

    start_spec = params.with_detuning(0.0).build()
    gamma0 = gamma_closed_form(params.delta1, params.delta2, 0.0, params.coupler_detuning, eps_div)
    start = zz_free_detuning(gamma0, start_spec.q1.anharmonicity, start_spec.q2.anharmonicity)
    logger.debug(f"ZZ 消除点迭代初值 Δ0 = {start * 1e3:.3f} MHz")

    try:
        detuning = float(optimize.fixed_point(update, start, xtol=1e-10, maxiter=maxiter))
    except RuntimeError as e:
        raise ConvergenceError(f"ZZ 消除点自洽迭代 {maxiter} 次未收敛: {e}")

    spec = params.with_detuning(detuning).build()
    dressed = dressed_params(spec, eps_div)
    gamma = j_coupling(spec, 1, 0, eps_div=eps_div) / j_coupling(spec, 0, 1, eps_div=eps_div)
    zeta = static_zz_perturbative(spec, eps_div)
    logger.info(f"ZZ 消除点: Δ = {detuning * 1e3:.3f} MHz, 残余 ζ = {zeta * 1e6:.4f} kHz")
    return ZZFreePoint(detuning, dressed.detuning_bar, gamma, zeta)


def zeroth_order_boundary(b: float) -> float:
    """a → 0 时的边界 k = (2 + b - 3b² - 2b³)/(2 + 5b + b²)"""
    denominator = 2 + 5 * b + b ** 2
    if abs(denominator) < 1e-12:
        raise DivergenceError(f"b = {b} 位于零阶边界的极点")
    return (2 + b - 3 * b ** 2 - 2 * b ** 3) / denominator


def reduced_gamma(k: float, a: float, b: float) -> float:
    """约化单位下的 γ = (1+a)(1+b)(ak-b-2)/((2+b+a)(ak-b-1))"""
    denominator = (2 + b + a) * (a * k - b - 1)
    if abs(denominator) < 1e-12:
        raise DivergenceError(f"约化 γ 在 k={k}, a={a}, b={b} 处发散")
    return (1 + a) * (1 + b) * (a * k - b - 2) / denominator


def boundary_residual(k: float, a: float, b: float) -> float:
    """
    约化单位下 ZZ 消除条件的残差

    δ1 = kδ，δ2 = -δ，Δ = bΔ2，a = δ/Δ2。残差除以 a，使 a → 0 的极限有限。
    """
    if a == 0:
        slope = ((1 + b) ** 2 + k) / ((1 + b) * (2 + b))
        return k - 1 + 2 * b * slope
    gamma_sq = reduced_gamma(k, a, b) ** 2
    return (k - gamma_sq) - b * (1 - gamma_sq) / a


def first_order_boundary(b: float, a: float, step: float = 1e-6) -> float:
    """在零阶解处做一次牛顿迭代，得到 a 的一阶边界"""
    k0 = zeroth_order_boundary(b)
    derivative = (boundary_residual(k0 + step, a, b) - boundary_residual(k0 - step, a, b)) / (2 * step)
    if abs(derivative) < 1e-14:
        raise DivergenceError(f"边界残差在 k0 = {k0} 处导数为零")
    return k0 - boundary_residual(k0, a, b) / derivative


def boundary_from_ratio(b: float, a: float, max_expansions: int = 12) -> float:
    """
    数值求解约化边界 k(b; a)

    以零阶解为中心逐步扩大区间直到残差变号，再用 brentq 求根。
    """
    k0 = zeroth_order_boundary(b)
    width = 0.25 * max(1.0, abs(k0))
    for _ in range(max_expansions):
        low, high = k0 - width, k0 + width
        try:
            f_low, f_high = boundary_residual(low, a, b), boundary_residual(high, a, b)
        except DivergenceError:
            f_low = f_high = np.nan
        if np.isfinite(f_low) and np.isfinite(f_high) and f_low * f_high < 0:
            return float(optimize.brentq(boundary_residual, low, high, args=(a, b), xtol=1e-12))
        width *= 1.5
    raise ConvergenceError(f"b = {b}, a = {a} 处找不到边界的有效区间")


def _solve_generator(energies: np.ndarray, rhs: np.ndarray, coupling_mask: np.ndarray,
                     eps_div: float) -> np.ndarray:
    # (E_i - E_j) S_ij = rhs_ij，只在块间元素上求解
    gaps = energies[:, None] - energies[None, :]
    active = coupling_mask & (np.abs(rhs) > 1e-15)
    if np.any(np.abs(gaps[active]) < eps_div):
        raise DivergenceError("块间能隙小于保护阈值，微扰块约化失效")
    generator = np.zeros_like(rhs)
    generator[active] = rhs[active] / gaps[active]
    return generator


def perturbative_block_diagonalize(h: np.ndarray, partition: BlockPartition, order: int = 4,
                                   eps_div: float = EPS_DIV) -> np.ndarray:
    """
    四阶以内的 Schrieffer-Wolff 块对角化

    H0 取 h 的对角部分，H1 为块内非对角部分，H2 为块间部分。
    生成元满足 [H0, S1] = -H2，[H0, S2] = -[H1, S1]，
    [H0, S3] = -[H1, S2] - [[H2, S1], S1]/3。

    Args:
        h: 厄米矩阵
        partition: 块划分，kept 为保留块
        order: 展开阶数 (2..4)
        eps_div: 块间能隙保护阈值

    Returns:
        与 h 同维的块对角有效哈密顿量
    """
    if order not in (2, 3, 4):
        raise ParameterError(f"SW 展开阶数必须在 2 到 4 之间: {order}")
    h = np.asarray(h)
    if h.shape != (partition.dim, partition.dim):
        raise ParameterError(f"矩阵维度 {h.shape} 与块划分 {partition.dim} 不符")

    kept = np.zeros(partition.dim, dtype=bool)
    kept[list(partition.kept)] = True
    coupling_mask = kept[:, None] != kept[None, :]

    energies = np.real(np.diag(h))
    h0 = np.diag(np.diag(h))
    h1 = np.where(coupling_mask, 0, h - h0)
    h2 = np.where(coupling_mask, h, 0)

    def commutator(x, y):
        return x @ y - y @ x

    s1 = _solve_generator(energies, -h2, coupling_mask, eps_div)
    h2s1 = commutator(h2, s1)
    effective = h0 + h1 + 0.5 * h2s1
    if order >= 3:
        s2 = _solve_generator(energies, -commutator(h1, s1), coupling_mask, eps_div)
        effective = effective + 0.5 * commutator(h2, s2)
    if order >= 4:
        s3 = _solve_generator(energies, -commutator(h1, s2) - commutator(h2s1, s1) / 3,
                              coupling_mask, eps_div)
        effective = (effective + 0.5 * commutator(h2, s3)
                     - commutator(commutator(h2s1, s1), s1) / 24)

    effective = np.where(coupling_mask, 0, effective)
    return 0.5 * (effective + effective.conj().T)


def perturbative_block_reduce(h: np.ndarray, partition: BlockPartition, order: int = 4,
                              eps_div: float = EPS_DIV) -> np.ndarray:
    """Schrieffer-Wolff 块对角化后的保留块"""
    effective = perturbative_block_diagonalize(h, partition, order, eps_div)
    return effective[np.ix_(partition.kept, partition.kept)]
