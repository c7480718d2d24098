#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
量子比特模型模块

该模块提供单模能级模型：transmon 的 Duffing 能级、CSFQ 在甜点处的
闭式参数、谐振子基下正规序展开的微扰能谱，以及直接对角化的数值基准。

单位约定：能量和频率均为 GHz（线性频率，h = 1），时间为 ns。

作者: ZZFree Team
版本: 1.0.0
"""

import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg, optimize
from scipy.special import gammaln

from error_handler import ParameterError, DivergenceError, ConvergenceError
from logger import get_logger

logger = get_logger('qubit_models')

# ξ 扫描窗口
XI_WINDOW = (0.05, 1.5)
# 微扰求和允许的最大中间态数
MAX_PERTURBATION_STATES = 64
DENOMINATOR_FLOOR = 1e-9


def lowering_operator(n_levels: int) -> np.ndarray:
    """截断的湮灭算符 a|m> = sqrt(m)|m-1>"""
    return np.diag(np.sqrt(np.arange(1, n_levels, dtype=float)), k=1)


@dataclass(frozen=True)
class TransmonSpec:
    """transmon 的 Duffing 参数"""
    frequency: float
    anharmonicity: float

    def __post_init__(self):
        if self.frequency <= 0:
            raise ParameterError(f"transmon 频率必须为正: {self.frequency}")


@dataclass(frozen=True)
class CSFQSpec:
    """
    电容分流磁通量子比特参数

    Args:
        charging_energy: 充电能 E_C (GHz)
        josephson_energy: 约瑟夫森能 E_J (GHz)
        alpha: 小结与大结之比
        flux: 外磁通 f = Φ_ext/Φ_0
        half_order: 势能展开到 2L 阶中的 L
    """
    charging_energy: float
    josephson_energy: float
    alpha: float
    flux: float = 0.5
    half_order: int = 10

    def __post_init__(self):
        if self.alpha >= 0.5:
            raise ParameterError(f"alpha={self.alpha} 处于双势阱区间，不在支持范围内")
        if self.alpha < 0:
            raise ParameterError(f"alpha 不能为负: {self.alpha}")
        if self.charging_energy <= 0 or self.josephson_energy <= 0:
            raise ParameterError("E_C 与 E_J 必须为正")
        if self.half_order < 2:
            raise ParameterError(f"展开阶数 L 至少为 2: {self.half_order}")

    @property
    def flux_offset(self) -> float:
        return self.flux - 0.5


@dataclass(frozen=True)
class ModeSpectrum:
    """截断能级，E_0 = 0"""
    energies: Tuple[float, ...]

    def __post_init__(self):
        if len(self.energies) < 1:
            raise ParameterError("能级列表不能为空")
        if abs(self.energies[0]) > 1e-12:
            raise ParameterError(f"能级必须以 E_0 = 0 为零点，当前 E_0 = {self.energies[0]}")

    @classmethod
    def from_energies(cls, energies: Sequence[float]) -> 'ModeSpectrum':
        values = np.asarray(energies, dtype=float)
        return cls(tuple(float(e) for e in values - values[0]))

    def __len__(self) -> int:
        return len(self.energies)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.energies, dtype=float)

    def transition(self, n: int) -> float:
        """跃迁频率 ω(n) = E_{n+1} - E_n"""
        if n < 0 or n + 1 >= len(self.energies):
            raise ParameterError(f"跃迁 {n}->{n + 1} 超出截断 {len(self.energies)}")
        return self.energies[n + 1] - self.energies[n]

    @property
    def frequency(self) -> float:
        return self.transition(0)

    @property
    def anharmonicity(self) -> float:
        return self.transition(1) - self.transition(0)

    def truncated(self, n_levels: int) -> 'ModeSpectrum':
        if n_levels > len(self.energies):
            raise ParameterError(f"无法截断到 {n_levels} 个能级，只有 {len(self.energies)} 个")
        return ModeSpectrum(self.energies[:n_levels])


@dataclass(frozen=True)
class PerturbativeLevels:
    """逐阶微扰修正"""
    zeroth: np.ndarray
    first: np.ndarray
    second: np.ndarray
    third: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.zeroth + self.first + self.second + self.third

    def spectrum(self) -> ModeSpectrum:
        return ModeSpectrum.from_energies(self.total)


def transmon_spectrum(spec: TransmonSpec, n_levels: int) -> ModeSpectrum:
    """
    Duffing 能级 E_n = nω + δn(n-1)/2

    Args:
        spec: transmon 参数
        n_levels: 能级数

    Returns:
        ModeSpectrum
    """
    if n_levels < 2:
        raise ParameterError(f"至少需要 2 个能级: {n_levels}")
    n = np.arange(n_levels, dtype=float)
    energies = n * spec.frequency + spec.anharmonicity * n * (n - 1) / 2
    if np.any(np.diff(energies) <= 0):
        raise ParameterError(f"Duffing 能级在 {n_levels} 个能级内不单调: {spec}")
    return ModeSpectrum(tuple(float(e) for e in energies))


def csfq_sweet_spot_params(spec: CSFQSpec) -> Tuple[float, float, float]:
    """
    甜点处的闭式参数

    Returns:
        (ω, δ, φ_zpf)
    """
    if abs(spec.flux_offset) > 1e-12:
        raise ParameterError(f"闭式参数只在 f = 1/2 成立，当前 f = {spec.flux}")
    ec, ej, alpha = spec.charging_energy, spec.josephson_energy, spec.alpha
    omega = math.sqrt(8 * ej * ec * (0.5 - alpha))
    delta = 4 * ec * (alpha - 1 / 8) / (1 - 2 * alpha)
    return omega, delta, _zero_point_phase(spec)


def _zero_point_phase(spec: CSFQSpec) -> float:
    return (4 * spec.charging_energy / (spec.josephson_energy * (1 - 2 * spec.alpha))) ** 0.25


def potential_derivatives(spec: CSFQSpec, phi0: float, max_order: int) -> np.ndarray:
    """U(φ) = -2E_J cos(φ/2) - αE_J cos(2πf - φ) 在 φ0 处的 0..max_order 阶导数"""
    k = np.arange(max_order + 1)
    ej = spec.josephson_energy
    shift = 2 * np.pi * spec.flux
    return (-2 * ej * 0.5 ** k * np.cos(phi0 / 2 + k * np.pi / 2)
            - spec.alpha * ej * np.cos(phi0 - shift + k * np.pi / 2))


def csfq_potential_minimum(spec: CSFQSpec) -> float:
    """势能极小点，线性化公式给初值后用牛顿法收敛"""
    if spec.flux_offset == 0:
        return 0.0
    guess = -2 * np.pi * spec.alpha * spec.flux_offset / (0.5 - spec.alpha)

    def slope(phi):
        return potential_derivatives(spec, phi, 1)[1]

    def curvature(phi):
        return potential_derivatives(spec, phi, 2)[2]

    try:
        phi0 = optimize.newton(slope, guess, fprime=curvature, tol=1e-14, maxiter=50)
    except RuntimeError as e:
        raise ConvergenceError(f"势能极小点牛顿迭代未收敛: {e}")
    if curvature(phi0) <= 0:
        raise ConvergenceError(f"φ0 = {phi0:.6f} 不是极小点")
    return float(phi0)


def normal_ordered_coefficients(derivatives: Sequence[float], charging_energy: float,
                                xi: float) -> np.ndarray:
    """
    正规序哈密顿量 Σ x[p, q] (a†)^p a^q 的系数

    φ = ξ(a + a†)，n = i(a - a†)/(2ξ)。势能项来自 U^(k) ξ^k (a+a†)^k / k! 的
    正规序展开，动能项 4E_C n² = (E_C/ξ²)(2a†a + 1 - a² - a†²)。

    Args:
        derivatives: U^(k)(φ0)，k = 0..K
        charging_energy: E_C
        xi: 振子长度 ξ

    Returns:
        (K+1)×(K+1) 系数矩阵，K 至少为 2
    """
    order = len(derivatives) - 1
    size = max(order, 2) + 1
    coefficients = np.zeros((size, size))
    for k, uk in enumerate(derivatives):
        if uk == 0:
            continue
        ck = uk * xi ** k
        for j in range(k // 2 + 1):
            r = k - 2 * j
            prefactor = ck / (2 ** j * math.factorial(j))
            for p in range(r + 1):
                coefficients[p, r - p] += prefactor / (math.factorial(p) * math.factorial(r - p))

    kinetic = charging_energy / xi ** 2
    coefficients[1, 1] += 2 * kinetic
    coefficients[0, 0] += kinetic
    coefficients[2, 0] -= kinetic
    coefficients[0, 2] -= kinetic
    return coefficients


def _oscillator_matrix(coefficients: np.ndarray, dim: int) -> np.ndarray:
    # <m|(a†)^p a^q|n> = sqrt(n! m!)/s!，s = n - q = m - p
    size = coefficients.shape[0]
    log_fact = gammaln(np.arange(dim) + 1.0)
    matrix = np.zeros((dim, dim))
    for m in range(dim):
        for n in range(m, dim):
            total = 0.0
            for s in range(m + 1):
                p, q = m - s, n - s
                if p >= size or q >= size or coefficients[p, q] == 0.0:
                    continue
                total += coefficients[p, q] * math.exp(0.5 * (log_fact[n] + log_fact[m]) - log_fact[s])
            matrix[m, n] = total
            matrix[n, m] = total
    return matrix


def perturbative_corrections(derivatives: Sequence[float], charging_energy: float, xi: float,
                             n_levels: int, half_order: int) -> PerturbativeLevels:
    """
    零到三阶微扰能级

    H0 取正规序哈密顿量在 Fock 基下的全部对角元，V 为其余非对角元，
    因而一阶修正恒为零。中间态求和到 n + L。

    Args:
        derivatives: 势能导数 U^(k)(φ0)
        charging_energy: E_C
        xi: 振子长度 ξ
        n_levels: 需要的能级数
        half_order: L

    Returns:
        PerturbativeLevels
    """
    if n_levels < 2:
        raise ParameterError(f"至少需要 2 个能级: {n_levels}")
    if xi <= 0:
        raise ParameterError(f"ξ 必须为正: {xi}")
    dim = n_levels + half_order
    if dim > MAX_PERTURBATION_STATES:
        raise ParameterError(f"中间态数 {dim} 超过上限 {MAX_PERTURBATION_STATES}")

    coefficients = normal_ordered_coefficients(derivatives, charging_energy, xi)
    matrix = _oscillator_matrix(coefficients, dim)
    zeroth = np.diag(matrix).copy()
    coupling = matrix - np.diag(zeroth)

    first = np.diag(coupling)[:n_levels].copy()
    second = np.zeros(n_levels)
    third = np.zeros(n_levels)
    for n in range(n_levels):
        others = np.array([k for k in range(min(n + half_order, dim - 1) + 1) if k != n])
        gaps = zeroth[n] - zeroth[others]
        if np.any(np.abs(gaps) < DENOMINATOR_FLOOR):
            raise DivergenceError(f"能级 {n} 的零阶能量与中间态简并 (ξ={xi:.4f})")
        row = coupling[n, others]
        second[n] = np.sum(row ** 2 / gaps)
        weights = row / gaps
        third[n] = weights @ coupling[np.ix_(others, others)] @ weights

    return PerturbativeLevels(zeroth[:n_levels], first, second, third)


def _perturbation_inputs(spec: CSFQSpec) -> np.ndarray:
    phi0 = csfq_potential_minimum(spec)
    return potential_derivatives(spec, phi0, 2 * spec.half_order)


def csfq_perturbative_spectrum(spec: CSFQSpec, xi: float, n_levels: int = 3) -> ModeSpectrum:
    """
    CSFQ 的三阶微扰能谱

    Args:
        spec: CSFQ 参数
        xi: 振子长度 ξ
        n_levels: 能级数

    Returns:
        ModeSpectrum
    """
    derivatives = _perturbation_inputs(spec)
    levels = perturbative_corrections(derivatives, spec.charging_energy, xi, n_levels, spec.half_order)
    return levels.spectrum()


def csfq_f01_profile(spec: CSFQSpec, xis: Sequence[float]) -> np.ndarray:
    """在一组 ξ 上计算微扰 f01，发散点记为 inf"""
    derivatives = _perturbation_inputs(spec)
    values = []
    for xi in xis:
        try:
            total = perturbative_corrections(derivatives, spec.charging_energy, xi, 2, spec.half_order).total
            values.append(total[1] - total[0])
        except DivergenceError:
            values.append(np.inf)
    return np.asarray(values)


def csfq_optimize_xi(spec: CSFQSpec, window: Tuple[float, float] = XI_WINDOW,
                     grid_points: int = 146) -> float:
    """
    求使微扰 f01(ξ) 最小的 ξ：先粗扫描，再用黄金分割细化

    Args:
        spec: CSFQ 参数
        window: 扫描窗口
        grid_points: 粗扫描点数

    Returns:
        最优 ξ
    """
    derivatives = _perturbation_inputs(spec)

    def f01(xi):
        try:
            total = perturbative_corrections(derivatives, spec.charging_energy, xi, 2, spec.half_order).total
        except DivergenceError:
            return np.inf
        return total[1] - total[0]

    grid = np.linspace(window[0], window[1], grid_points)
    values = np.array([f01(xi) for xi in grid])
    best = int(np.argmin(values))
    if best == 0 or best == grid_points - 1 or not np.isfinite(values[best]):
        raise ConvergenceError(f"f01(ξ) 在窗口 {window} 内没有内部极小值")

    result = optimize.minimize_scalar(f01, bracket=(grid[best - 1], grid[best], grid[best + 1]),
                                      method='golden', tol=1e-6)
    logger.debug(f"ξ 优化完成: ξ = {result.x:.6f}, f01 = {result.fun:.6f} GHz")
    return float(result.x)


def _oscillator_levels(spec: CSFQSpec, xi0: float, size: int, n_levels: int) -> np.ndarray:
    # 在两倍大小的基中计算矩阵函数再截断，避免截断边缘误差
    padded = 2 * size
    a = lowering_operator(padded)
    phase_values, phase_vectors = linalg.eigh(xi0 * (a + a.T))

    def phase_function(values):
        return (phase_vectors * values) @ phase_vectors.T

    cos_half = phase_function(np.cos(phase_values / 2))
    cos_shift = phase_function(np.cos(2 * np.pi * spec.flux - phase_values))
    difference = a - a.T
    charge_squared = -(difference @ difference) / (4 * xi0 ** 2)

    hamiltonian = (4 * spec.charging_energy * charge_squared
                   - 2 * spec.josephson_energy * cos_half
                   - spec.alpha * spec.josephson_energy * cos_shift)
    hamiltonian = hamiltonian[:size, :size]
    energies = linalg.eigvalsh(hamiltonian, subset_by_index=[0, n_levels - 1])
    return energies - energies[0]


def csfq_numeric_spectrum(spec: CSFQSpec, basis_size: int = 60, n_levels: int = 4,
                          xi0: Optional[float] = None, max_basis: int = 640,
                          tolerance: float = 1e-8) -> ModeSpectrum:
    """
    谐振子基下直接对角化，作为微扰能谱的数值基准

    基矢数不断加倍，直到 E_2 的变化小于 tolerance。

    Args:
        spec: CSFQ 参数
        basis_size: 初始基矢数
        n_levels: 返回的能级数
        xi0: 基矢振子长度，默认 φ_zpf/√2
        max_basis: 基矢数上限
        tolerance: 收敛判据 (GHz)

    Returns:
        ModeSpectrum
    """
    if basis_size < 40:
        raise ParameterError(f"基矢数至少为 40: {basis_size}")
    if xi0 is None:
        xi0 = _zero_point_phase(spec) / math.sqrt(2)
    levels = max(n_levels, 3)

    size = basis_size
    previous = _oscillator_levels(spec, xi0, size, levels)
    while 2 * size <= max_basis:
        size *= 2
        current = _oscillator_levels(spec, xi0, size, levels)
        if abs(current[2] - previous[2]) < tolerance:
            logger.debug(f"数值能谱在基矢数 {size} 收敛")
            return ModeSpectrum.from_energies(current[:n_levels])
        previous = current
    raise ConvergenceError(f"基矢数达到 {max_basis} 仍未收敛")


def csfq_flux_spectrum(spec: CSFQSpec, fluxes: Sequence[float], n_levels: int = 3) -> List[ModeSpectrum]:
    """随外磁通变化的微扰能谱，每个磁通点重新优化 ξ"""
    spectra = []
    for flux in fluxes:
        point = replace(spec, flux=float(flux))
        xi = csfq_optimize_xi(point)
        spectra.append(csfq_perturbative_spectrum(point, xi, n_levels))
    return spectra
