#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
精确对角化模块

该模块对三模哈密顿量做非微扰求解：本征分解、缀饰态到裸态标签的
分配、静态 ZZ、能量色散，以及沿 δ1 扫描线的 ZZ 零点边界。

作者: ZZFree Team
版本: 1.0.0
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg, optimize

from circuit_hamiltonian import (BareLabel, CircuitParams, CircuitSpec, OperatorMatrix,
                                 build_full_hamiltonian)
from config import Config
from error_handler import NonHermitianError, ParameterError
from logger import get_logger
from sweep_executor import SweepExecutor

logger = get_logger('exact_diagonalization')

HERMITIAN_TOLERANCE = 1e-12
OVERLAP_WARNING = 0.5
ZZ_LABELS = (BareLabel(0, 0, 0), BareLabel(1, 0, 0), BareLabel(0, 0, 1), BareLabel(1, 0, 1))


def eigensolve(h: Union[np.ndarray, OperatorMatrix]) -> Tuple[np.ndarray, np.ndarray]:
    """
    厄米矩阵本征分解

    Args:
        h: 厄米矩阵

    Returns:
        (升序本征值, 按列排列的正交归一本征矢)
    """
    matrix = h.matrix if isinstance(h, OperatorMatrix) else np.asarray(h)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ParameterError(f"需要方阵，实际维度 {matrix.shape}")
    scale = np.max(np.abs(matrix)) if matrix.size else 0.0
    residual = np.max(np.abs(matrix - matrix.conj().T)) if matrix.size else 0.0
    if residual > HERMITIAN_TOLERANCE * max(scale, 1.0):
        raise NonHermitianError(f"矩阵不是厄米的，|H - H†|max = {residual:.2e}")
    return linalg.eigh(matrix)


@dataclass
class DressedAssignment:
    """每个裸态标签对应的缀饰能量、本征矢序号和重叠概率 |<ℓ|v>|²"""
    basis: List[BareLabel]
    energies: np.ndarray
    eigen_index: np.ndarray
    overlaps: np.ndarray
    _positions: Dict[BareLabel, int] = field(init=False, repr=False)

    def __post_init__(self):
        self._positions = {BareLabel(*label): i for i, label in enumerate(self.basis)}

    def _position(self, label) -> int:
        try:
            return self._positions[BareLabel(*label)]
        except KeyError:
            raise ParameterError(f"裸态 {tuple(label)} 不在基矢中")

    def energy(self, label) -> float:
        return float(self.energies[self._position(label)])

    def overlap(self, label) -> float:
        return float(self.overlaps[self._position(label)])

    def low_overlap_labels(self, labels: Optional[Iterable] = None,
                           threshold: float = OVERLAP_WARNING) -> List[BareLabel]:
        labels = self.basis if labels is None else labels
        return [BareLabel(*label) for label in labels if self.overlap(label) <= threshold]


def assign_dressed_states(eigenvalues: np.ndarray, eigenvectors: np.ndarray,
                          basis: Sequence[BareLabel], warn: bool = True,
                          check_labels: Optional[Iterable] = None) -> DressedAssignment:
    """
    贪心最大重叠分配

    按能量升序处理本征矢，每个本征矢认领尚未被认领、重叠最大的裸态；
    重叠相同时取较小的裸态索引。

    Args:
        eigenvalues: 升序本征值
        eigenvectors: 按列排列的本征矢
        basis: 裸态标签
        warn: 是否对低重叠发出警告
        check_labels: 只检查这些标签的重叠，默认检查全部

    Returns:
        DressedAssignment
    """
    dim = len(basis)
    probabilities = np.abs(eigenvectors) ** 2
    claimed = np.zeros(dim, dtype=bool)
    energies = np.zeros(dim)
    eigen_index = np.zeros(dim, dtype=int)
    overlaps = np.zeros(dim)

    for j in np.argsort(eigenvalues, kind='stable'):
        column = np.where(claimed, -1.0, probabilities[:, j])
        i = int(np.argmax(column))
        claimed[i] = True
        energies[i] = eigenvalues[j]
        eigen_index[i] = j
        overlaps[i] = probabilities[i, j]

    assignment = DressedAssignment(list(basis), energies, eigen_index, overlaps)
    if warn:
        low = assignment.low_overlap_labels(check_labels)
        if low:
            worst = min(low, key=assignment.overlap)
            logger.warning(f"{len(low)} 个缀饰态与裸态重叠不超过 {OVERLAP_WARNING}，"
                           f"最低为 {tuple(worst)}: {assignment.overlap(worst):.3f}")
    return assignment


def dressed_assignment(spec: CircuitSpec, warn: bool = True,
                       check_labels: Optional[Iterable] = None) -> DressedAssignment:
    h = build_full_hamiltonian(spec)
    values, vectors = eigensolve(h)
    return assign_dressed_states(values, vectors, h.basis, warn=warn, check_labels=check_labels)


def zz_from_assignment(assignment: DressedAssignment) -> float:
    """ζ = E11 - E10 - E01 + E00，耦合器处于基态"""
    e000, e100, e001, e101 = (assignment.energy(label) for label in ZZ_LABELS)
    return e101 - e100 - e001 + e000


def hamiltonian_assignment(h: OperatorMatrix, warn: bool = True) -> DressedAssignment:
    """对任意带标签的哈密顿量做本征分解与缀饰态分配，只检查计算态的重叠"""
    values, vectors = eigensolve(h)
    return assign_dressed_states(values, vectors, h.basis, warn=warn, check_labels=ZZ_LABELS)


def static_zz_exact(spec: CircuitSpec, warn: bool = True) -> float:
    """
    精确对角化得到的静态 ZZ (GHz)

    Args:
        spec: 器件描述，各模截断至少为 3
        warn: 是否对计算态的低重叠发出警告

    Returns:
        ζ
    """
    if min(spec.truncation) < 3:
        raise ParameterError(f"静态 ZZ 需要每个模至少 3 个能级，当前截断 {spec.truncation}")
    return zz_from_assignment(dressed_assignment(spec, warn=warn, check_labels=ZZ_LABELS))


def energy_dispersion(spec: CircuitSpec) -> Dict[BareLabel, float]:
    """每个裸态的缀饰能量与裸能量之差"""
    assignment = dressed_assignment(spec, warn=False)
    return {label: assignment.energy(label) - spec.bare_energy(label) for label in assignment.basis}


@dataclass(frozen=True)
class BoundaryLine:
    """一条 δ1 扫描线上的 ZZ 零点"""
    delta1: float
    roots: Tuple[float, ...]


def _exact_zz_quiet(spec: CircuitSpec) -> float:
    return static_zz_exact(spec, warn=False)


def _line_roots(params: CircuitParams, detunings: np.ndarray, tolerance: float,
                zz_model: Callable[[CircuitSpec], float]) -> Tuple[float, ...]:
    def zeta(detuning):
        return zz_model(params.with_detuning(float(detuning)).build())

    values = np.array([zeta(d) for d in detunings])
    roots = []
    for left, right, f_left, f_right in zip(detunings[:-1], detunings[1:], values[:-1], values[1:]):
        if f_left == 0:
            roots.append(float(left))
            continue
        if f_left * f_right > 0 or f_right == 0:
            continue
        root = float(optimize.bisect(zeta, left, right, xtol=1e-10))
        if abs(zeta(root)) > tolerance:
            # 符号变化来自能级标签跳变而非真实零点
            logger.warning(f"δ1 = {params.delta1:.4f} GHz 在 Δ = {root:.4f} GHz 处 ζ 不连续，舍弃该点")
            continue
        roots.append(root)
    if values[-1] == 0:
        roots.append(float(detunings[-1]))
    return tuple(roots)


def zz_free_boundary(params: CircuitParams, delta1_values: Sequence[float], detuning_values: Sequence[float],
                     config: Optional[Config] = None, tolerance: float = 1e-7,
                     zz_model: Optional[Callable[[CircuitSpec], float]] = None) -> List[BoundaryLine]:
    """
    沿每条 δ1 扫描线寻找静态 ZZ 的零点

    ω2、ωc、δ2 固定，ω1 = ω2 - Δ。各扫描线并发计算，结果按 δ1 顺序返回。

    Args:
        params: 基准器件参数
        delta1_values: δ1 网格 (GHz)
        detuning_values: Δ 网格 (GHz)
        config: 运行配置，决定线程数
        tolerance: 零点处允许的 |ζ| (GHz)
        zz_model: 由器件给出 ζ 的函数，默认为完整电路的精确对角化

    Returns:
        BoundaryLine 列表
    """
    detunings = np.sort(np.asarray(detuning_values, dtype=float))
    zz_model = zz_model or _exact_zz_quiet
    executor = SweepExecutor(config or Config())

    def line(delta1):
        roots = _line_roots(replace(params, delta1=float(delta1)), detunings, tolerance, zz_model)
        return BoundaryLine(float(delta1), roots)

    lines = executor.map(line, list(delta1_values), strict=True)
    logger.info(f"边界扫描完成: {len(lines)} 条扫描线, 共 {sum(len(l.roots) for l in lines)} 个零点")
    return lines
