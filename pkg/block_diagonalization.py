#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
块对角化模块

该模块实现最小作用量 (least action) 块对角化：由本征矢矩阵 S 及其
块对角部分 S_BD 构造 T = S S_BD† (S_BD S_BD†)^{-1/2}，以及只需保留块
本征矢的 X 形式。两级约化先消去耦合器，再提取 4×4 计算子空间，
并在 4×4 内按控制比特状态再块对角化一次。

约定：返回的 T 满足 T H T† 为块对角矩阵。

作者: ZZFree Team
版本: 1.0.0
"""

from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from circuit_hamiltonian import BareLabel, OperatorMatrix
from error_handler import DegeneracyError, ParameterError
from exact_diagonalization import eigensolve
from logger import get_logger

logger = get_logger('block_diagonalization')

WEIGHT_GAP = 1e-8
EIGENVALUE_FLOOR = 1e-14

MatrixLike = Union[np.ndarray, OperatorMatrix]


def _as_array(h: MatrixLike) -> np.ndarray:
    return h.matrix if isinstance(h, OperatorMatrix) else np.asarray(h)


@dataclass(frozen=True)
class BlockPartition:
    """保留块 P 与其余块 Q 的索引划分"""
    kept: Tuple[int, ...]
    dim: int

    def __post_init__(self):
        kept = tuple(int(i) for i in self.kept)
        if len(set(kept)) != len(kept):
            raise ParameterError("保留块索引有重复")
        if not kept or any(i < 0 or i >= self.dim for i in kept):
            raise ParameterError(f"保留块索引必须落在 [0, {self.dim}) 内且非空")
        if len(kept) == self.dim:
            raise ParameterError("其余块不能为空")
        object.__setattr__(self, 'kept', kept)

    @property
    def rest(self) -> Tuple[int, ...]:
        kept = set(self.kept)
        return tuple(i for i in range(self.dim) if i not in kept)

    @property
    def order(self) -> List[int]:
        """P 在前、Q 在后的排列"""
        return list(self.kept) + list(self.rest)

    @classmethod
    def from_labels(cls, basis: Sequence[BareLabel], predicate: Callable[[BareLabel], bool]) -> 'BlockPartition':
        return cls(tuple(i for i, label in enumerate(basis) if predicate(label)), len(basis))


@dataclass
class UnitaryTransform:
    """块对角化幺正变换"""
    matrix: np.ndarray
    partition: BlockPartition

    @property
    def unitarity_residual(self) -> float:
        product = self.matrix.conj().T @ self.matrix
        return float(np.max(np.abs(product - np.eye(len(product)))))

    def apply(self, h: MatrixLike) -> np.ndarray:
        """T H T†"""
        return self.matrix @ _as_array(h) @ self.matrix.conj().T

    def off_block_norm(self, h: MatrixLike) -> float:
        transformed = self.apply(h)
        return float(np.max(np.abs(transformed[np.ix_(self.partition.kept, self.partition.rest)])))


def assign_to_blocks(eigenvectors: np.ndarray, partition: BlockPartition) -> Tuple[List[int], List[int]]:
    """
    将本征矢分配到两个块：在 P 子空间权重最大的 |P| 个本征矢归入 P

    Args:
        eigenvectors: 按列排列的本征矢
        partition: 块划分

    Returns:
        (P 块本征矢列号, Q 块本征矢列号)，均按能量升序
    """
    weights = np.sum(np.abs(eigenvectors[list(partition.kept), :]) ** 2, axis=0)
    n_kept = len(partition.kept)
    ranking = np.argsort(-weights, kind='stable')
    gap = weights[ranking[n_kept - 1]] - weights[ranking[n_kept]]
    if gap < WEIGHT_GAP:
        raise DegeneracyError(f"块分配出现并列：第 {n_kept} 与第 {n_kept + 1} 个本征矢的 P 权重差 {gap:.2e}",
                              details={'weights': weights[ranking[n_kept - 1:n_kept + 1]].tolist()})
    kept_columns = sorted(int(j) for j in ranking[:n_kept])
    rest_columns = sorted(int(j) for j in ranking[n_kept:])
    return kept_columns, rest_columns


def inverse_sqrt_psd(matrix: np.ndarray) -> np.ndarray:
    """厄米正定矩阵的逆平方根"""
    values, vectors = linalg.eigh(matrix)
    if values.min() < EIGENVALUE_FLOOR:
        raise DegeneracyError(f"矩阵接近奇异，最小本征值 {values.min():.2e}")
    return (vectors / np.sqrt(values)) @ vectors.conj().T


def _to_original(matrix_perm: np.ndarray, partition: BlockPartition) -> np.ndarray:
    order = partition.order
    result = np.zeros_like(matrix_perm)
    result[np.ix_(order, order)] = matrix_perm
    return result


def least_action_transform(h: MatrixLike, partition: BlockPartition) -> UnitaryTransform:
    """
    最小作用量块对角化 T = S S_BD† (S_BD S_BD†)^{-1/2}

    Args:
        h: 厄米矩阵
        partition: 块划分

    Returns:
        UnitaryTransform，T H T† 为块对角
    """
    matrix = _as_array(h)
    if matrix.shape != (partition.dim, partition.dim):
        raise ParameterError(f"矩阵维度 {matrix.shape} 与块划分 {partition.dim} 不符")
    _, vectors = eigensolve(matrix)
    kept_columns, rest_columns = assign_to_blocks(vectors, partition)

    n = len(partition.kept)
    s = vectors[np.ix_(partition.order, kept_columns + rest_columns)]
    s_bd = np.zeros_like(s)
    s_bd[:n, :n] = s[:n, :n]
    s_bd[n:, n:] = s[n:, n:]
    t_perm = s @ s_bd.conj().T @ inverse_sqrt_psd(s_bd @ s_bd.conj().T)
    return UnitaryTransform(_to_original(t_perm.conj().T, partition), partition)


def _kept_blocks(kept_vectors: np.ndarray, partition: BlockPartition) -> Tuple[np.ndarray, np.ndarray]:
    return kept_vectors[list(partition.kept), :], kept_vectors[list(partition.rest), :]


def la_via_x(kept_vectors: np.ndarray, partition: BlockPartition) -> UnitaryTransform:
    """
    只用保留块本征矢构造同一个 T

    X = -(S_mn S_nn^{-1})†，U = [[1, X], [-X†, 1]]，T = U (U†U)^{-1/2}，
    其中 U†U = diag(1 + XX†, 1 + X†X)。

    Args:
        kept_vectors: dim×|P| 矩阵，分配给 P 块的本征矢
        partition: 块划分

    Returns:
        UnitaryTransform
    """
    s_nn, s_mn = _kept_blocks(kept_vectors, partition)
    try:
        x = -(s_mn @ linalg.inv(s_nn)).conj().T
    except linalg.LinAlgError as e:
        raise DegeneracyError(f"S_nn 奇异: {e}")
    n, m = x.shape
    u = np.block([[np.eye(n), x], [-x.conj().T, np.eye(m)]])
    norm = np.zeros((n + m, n + m), dtype=u.dtype)
    norm[:n, :n] = inverse_sqrt_psd(np.eye(n) + x @ x.conj().T)
    norm[n:, n:] = inverse_sqrt_psd(np.eye(m) + x.conj().T @ x)
    t_perm = u @ norm
    return UnitaryTransform(_to_original(t_perm.conj().T, partition), partition)


def x_generator_forms(h: MatrixLike, partition: BlockPartition) -> Tuple[np.ndarray, np.ndarray]:
    """两种 X 的表达：-(S_mn S_nn^{-1})† 与 S_nm S_mm^{-1}"""
    _, vectors = eigensolve(_as_array(h))
    kept_columns, rest_columns = assign_to_blocks(vectors, partition)
    s_nn, s_mn = _kept_blocks(vectors[:, kept_columns], partition)
    s_nm, s_mm = _kept_blocks(vectors[:, rest_columns], partition)
    try:
        from_kept = -(s_mn @ linalg.inv(s_nn)).conj().T
        from_rest = s_nm @ linalg.inv(s_mm)
    except linalg.LinAlgError as e:
        raise DegeneracyError(f"本征矢子块奇异: {e}")
    return from_kept, from_rest


def block_reduce(h: OperatorMatrix, partition: BlockPartition) -> OperatorMatrix:
    """
    提取 T H T† 的保留块

    Args:
        h: 带标签的厄米矩阵
        partition: 块划分

    Returns:
        保留块，基矢为对应的裸态标签
    """
    transformed = least_action_transform(h, partition).apply(h)
    block = transformed[np.ix_(partition.kept, partition.kept)]
    block = 0.5 * (block + block.conj().T)
    return OperatorMatrix(matrix=block, basis=[h.basis[i] for i in partition.kept])


def reduce_to_two_qubit_manifold(h_full: OperatorMatrix) -> OperatorMatrix:
    """第一级：保留耦合器基态 nc = 0 的两比特流形"""
    partition = BlockPartition.from_labels(h_full.basis, lambda label: label.nc == 0)
    return block_reduce(h_full, partition)


def computational_partition(basis: Sequence[BareLabel]) -> BlockPartition:
    """计算子空间 {|00>, |01>, |10>, |11>}，顺序为 n1 慢 n2 快"""
    return BlockPartition.from_labels(basis, lambda label: label.n1 < 2 and label.n2 < 2 and label.nc == 0)


def reduce_to_computational(h_2q: OperatorMatrix) -> OperatorMatrix:
    """第二级：从两比特多能级矩阵中提取 4×4 计算块"""
    return block_reduce(h_2q, computational_partition(h_2q.basis))


def control_partition(basis: Sequence[BareLabel]) -> BlockPartition:
    """4×4 内按控制比特划分：{|00>, |01>} 与 {|10>, |11>}"""
    return BlockPartition.from_labels(basis, lambda label: label.n1 == 0)


def block_diagonalize(h: OperatorMatrix, partition: BlockPartition) -> OperatorMatrix:
    """
    返回完整的 T H T†，块间元素置零

    与 block_reduce 不同，两个块都保留，基矢不变。
    """
    transformed = least_action_transform(h, partition).apply(h)
    mask = np.zeros((partition.dim, partition.dim), dtype=bool)
    mask[np.ix_(partition.kept, partition.kept)] = True
    mask[np.ix_(partition.rest, partition.rest)] = True
    transformed = np.where(mask, transformed, 0.0)
    return OperatorMatrix(matrix=0.5 * (transformed + transformed.conj().T), basis=list(h.basis))


def decouple_control_states(h_4: OperatorMatrix) -> OperatorMatrix:
    """在 4×4 计算块内再做一次最小作用量约化，消去改变控制比特状态的项"""
    return block_diagonalize(h_4, control_partition(h_4.basis))


def two_stage_reduction(h_full: OperatorMatrix) -> Tuple[OperatorMatrix, OperatorMatrix]:
    """
    两级最小作用量约化

    第一级消去耦合器激发，第二级提取 4×4 计算块后再按控制比特状态
    做一次块对角化，得到的 4×4 只含 I/Z ⊗ Pauli 项。

    Args:
        h_full: 三模哈密顿量（可含驱动，需与时间无关）

    Returns:
        (按控制比特块对角的 4×4 计算块, 两比特多能级块)
    """
    h_2q = reduce_to_two_qubit_manifold(h_full)
    h_4 = decouple_control_states(reduce_to_computational(h_2q))
    logger.debug(f"两级约化完成: {h_full.dim} -> {h_2q.dim} -> {h_4.dim}")
    return h_4, h_2q
