#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
错误处理模块

该模块提供统一的错误处理和异常定义。数值保护（发散、简并、收敛、
二次区间检查）各有独立的异常类型，命令行据此返回不同的退出码。

作者: ZZFree Team
版本: 1.0.0
"""

import logging
import traceback
from typing import Optional, Dict, Any


class ZZFreeError(Exception):
    """ZZFree基础异常类"""

    default_code: Optional[str] = None

    def __init__(self, message: str, error_code: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.default_code
        self.details = details or {}

    def __str__(self):
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message


class ConfigurationError(ZZFreeError):
    """配置相关错误"""
    default_code = 'CONFIG'


class ParameterError(ZZFreeError):
    """物理参数非法"""
    default_code = 'PARAMETER'


class NonHermitianError(ParameterError):
    """输入矩阵不是厄米矩阵"""
    default_code = 'NON_HERMITIAN'


class NumericalGuardError(ZZFreeError):
    """数值保护触发的错误基类"""

    guard = 'numerical'

    def __init__(self, message: str, error_code: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, error_code or self.guard.upper(), details)


class DivergenceError(NumericalGuardError):
    """微扰分母过小"""
    guard = 'divergence'


class DegeneracyError(NumericalGuardError):
    """块分配出现简并或奇异矩阵"""
    guard = 'degeneracy'


class ConvergenceError(NumericalGuardError):
    """迭代或基矢截断未收敛"""
    guard = 'convergence'


class RegimeError(NumericalGuardError):
    """二次拟合区间检查失败"""
    guard = 'regime'


class ErrorHandler:
    """错误处理器"""

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger('ZZFree')

    def handle_error(self, error: Exception, context: Optional[str] = None) -> None:
        """处理错误"""
        error_msg = f"错误发生在 {context}: {str(error)}" if context else str(error)

        if isinstance(error, ZZFreeError):
            self.logger.error(error_msg)
            if error.details:
                self.logger.debug(f"错误详情: {error.details}")
        else:
            self.logger.error(f"未预期的错误: {error_msg}")
            self.logger.debug(f"错误堆栈: {traceback.format_exc()}")

    @staticmethod
    def user_message(error: Exception) -> str:
        """命令行打印到标准错误的一行摘要；数值保护只报告触发的保护名称"""
        if isinstance(error, NumericalGuardError):
            return f"数值保护触发: {error.guard}"
        return f"执行失败: {error}"

    @staticmethod
    def exit_code(error: Exception) -> int:
        """
        将异常映射为命令行退出码

        Args:
            error: 捕获的异常

        Returns:
            2 表示配置/参数错误，3 表示数值保护错误，1 表示其他错误
        """
        if isinstance(error, NumericalGuardError):
            return 3
        if isinstance(error, (ConfigurationError, ParameterError)):
            return 2
        return 1
