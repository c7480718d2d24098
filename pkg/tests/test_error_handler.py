#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import logging

import pytest

from error_handler import (ConfigurationError, ConvergenceError, DegeneracyError, DivergenceError,
                           ErrorHandler, NonHermitianError, NumericalGuardError, ParameterError,
                           RegimeError, ZZFreeError)


def test_error_string_carries_code():
    error = ConfigurationError("未知键 foo")
    assert str(error) == "[CONFIG] 未知键 foo"
    assert ZZFreeError("plain").error_code is None
    assert str(ZZFreeError("plain")) == "plain"


def test_guard_names_and_codes():
    for cls, guard in ((DivergenceError, 'divergence'), (DegeneracyError, 'degeneracy'),
                       (ConvergenceError, 'convergence'), (RegimeError, 'regime')):
        error = cls("x", details={'value': 1})
        assert isinstance(error, NumericalGuardError)
        assert error.guard == guard
        assert error.error_code == guard.upper()
        assert error.details == {'value': 1}


def test_non_hermitian_is_parameter_error():
    assert issubclass(NonHermitianError, ParameterError)


@pytest.mark.parametrize('error, code', [
    (DivergenceError("d"), 3),
    (RegimeError("r"), 3),
    (ConfigurationError("c"), 2),
    (NonHermitianError("h"), 2),
    (ValueError("v"), 1),
])
def test_exit_codes(error, code):
    assert ErrorHandler.exit_code(error) == code


def test_handle_error_logs(caplog):
    handler = ErrorHandler(logging.getLogger('ZZFree.test'))
    with caplog.at_level(logging.DEBUG, logger='ZZFree'):
        handler.handle_error(DegeneracyError("并列", details={'weights': [0.5, 0.5]}), 'LA')
        handler.handle_error(RuntimeError("boom"))
    messages = [record.getMessage() for record in caplog.records]
    assert any("LA" in m and "并列" in m for m in messages)
    assert any("未预期的错误" in m for m in messages)


def test_user_message_names_guard():
    assert ErrorHandler.user_message(ConvergenceError("未收敛")) == "数值保护触发: convergence"
    assert ErrorHandler.user_message(ConfigurationError("缺少键")) == "执行失败: [CONFIG] 缺少键"
