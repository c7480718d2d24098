#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""测试公共夹具"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from circuit_hamiltonian import CircuitParams  # noqa: E402
from config import Config  # noqa: E402
from device_library import preset  # noqa: E402


@pytest.fixture
def ct_params():
    """CSFQ-transmon 器件，δ1 = 0.6 GHz，Δ = 0.1 GHz"""
    return CircuitParams(omega1=5.192, delta1=0.6, omega2=5.292, delta2=-0.33, omega_c=6.492,
                         g1c=0.08, g2c=0.08, g12=0.0, q1_kind='csfq')


@pytest.fixture
def ct_spec(ct_params):
    return ct_params.build()


@pytest.fixture
def tt_params():
    """transmon-transmon 器件，Δ = -0.1 GHz"""
    return CircuitParams(omega1=5.014, delta1=-0.33, omega2=4.914, delta2=-0.33, omega_c=6.31,
                         g1c=0.098, g2c=0.083, g12=0.0)


@pytest.fixture
def small_params():
    """三能级截断的小器件，用于快速测试"""
    return CircuitParams(omega1=5.0, delta1=-0.3, omega2=5.2, delta2=-0.3, omega_c=6.5,
                         g1c=0.05, g2c=0.05, g12=0.002, truncation=(3, 3, 3))


@pytest.fixture
def single_thread_config():
    return Config(threads=1)


@pytest.fixture
def device():
    return preset
