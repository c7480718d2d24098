#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
ZZFree - 超导量子比特 ZZ 相互作用分析工具

功能特性：
- 静态 ZZ：精确对角化与微扰理论对照，支持运行文件、基准器件与研究图
- ZZ 零点边界扫描
- 交叉共振驱动下的 ZX/ZZ 系数（LA 与 SW 两种块约化）
- 动态 ZZ 消除幅度 Ω* 的三种算法
- 回波 CR 门误差随门长度的变化
- CSFQ 微扰能谱与数值基准
- 结果输出为 CSV/JSON，并发扫描，结果顺序与调度无关

作者: ZZFree Team
版本: 1.0.0
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from circuit_hamiltonian import CircuitParams
from config import Config, RunConfig, apply_axis
from cr_gate import CrossResonanceModel, cancellation_amplitude, eta_sweep, omega_star_sweep
from device_library import FIGURES, PRESETS, figure_config, figure_help, preset
from effective_theory import static_zz_effective, static_zz_perturbative
from error_handler import ConfigurationError, ErrorHandler
from exact_diagonalization import static_zz_exact, zz_free_boundary
from gate_error import PI_PULSE_NS, gate_error_curve, gate_length_cutoff
from logger import Logger, get_logger, timed
from qubit_models import CSFQSpec, csfq_numeric_spectrum, csfq_optimize_xi, csfq_perturbative_spectrum
from sweep_executor import SweepExecutor
from table_writer import ResultWriter

logger = get_logger('cli')

AXIS_UNITS = {'detuning': 'GHz', 'delta1': 'GHz', 'g1c': 'MHz', 'g2c': 'MHz', 'g12': 'MHz', 'amplitude': 'MHz'}
OMEGA_STAR_METHODS = ('la', 'on', 'formula')
ZZ_MODELS = {'circuit': lambda spec: static_zz_exact(spec, warn=False), 'effective': static_zz_effective}

Rows = List[Dict[str, Any]]
Curves = Tuple[Tuple[str, CircuitParams], ...]


def axis_column(axis: str) -> str:
    return f'{axis}_{AXIS_UNITS[axis]}'


def _axis_value(params: CircuitParams, axis: str) -> float:
    if axis == 'detuning':
        return params.detuning
    if axis == 'delta1':
        return params.delta1
    return getattr(params, axis) * 1000


def _mhz(value: Optional[float]) -> Optional[float]:
    return None if value is None else value * 1e3


def _khz(value: Optional[float]) -> Optional[float]:
    return None if value is None else value * 1e6


class ZZFree:
    """ZZFree主类 - 各子命令的计算入口"""

    def __init__(self, config: Config):
        """初始化ZZFree

        Args:
            config: 配置对象
        """
        self.config = config
        self.executor = SweepExecutor(config)

    def with_truncation(self, params: CircuitParams) -> CircuitParams:
        return replace(params, truncation=tuple(self.config.truncation))

    def resolve_source(self, run_config: Optional[RunConfig] = None, device: Optional[int] = None,
                       figure: Optional[str] = None) -> Tuple[Curves, str, np.ndarray]:
        """
        解析参数来源：运行文件、基准器件或研究图

        Returns:
            (曲线列表, 扫描轴, 轴上取值)
        """
        if run_config is not None:
            params = run_config.circuit_params()
            axis = run_config.sweep['axis']
            if axis == 'amplitude':
                raise ConfigurationError("该命令不支持 amplitude 扫描轴")
            if run_config.sweep['start'] is None:
                values = np.array([_axis_value(params, axis)])
            else:
                values = run_config.sweep_values()
            return (('config', params),), axis, values
        if device is not None:
            item = preset(device)
            return ((f'device{item.id}', self.with_truncation(item.to_params())),), 'detuning', \
                np.array([item.detuning])
        if figure is not None:
            fig = figure_config(figure)
            curves = tuple((label, self.with_truncation(params)) for label, params in fig.curves())
            return curves, fig.axis, fig.values()
        raise ConfigurationError("需要指定 --config、--preset 或 --figure 之一")

    def _perturbative_zz(self, params: CircuitParams) -> float:
        return static_zz_perturbative(params.build(), eps_div=self.config.eps_div)

    def _effective_zz(self, params: CircuitParams) -> float:
        return static_zz_effective(params.build(), eps_div=self.config.eps_div)

    def static_zz(self, curves: Curves, axis: str, values: Sequence[float]) -> Tuple[Rows, List[str]]:
        """静态 ZZ 扫描：完整电路精确、比特-比特有效模型与微扰三列"""
        columns = ['series', axis_column(axis), 'zeta_exact_kHz', 'zeta_effective_kHz', 'zeta_pert_kHz']
        rows = []
        for label, params in curves:
            points = [apply_axis(params, axis, value) for value in values]
            exact = self.executor.map(lambda p: static_zz_exact(p.build(), warn=False), points, strict=True)
            effective = self.executor.map(self._effective_zz, points)
            perturbative = self.executor.map(self._perturbative_zz, points)
            for value, zeta, zeta_eff, zeta_pert in zip(values, exact, effective, perturbative):
                rows.append({'series': label, axis_column(axis): float(value), 'zeta_exact_kHz': _khz(zeta),
                             'zeta_effective_kHz': _khz(zeta_eff), 'zeta_pert_kHz': _khz(zeta_pert)})
        return rows, columns

    def boundary(self, figure: str, zz_model: str = 'circuit') -> Tuple[Rows, List[str]]:
        """沿每条 δ1 扫描线的 ZZ 零点，zz_model 为 circuit（完整电路精确对角化）或 effective（比特-比特有效模型）"""
        fig = figure_config(figure)
        if fig.axis != 'detuning':
            raise ConfigurationError(f"图 {figure} 不是沿失谐的扫描")
        curves = fig.curves()
        base = self.with_truncation(curves[0][1])
        if zz_model not in ZZ_MODELS:
            raise ConfigurationError(f"未知的 ZZ 模型: {zz_model}，可选 {', '.join(ZZ_MODELS)}")
        lines = zz_free_boundary(base, [params.delta1 for _, params in curves], fig.values(), self.config,
                                 zz_model=ZZ_MODELS[zz_model])
        rows = [{'delta1_GHz': line.delta1, 'detuning_GHz': root, 'zz_model': zz_model}
                for line in lines for root in line.roots]
        return rows, ['delta1_GHz', 'detuning_GHz', 'zz_model']

    def cr_sweep(self, params: CircuitParams, amplitudes: Sequence[float], methods: Sequence[str],
                 physical: bool = False) -> Tuple[Rows, List[str]]:
        """
        CR 幅度扫描

        Args:
            params: 器件参数
            amplitudes: 驱动幅度 (GHz)
            methods: 约化方法
            physical: 驱动矩阵元是否带 √(n+1)

        Returns:
            (行, 列)
        """
        columns = ['method', 'omega_MHz', 'alpha_zx_MHz', 'alpha_zz_kHz', 'alpha_ix_MHz']
        rows = []
        spec = params.build()
        for method in methods:
            model = CrossResonanceModel(spec, method=method, physical_drive=physical)
            results = self.executor.map(model.coefficients, list(amplitudes))
            for amplitude, coefficients in zip(amplitudes, results):
                if coefficients is None:
                    continue
                rows.append({'method': method, 'omega_MHz': amplitude * 1e3, 'alpha_zx_MHz': coefficients.zx * 1e3,
                             'alpha_zz_kHz': coefficients.zz * 1e6, 'alpha_ix_MHz': coefficients.ix * 1e3})
        return rows, columns

    def cancel_amp(self, devices: Sequence[int], methods: Sequence[str]) -> Tuple[Rows, List[str]]:
        """基准器件的 Ω*，不存在时为 none"""
        jobs = [(device, method) for device in devices for method in methods]

        def job(item):
            device, method = item
            spec = self.with_truncation(preset(device).to_params()).build()
            return cancellation_amplitude(spec, method=method)

        results = self.executor.map(job, jobs, strict=True)
        rows = [{'device': device, 'method': method, 'omega_star_MHz': _mhz(value)}
                for (device, method), value in zip(jobs, results)]
        return rows, ['device', 'method', 'omega_star_MHz']

    def gate_error(self, device: int, amplitudes: Sequence[float], zz_during_pi: bool = True,
                   pi_pulse: float = PI_PULSE_NS) -> Tuple[Rows, List[str]]:
        """回波 CR 门误差随门长度的变化"""
        spec = self.with_truncation(preset(device).to_params()).build()
        model = CrossResonanceModel(spec)
        points = gate_error_curve(model, amplitudes, zz_during_pi, pi_pulse, self.config)
        if points:
            cutoff = gate_length_cutoff(model, [p.amplitude for p in points], pi_pulse)
            logger.info(f"器件 {device} 的最短门长度约 {cutoff:.1f} ns")
        columns = ['omega_MHz', 'alpha_zx_MHz', 'alpha_zz_kHz', 'tau_ns', 'gate_length_ns', 'error', 'zz_during_pi']
        rows = [{'omega_MHz': p.amplitude * 1e3, 'alpha_zx_MHz': p.alpha_zx * 1e3, 'alpha_zz_kHz': p.alpha_zz * 1e6,
                 'tau_ns': p.tau, 'gate_length_ns': p.gate_length, 'error': p.error,
                 'zz_during_pi': zz_during_pi} for p in points]
        return rows, columns

    def csfq(self, spec: CSFQSpec, fluxes: Sequence[float], xi: Optional[float] = None) -> Tuple[Rows, List[str]]:
        """CSFQ 微扰能谱与数值基准"""
        columns = ['flux', 'xi', 'f01_pert_GHz', 'delta_pert_GHz', 'f01_numeric_GHz', 'delta_numeric_GHz']
        rows = []
        for flux in fluxes:
            point = replace(spec, flux=float(flux))
            point_xi = xi if xi is not None else csfq_optimize_xi(point)
            perturbative = csfq_perturbative_spectrum(point, point_xi)
            numeric = csfq_numeric_spectrum(point)
            rows.append({'flux': float(flux), 'xi': point_xi,
                         'f01_pert_GHz': perturbative.frequency, 'delta_pert_GHz': perturbative.anharmonicity,
                         'f01_numeric_GHz': numeric.frequency, 'delta_numeric_GHz': numeric.anharmonicity})
        return rows, columns

    def eta(self, curves: Curves, detunings: Sequence[float], method: str) -> Tuple[Rows, List[str]]:
        """η 随失谐的变化"""
        rows = []
        for label, params in curves:
            values = eta_sweep(params, detunings, method, self.config)
            rows.extend({'series': label, 'detuning_GHz': float(d), 'eta_per_GHz': value, 'method': method}
                        for d, value in zip(detunings, values))
        return rows, ['series', 'detuning_GHz', 'eta_per_GHz', 'method']

    def omega_star(self, curves: Curves, detunings: Sequence[float], method: str) -> Tuple[Rows, List[str]]:
        """Ω* 随失谐的变化"""
        rows = []
        for label, params in curves:
            values = omega_star_sweep(params, detunings, method, self.config)
            rows.extend({'series': label, 'detuning_GHz': float(d), 'omega_star_MHz': _mhz(value), 'method': method}
                        for d, value in zip(detunings, values))
        return rows, ['series', 'detuning_GHz', 'omega_star_MHz', 'method']


def _amplitude_grid(omega_max: float, step: float, start: float = 0.0) -> np.ndarray:
    """MHz 网格转换为 GHz"""
    if step <= 0 or omega_max < start:
        raise ConfigurationError(f"驱动幅度网格非法: 上限 {omega_max} MHz, 步长 {step} MHz")
    return np.arange(start, omega_max + step / 2, step) / 1000


def _add_source_arguments(parser: argparse.ArgumentParser, default_figure: Optional[str] = None):
    group = parser.add_mutually_exclusive_group()
    group.add_argument('--config', type=Path, help='YAML 运行文件')
    group.add_argument('--preset', type=int, choices=sorted(PRESETS), help='基准器件编号')
    group.add_argument('--figure', choices=sorted(FIGURES), default=default_figure,
                       help=f'研究图配置，见主命令帮助的列表（默认: {default_figure}）' if default_figure
                       else '研究图配置，见主命令帮助的列表')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='ZZFree - 超导量子比特 ZZ 相互作用分析工具',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
研究图配置:
{figure_help()}

使用示例:
  python zzfree.py static-zz --figure zz_ct          # CSFQ-transmon 静态 ZZ 随失谐变化
  python zzfree.py boundary --figure zz_map_ct       # ZZ 零点边界
  python zzfree.py cr-sweep --preset 2 --omega-max 150    # CR 幅度扫描
  python zzfree.py cancel-amp --preset 1 --method la      # 动态 ZZ 消除幅度
  python zzfree.py -o out.json --format json gate-error --preset 2
  python zzfree.py csfq --ec 0.292 --ej 108.9 --alpha 0.43 --flux 0.5

退出码: 0 成功, 2 配置或参数错误, 3 数值保护 (发散/简并/收敛/区间)
        """
    )
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], default='WARNING',
                        help='日志级别（默认: WARNING）')
    parser.add_argument('--log-dir', type=Path, help='日志目录（默认只输出到标准错误）')
    parser.add_argument('--threads', type=int, help='并发线程数（默认: 环境变量 ZZFREE_THREADS 或 CPU 数）')
    parser.add_argument('--output', '-o', type=Path, help='结果文件（默认: 标准输出）')
    parser.add_argument('--format', choices=['csv', 'json'], help='输出格式（默认: csv）')
    parser.add_argument('--truncation', type=int, nargs=3, default=[5, 5, 5], metavar=('N1', 'NC', 'N2'),
                        help='基准器件与研究图的截断（默认: 5 5 5）')

    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('static-zz', help='静态 ZZ：精确对角化与微扰理论')
    _add_source_arguments(p)

    p = sub.add_parser('boundary', help='ZZ 零点边界')
    p.add_argument('--figure', choices=['zz_map_ct'], default='zz_map_ct', help='研究图配置（默认: zz_map_ct）')
    p.add_argument('--zz-model', choices=sorted(ZZ_MODELS), default='circuit',
                   help='ζ 的来源: circuit 为完整电路精确对角化, effective 为比特-比特有效模型（默认: circuit）')

    p = sub.add_parser('cr-sweep', help='CR 幅度扫描')
    _add_source_arguments(p)
    p.add_argument('--omega-max', type=float, default=150.0, help='最大驱动幅度 MHz（默认: 150）')
    p.add_argument('--omega-step', type=float, default=5.0, help='幅度步长 MHz（默认: 5）')
    p.add_argument('--method', choices=['LA', 'SW', 'both'], default='both', help='块约化方法（默认: both）')
    p.add_argument('--physical-drive', action='store_true', help='驱动矩阵元带 √(n+1)')

    p = sub.add_parser('cancel-amp', help='动态 ZZ 消除幅度 Ω*')
    p.add_argument('--preset', type=int, nargs='*', choices=sorted(PRESETS), help='基准器件编号（默认: 全部）')
    p.add_argument('--method', choices=list(OMEGA_STAR_METHODS) + ['all'], default='la', help='算法（默认: la）')

    p = sub.add_parser('gate-error', help='回波 CR 门误差')
    p.add_argument('--preset', type=int, required=True, choices=sorted(PRESETS), help='基准器件编号')
    p.add_argument('--omega-max', type=float, default=150.0, help='最大驱动幅度 MHz（默认: 150）')
    p.add_argument('--omega-step', type=float, default=1.0, help='幅度步长 MHz（默认: 1）')
    p.add_argument('--pi-pulse', type=float, default=PI_PULSE_NS, help='π 脉冲时长 ns（默认: 40）')
    p.add_argument('--no-zz-during-pi', dest='zz_during_pi', action='store_false',
                   help='π 脉冲期间不演化静态 ZZ（默认演化）')

    p = sub.add_parser('csfq', help='CSFQ 微扰能谱与数值基准')
    p.add_argument('--ec', type=float, default=0.292, help='充电能 E_C GHz（默认: 0.292）')
    p.add_argument('--ej', type=float, default=108.9, help='约瑟夫森能 E_J GHz（默认: 108.9）')
    p.add_argument('--alpha', type=float, default=0.43, help='小结面积比 α（默认: 0.43）')
    p.add_argument('--flux', type=float, nargs='+', default=[0.5], help='外磁通 f（默认: 0.5）')
    p.add_argument('--xi', type=float, help='固定 ξ（默认: 逐点优化）')

    p = sub.add_parser('eta', help='η 随失谐的变化')
    _add_source_arguments(p, default_figure='eta_ct')
    p.add_argument('--method', choices=['LA', 'SW'], default='LA', help='块约化方法（默认: LA）')

    p = sub.add_parser('omega-star', help='Ω* 随失谐的变化')
    _add_source_arguments(p, default_figure='omega_star_ct')
    p.add_argument('--method', choices=list(OMEGA_STAR_METHODS), default='la', help='算法（默认: la）')

    return parser


def run_command(app: ZZFree, args: argparse.Namespace,
                run_config: Optional[RunConfig] = None) -> Tuple[Rows, List[str]]:
    """按子命令分派，返回 (行, 列)"""
    figure = getattr(args, 'figure', None)
    device = getattr(args, 'preset', None)

    if args.command == 'static-zz':
        if run_config is None and device is None and figure is None:
            figure = 'zz_ct'
        return app.static_zz(*app.resolve_source(run_config, device, figure))

    if args.command == 'boundary':
        return app.boundary(args.figure, args.zz_model)

    if args.command == 'cr-sweep':
        methods = ['LA', 'SW'] if args.method == 'both' else [args.method]
        amplitudes = _amplitude_grid(args.omega_max, args.omega_step)
        physical = args.physical_drive
        if run_config is not None:
            params = run_config.circuit_params()
            if run_config.drive['amplitudes']:
                amplitudes = np.asarray(run_config.drive_amplitudes())
            methods = [run_config.drive['method']] if args.method == 'both' else methods
            physical = physical or bool(run_config.drive['physical'])
        elif device is not None:
            params = app.with_truncation(preset(device).to_params())
        else:
            fig = figure_config(figure or 'cr_ct')
            params = app.with_truncation(fig.params)
            if fig.axis == 'amplitude':
                amplitudes = fig.values() / 1000
        return app.cr_sweep(params, amplitudes, methods, physical)

    if args.command == 'cancel-amp':
        devices = args.preset or sorted(PRESETS)
        methods = list(OMEGA_STAR_METHODS) if args.method == 'all' else [args.method]
        return app.cancel_amp(devices, methods)

    if args.command == 'gate-error':
        return app.gate_error(args.preset, _amplitude_grid(args.omega_max, args.omega_step, args.omega_step),
                              args.zz_during_pi, args.pi_pulse)

    if args.command == 'csfq':
        spec = CSFQSpec(charging_energy=args.ec, josephson_energy=args.ej, alpha=args.alpha)
        return app.csfq(spec, args.flux, args.xi)

    if args.command in ('eta', 'omega-star'):
        if device is not None:
            figure = None
        curves, axis, values = app.resolve_source(run_config, device, figure)
        if axis != 'detuning':
            raise ConfigurationError(f"{args.command} 只支持沿失谐扫描，当前扫描轴 {axis}")
        if args.command == 'eta':
            return app.eta(curves, values, args.method)
        return app.omega_star(curves, values, args.method)

    raise ConfigurationError(f"未知命令: {args.command}")


def main():
    """主函数"""
    parser = build_parser()
    args = parser.parse_args()
    error_handler = ErrorHandler(logger)

    try:
        run_config = RunConfig.load(args.config) if getattr(args, 'config', None) else None
        output_path, output_format = args.output, args.format
        if run_config is not None:
            output_path = output_path or run_config.output['path']
            output_format = output_format or run_config.output['format']

        config = Config(
            threads=args.threads,
            log_level=args.log_level,
            log_dir=args.log_dir,
            output_path=output_path,
            output_format=output_format or 'csv',
            truncation=tuple(args.truncation),
        )
        Logger.from_config(config)
        logger.info(f"ZZFree启动 - 命令: {args.command}, 线程数: {config.threads}")

        app = ZZFree(config)
        with timed(args.command, logger):
            rows, columns = run_command(app, args, run_config)
        ResultWriter(config).write(rows, columns)

        failed = app.executor.get_failed_points()
        if failed:
            logger.warning(f"{len(failed)} 个网格点计算失败，结果中记为 none")

    except KeyboardInterrupt:
        print("\n用户中断执行", file=sys.stderr)
        sys.exit(1)
    except Exception as e:
        error_handler.handle_error(e, args.command)
        print(ErrorHandler.user_message(e), file=sys.stderr)
        sys.exit(ErrorHandler.exit_code(e))


if __name__ == '__main__':
    main()
