#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
aqsverify - 主程序入口
读取流形描述（文件、标准输入或内置例子），运行所选子命令并输出 JSON 报告
"""

import argparse
import logging
import os
import sys

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import APP_NAME, APP_VERSION, Config
from reports.report_runner import COMMANDS, ExitCode, ReportOptions, run_report
from reports.spec_parser import BUILTINS, builtin_spec, parse_spec
from utils.errors import SpecError
from utils.logger import get_logger

logger = get_logger()


def build_parser() -> argparse.ArgumentParser:
    """命令行参数"""
    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="反拟 Sasakian 几何的构造与验证：分类、曲率、谱、典范联络与分裂",
    )
    parser.add_argument('--version', action='version', version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest='command', required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"运行 {name} 检查" if name != 'report' else "运行全部检查")
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument('--spec', metavar='FILE', help="流形描述 JSON 文件，'-' 表示标准输入")
        source.add_argument('--builtin', choices=BUILTINS, help="内置例子")
        p.add_argument('--weights', nargs='+', metavar='W', help="Heisenberg 权重，如 1 2 或 1/2")
        p.add_argument('--c', dest='c', metavar='C', help="圆盘丛的全纯截面曲率 (< 0)")
        p.add_argument('--n', type=int, help="内置坐标片的 n")
        p.add_argument('--p', type=int, help="内置坐标片的 p")
        p.add_argument('--points', type=int, help="坐标片采样点数（默认 32）")
        p.add_argument('--seed', type=int, help="采样种子（默认 0）")
        p.add_argument('--tol', type=float, help="浮点判零容差（默认 1e-8）")
        p.add_argument('--out', metavar='FILE', help="报告输出文件（默认标准输出）")
        p.add_argument('--config', metavar='FILE', help="配置文件（默认数据目录下的 settings.json）")
        verbosity = p.add_mutually_exclusive_group()
        verbosity.add_argument('--verbose', '-v', action='store_true', help="输出调试日志")
        verbosity.add_argument('--quiet', '-q', action='store_true', help="只输出错误日志")
    return parser


def read_spec(args):
    """按 --spec 或 --builtin 得到 ManifoldSpec"""
    if args.spec is not None:
        if args.spec == '-':
            text = sys.stdin.read()
        else:
            try:
                with open(args.spec, 'r', encoding='utf-8') as f:
                    text = f.read()
            except OSError as e:
                raise SpecError(f"无法读取描述文件 {args.spec}: {e}") from e
        return parse_spec(text)
    return builtin_spec(args.builtin, args.weights, args.c, args.n, args.p)


def write_output(text: str, path):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    logger.info(f"报告已写入: {path}")


def main(argv=None) -> int:
    """主函数，返回退出码"""
    args = build_parser().parse_args(argv)
    if args.verbose:
        logger.set_console_level(logging.DEBUG)
    elif args.quiet:
        logger.set_console_level(logging.ERROR)
    try:
        config = Config()
        if args.config is not None:
            config.load_config(args.config)
        logger.set_log_config(config.log_config)
        try:
            config.override(args.tol, args.points, args.seed)
        except ValueError as e:
            raise SpecError(str(e)) from e

        spec = read_spec(args)
        options = ReportOptions.from_config(config, args.command)
        report = run_report(spec, options)
        write_output(report.to_json(options.float_digits), args.out)
        return int(report.exit_code)
    except SpecError as e:
        logger.error(f"描述错误: {e}")
        return int(ExitCode.SPEC_ERROR)
    except KeyboardInterrupt:
        logger.info("程序被用户中断")
        return int(ExitCode.MODULE_ERROR)
    except Exception as e:
        logger.error(f"程序运行失败: {e}")
        logger.exception("详细错误信息:")
        return int(ExitCode.MODULE_ERROR)


if __name__ == "__main__":
    sys.exit(main())
