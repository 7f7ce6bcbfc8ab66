"""命令行公共选项与计算执行"""
import functools
import logging
from pathlib import Path
from typing import Optional, Sequence, Tuple

import click
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import PMGraphError
from app.middleware.logging_middleware import log_invocation
from app.models.models import ModeKind, PMGraph, ScalarMode
from app.services.arithmetic import arithmetic_for
from app.services.invariants import compute_many
from app.services.report import emit_report

logger = logging.getLogger(__name__)


def handle_errors(func):
    """把业务异常转换为错误信息和退出码 (2 校验, 3 解析, 4 数值)"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except PMGraphError as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(e.exit_code)
        except ValidationError as e:
            click.echo(f"Error: 参数错误 - {e.errors()[0]['msg']}", err=True)
            ctx.exit(2)

    return wrapper


def compute_options(func):
    """compute 与 family 子命令共享的计算选项"""
    options = [
        click.option("--mode", type=click.Choice([m.value for m in ModeKind]),
                     default=None, help="算术模式 (默认取配置 DEFAULT_MODE)"),
        click.option("--digits", type=click.IntRange(min=1), default=None,
                     help="浮点模式输出的有效数字位数"),
        click.option("--precision", type=click.IntRange(min=18), default=None,
                     help="bigfloat 模式的工作精度 (十进制位数)"),
        click.option("--format", "report_format",
                     type=click.Choice(["json", "csv", "table"]),
                     default="table", show_default=True),
        click.option("--measures", is_flag=True,
                     help="同时输出 μ_can 与 μ_ad 的分解"),
        click.option("--loop-strategy",
                     type=click.Choice(["analytic", "subdivide"]),
                     default=None, help="自环处理方式"),
        click.option("--variant", type=click.Choice(["minus", "plus", "spd"]),
                     default=None, help="伪逆公式变体"),
        click.option("--tolerance",
                     type=click.FloatRange(min=0, min_open=True),
                     default=None,
                     help="浮点模式伪逆残差容差 (默认取配置 PENROSE_ATOL)"),
        click.option("--strict", is_flag=True,
                     help="浮点残差超限时以退出码 4 失败"),
        click.option("--output", type=click.Path(dir_okay=False,
                                                 path_type=Path),
                     default=None, help="报告写入文件而不是 stdout"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def resolve_mode(mode: Optional[str], precision: Optional[int]) -> ScalarMode:
    kind = ModeKind(mode or settings.DEFAULT_MODE)
    if kind == ModeKind.BIGFLOAT:
        return ScalarMode.bigfloat(precision or settings.BIGFLOAT_DIGITS)
    return ScalarMode(kind=kind)


def run_compute(command: str, graphs: Sequence[Tuple[str, PMGraph]],
                mode: Optional[str], digits: Optional[int],
                precision: Optional[int], report_format: str,
                measures: bool, loop_strategy: Optional[str],
                variant: Optional[str], strict: bool,
                output: Optional[Path], tolerance: Optional[float] = None,
                jobs: int = 1) -> None:
    scalar_mode = resolve_mode(mode, precision)
    digits = digits or settings.DEFAULT_DIGITS
    with log_invocation(command, mode=scalar_mode.kind.value,
                        graphs=len(graphs)):
        results = compute_many([g for _, g in graphs], scalar_mode,
                               jobs=jobs, loop_strategy=loop_strategy,
                               variant=variant, measures=measures,
                               strict=strict, tolerance=tolerance)
        rows = [(label, result) for (label, _), result in zip(graphs, results)]
        text = emit_report(rows, arithmetic_for(scalar_mode), report_format,
                           digits)

    if output is None:
        click.echo(text, nl=False)
    else:
        output.write_text(text, encoding="utf-8")
        logger.info("报告已写入", extra={"path": str(output)})
