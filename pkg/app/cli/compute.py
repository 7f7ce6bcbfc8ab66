import logging
from pathlib import Path

import click

from app.cli.options import compute_options, handle_errors, run_compute
from app.core.exceptions import ParseError
from app.services.documents import parse_graph

logger = logging.getLogger(__name__)


def read_graph(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"图文件不是 UTF-8 编码: {path}") from e
    return parse_graph(text)


@click.command("compute")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="JSON 图文件")
@compute_options
@handle_errors
def compute(input_path: Path, **options):
    """计算一个图文件的全部不变量"""
    graph = read_graph(input_path)
    logger.debug("读取图文件", extra={"path": str(input_path)})
    run_compute("compute", [(input_path.stem, graph)], **options)
