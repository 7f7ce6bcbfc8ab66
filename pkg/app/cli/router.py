import logging

import click

from app.cli.check import check
from app.cli.compute import compute
from app.cli.family import family
from app.core.config import settings
from app.core.logger import setup_logging


@click.group(help=settings.APP_DESCRIPTION)
@click.version_option(settings.APP_VERSION, prog_name=settings.APP_NAME)
@click.option("--log-level",
              type=click.Choice(["debug", "info", "warning", "error"],
                                case_sensitive=False),
              default=None, help="覆盖配置中的 LOG_LEVEL")
@click.option("--log-format", type=click.Choice(["json", "text", "colored"]),
              default=None, help="覆盖配置中的 LOG_FORMAT")
def cli(log_level, log_format):
    setup_logging(level=log_level, log_format=log_format)
    logging.getLogger(__name__).debug(
        "命令行启动", extra={"env": settings.APP_ENV})


# 子命令
cli.add_command(compute)
cli.add_command(family)
cli.add_command(check)
