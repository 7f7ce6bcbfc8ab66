import logging
import time
import uuid
from contextlib import contextmanager
from typing import Iterator

logger = logging.getLogger(__name__)


class InvocationContext:
    """一次命令调用的上下文"""

    def __init__(self, command: str):
        self.run_id = str(uuid.uuid4())
        self.command = command
        self.start_time = time.perf_counter()
        self.extra: dict = {}

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start_time


@contextmanager
def log_invocation(command: str, **extra) -> Iterator[InvocationContext]:
    """记录调用开始、完成和异常，异常原样抛出"""
    ctx = InvocationContext(command)
    ctx.extra.update(extra)

    logger.info(
        "调用开始",
        extra={"run_id": ctx.run_id, "command": command, **ctx.extra}
    )

    try:
        yield ctx

        logger.info(
            "调用完成",
            extra={
                "run_id": ctx.run_id,
                "command": command,
                "process_time": f"{ctx.elapsed:.3f}s",
                **ctx.extra,
            }
        )

    except Exception as e:
        logger.error(
            "调用异常",
            extra={
                "run_id": ctx.run_id,
                "command": command,
                "error": str(e),
                "error_type": type(e).__name__,
                "process_time": f"{ctx.elapsed:.3f}s",
            },
            exc_info=logger.isEnabledFor(logging.DEBUG)
        )
        raise
