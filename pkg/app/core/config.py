from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file='.env', extra='ignore',
                                      case_sensitive=False,
                                      env_prefix="PMG_",
                                      env_file_encoding="utf-8")

    # 项目元数据
    APP_NAME: str = "pmgraph"
    APP_VERSION: str = "0.1.0"
    APP_DESCRIPTION: str = "Invariants of polarized metrized graphs"

    # 应用配置
    APP_ENV: Literal["dev", "pro", "test"] = "pro"
    DEBUG: bool = False

    # Logging
    LOG_LEVEL: str = "warning"
    LOG_TO_CONSOLE: bool = True
    LOG_TO_FILE: bool = False
    LOG_FILE_PATH: str = "logs"
    LOG_FILE_MAX_BYTES: int = 10485760  # 10MB
    LOG_FILE_BACKUP_COUNT: int = 10
    LOG_FORMAT: Literal["json", "text", "colored"] = "text"

    # 数值计算
    DEFAULT_MODE: Literal["exact", "bigfloat", "machine"] = "exact"
    DEFAULT_DIGITS: int = Field(default=10, ge=1)
    BIGFLOAT_DIGITS: int = Field(default=30, ge=18)
    PENROSE_ATOL: float = 1e-10
    LOOP_STRATEGY: Literal["analytic", "subdivide"] = "analytic"
    PSEUDO_INVERSE_VARIANT: Literal["minus", "plus", "spd"] = "minus"


# 创建全局配置实例
settings = Settings()
