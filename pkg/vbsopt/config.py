import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseModel):
    max_joint: int = Field(default=2**24, alias="VBS_MAX_JOINT", gt=0)
    max_optima: int = Field(default=1024, alias="VBS_MAX_OPTIMA", gt=0)
    log_level: str = Field(default="WARNING", alias="VBS_LOG_LEVEL")

    model_config = {"populate_by_name": True, "extra": "ignore"}

    @field_validator("log_level")
    @classmethod
    def known_level(cls, value: str) -> str:
        level = value.strip().upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"log level must be one of {', '.join(LOG_LEVELS)}")
        return level


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    dotenv_path = os.path.join(os.path.dirname(__file__), "..", ".env")
    load_dotenv(dotenv_path=dotenv_path, override=False)
    return Settings(**os.environ)
