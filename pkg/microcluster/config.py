from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="MICROCLUSTER_",
        env_file=".env",
        env_file_encoding="utf-8",
    )

    log_level: str = "WARNING"
    workers: int = Field(default=1, ge=1)
    exact_max_qubits: int = Field(default=10, ge=1)
    float_max_qubits: int = Field(default=14, ge=1)
    default_alpha: float = Field(default=0.01, ge=0.0, le=0.5)
    default_p_grid: str = "0:0.05:11"
    float_digits: int = Field(default=12, ge=1, le=17)
    app_name: str = "microcluster"


settings = Settings()
