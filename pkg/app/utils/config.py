import os

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Project Information (Static)
    PROJECT_NAME: str = "netfactor"
    DESCRIPTION: str = (
        "netfactor - network embedding by joint explicit factorization of random-walk "
        "co-occurrences and node content."
    )
    VERSION: str = "0.1.0"

    # Debugging Settings
    RUN_MAIN: bool = False
    DEBUG_MODE: bool = False
    DEBUG_PORT: int = 5678
    DEBUG_WAIT_FOR_CLIENT: bool = False

    # Logging
    LOG_LEVEL: str = "INFO"

    # Worker threads inside a stage (None -> all cores); never changes results
    THREADS: int | None = None

    # Dense |V| x |V| proximity matrices are refused above this many nodes
    DENSE_NODE_LIMIT: int = 20000

    # Node columns per materialized block of Q / E during factorization
    EMF_BLOCK_SIZE: int = 1024

    # Walks per RNG block; fixed so that results do not depend on THREADS
    WALK_BATCH_SIZE: int = 65536

    # Co-occurrence counting uses a dense bincount while |V|^2 stays below this
    BINCOUNT_CELL_LIMIT: int = 4_000_000

    # Power iteration for spectral norms
    SPECTRAL_MAX_ITER: int = 1000
    SPECTRAL_TOL: float = 1e-10

    @property
    def WORKERS(self) -> int:  # pylint: disable=C0103:invalid-name
        """Resolves the worker count used by thread pools."""
        return self.THREADS or os.cpu_count() or 1

    class Config:
        env_file = ".env"
        env_prefix = "NETFACTOR_"
        extra = "ignore"  # Prevents unexpected environment variables from causing errors


# Instantiate settings from environment variables
settings = Settings()
