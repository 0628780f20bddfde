import logging
from typing import Optional
from pydantic import Field, validator
from pydantic_settings import BaseSettings
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    """Library and CLI settings. Every field can be overridden with a UOG_-prefixed variable."""

    # Development vs Production
    environment: str = Field(default="development", description="Environment: development/test/production")
    debug: bool = Field(default=False, description="Debug mode")

    # Logging
    log_level: str = Field(default="INFO", description="Logging level")
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log format"
    )

    # Number theory
    miller_rabin_rounds: int = Field(
        default=64,
        description="Miller-Rabin rounds for probable-prime tests (64 rounds keeps error below 2^-128)"
    )

    # Feature flags
    enable_known_order_groups: Optional[bool] = Field(
        default=None,
        description="Allow test-only known-order groups (zmulN). Unset means: allowed outside production"
    )
    enable_divisor_compression: bool = Field(
        default=True,
        description="Enable the compact Jacobian divisor codec"
    )

    # Desk-scale oracles
    order_oracle_max_prime: int = Field(default=2 ** 13, description="Largest p accepted by the zeta order oracle")
    order_oracle_workers: int = Field(default=1, description="Threads used for point counting chunks")
    class_enumeration_max_disc: int = Field(default=10 ** 7, description="Largest |D| accepted by class group enumeration")

    # Generation
    gen_max_iterations: int = Field(default=10 ** 4, description="Bail-out bound for the curve rejection loop")

    # Order hunting
    hunt_memory_cap: int = Field(default=2 ** 22, description="Maximum baby-step table entries")
    hunt_default_budget: int = Field(default=2 ** 32, description="Default group-operation budget for hunts")
    hunt_negation_default: bool = Field(default=False, description="Use the negation trick in baby-step tables")

    # Semismoothness Monte Carlo
    semismooth_max_bits: int = Field(default=96, description="Largest sample size in bits")
    semismooth_trial_bound: int = Field(default=10 ** 6, description="Trial division bound before Pollard rho")
    semismooth_rho_max_steps: int = Field(default=2 ** 20, description="Pollard rho iteration cap per attempt")
    semismooth_workers: int = Field(default=1, description="Worker processes for independent trials")

    # Proof of exponentiation
    poe_lambda: int = Field(default=128, description="Challenge prime size in bits")
    jacobian_cofactor_bound: int = Field(default=60, description="Cofactor bound S = lcm(1..bound) for Jacobians")

    class Config:
        env_prefix = "UOG_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False

    @property
    def is_production(self) -> bool:
        """Check if running in production environment."""
        return self.environment.lower() == "production"

    @property
    def known_order_groups_allowed(self) -> bool:
        """Test-only groups are off in production unless explicitly enabled."""
        if self.enable_known_order_groups is None:
            return not self.is_production
        return self.enable_known_order_groups

    @validator('log_level')
    def validate_log_level(cls, v):
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f'Unknown log level: {v}')
        return level

    @validator('miller_rabin_rounds')
    def validate_rounds(cls, v):
        if v < 32:
            raise ValueError('At least 32 Miller-Rabin rounds are required')
        return v

    @validator('order_oracle_max_prime', 'class_enumeration_max_disc', 'gen_max_iterations',
               'hunt_memory_cap', 'hunt_default_budget', 'semismooth_trial_bound',
               'semismooth_rho_max_steps', 'order_oracle_workers', 'semismooth_workers',
               'jacobian_cofactor_bound')
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError('Bounds and worker counts must be positive')
        return v


# Global settings instance
settings = Settings()


def validate_configuration() -> tuple[bool, list[str]]:
    """Validate application configuration and return status with errors."""
    errors = []

    if settings.semismooth_max_bits > 128:
        errors.append("UOG_SEMISMOOTH_MAX_BITS above 128 makes factorization impractical")

    if settings.poe_lambda < 16:
        errors.append("UOG_POE_LAMBDA must be at least 16")

    if settings.is_production and settings.enable_known_order_groups:
        errors.append("Known-order test groups must not be enabled in production")

    if settings.order_oracle_max_prime > 2 ** 13:
        logging.getLogger(__name__).warning(
            f"⚠️ Order oracle bound {settings.order_oracle_max_prime} exceeds desk scale; enumeration cost grows as p^3"
        )

    return len(errors) == 0, errors


def configuration_summary() -> list[str]:
    """Configuration summary lines for debug logging."""
    return [
        f"Environment: {settings.environment}",
        f"Debug mode: {settings.debug}",
        f"Log level: {settings.log_level}",
        f"Miller-Rabin rounds: {settings.miller_rabin_rounds}",
        f"Known-order groups allowed: {settings.known_order_groups_allowed}",
        f"Divisor compression: {settings.enable_divisor_compression}",
        f"Hunt memory cap: {settings.hunt_memory_cap} entries",
        f"Semismooth workers: {settings.semismooth_workers}",
    ]
