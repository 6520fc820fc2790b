"""
Configuration of the numerical defaults through environment (dotenv) variables.

Every field can be overridden by an environment variable or a ``.env`` file
entry prefixed with ``STOCKWELL_``, for example ``STOCKWELL_THREADS=4``.
Operations read ``settings`` only when the caller passes ``None`` for the
corresponding keyword.
"""

from typing import Literal

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """
    Numerical and runtime settings of the toolkit.

    Attributes:
        NAME: Name of the application, used for the CLI program name.
        LOG_LEVEL: Level of the root logger configured by the CLI.
        THREADS: Worker threads of the per-angle pool.
        S1_TOLERANCE: Relative tolerance of the S1 flatness test.
        S1_DELTA: Half width of the neighbourhood of xi = -1 that is inspected.
        ADMISSIBILITY_EPS: Half width of the excluded neighbourhood of xi = 0.
        ADMISSIBILITY_TOL: Absolute tolerance of the adaptive Simpson scheme,
            relative to a coarse estimate of the integral.
        ADMISSIBILITY_MIN: Admissibility constants below this modulus are rejected.
        WINDOW_SAMPLES: Length of the time and spectral tables of a window.
        WINDOW_NYQUIST: Half width of the spectral table; the time step is
            pi / WINDOW_NYQUIST.
        WINDOW_TAIL: Relative magnitude that defines the essential radius and
            the essential band of a window.
        SLICE_MODE: Default evaluation mode of Fourier slices.
        SLICE_PAD: Zero padding factor of the fast polar spectrum.
        RADON_ORDER: Spline order of the line sampling of radon_direct and
            sinogram, 1 for bilinear.
        RADON_ROUTE_ORDER: Spline order of the line sampling of the Radon
            route of the transform and of the slice harness.
        SYNTHESIS_PHASE_STEP: Largest phase advance per fine lattice sample
            used by the fast synthesis.
        DERIVATIVE_CAP: Largest total derivative order of a distribution term.
        PROBE_SEED: Seed of the random probe cell sampler.
        DECAY_GROWTH_LIMIT: Growth factor above which a decay estimate is flagged.
        REFERENCE_SIZE: Samples per side of the reference signal.
        REFERENCE_SPACING: Sample spacing of the reference signal.
        REFERENCE_RING_RADIUS: Spectral radius of the reference ring.
        REFERENCE_RING_WIDTH: Spectral width of the reference ring.
    """
    model_config = SettingsConfigDict(case_sensitive=True, env_prefix="STOCKWELL_")

    NAME: str = "stockwell"
    LOG_LEVEL: str = "INFO"
    THREADS: int = Field(default=1, ge=1)

    S1_TOLERANCE: float = Field(default=1e-10, gt=0)
    S1_DELTA: float = Field(default=0.1, gt=0)
    ADMISSIBILITY_EPS: float = Field(default=1e-6, gt=0)
    ADMISSIBILITY_TOL: float = Field(default=1e-13, gt=0)
    ADMISSIBILITY_MIN: float = Field(default=1e-12, gt=0)

    WINDOW_SAMPLES: int = Field(default=131072, ge=1024)
    WINDOW_NYQUIST: float = Field(default=128.0, gt=8)
    WINDOW_TAIL: float = Field(default=1e-12, gt=0)

    SLICE_MODE: Literal["fast", "direct"] = "fast"
    SLICE_PAD: int = Field(default=4, ge=1)
    RADON_ORDER: int = Field(default=1, ge=1, le=5)
    RADON_ROUTE_ORDER: int = Field(default=3, ge=1, le=5)
    SYNTHESIS_PHASE_STEP: float = Field(default=0.3, gt=0, le=1.0)
    DERIVATIVE_CAP: int = Field(default=4, ge=0)
    PROBE_SEED: int = 20240501
    DECAY_GROWTH_LIMIT: float = Field(default=1.05, gt=1)

    REFERENCE_SIZE: int = Field(default=128, ge=16)
    REFERENCE_SPACING: float = Field(default=0.15, gt=0)
    REFERENCE_RING_RADIUS: float = Field(default=2.5, gt=0)
    REFERENCE_RING_WIDTH: float = Field(default=0.5, gt=0)


settings = Settings()
