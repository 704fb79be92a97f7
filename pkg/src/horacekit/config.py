"""Run settings shared by the library entry points and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .field_linalg import DEFAULT_PRIME, SECOND_PRIME, PrimeModulus
from .hilbert import DEFAULT_TRIALS

ENV_PRIME = "HORACEKIT_PRIME"
ENV_CACHE = "HORACEKIT_CACHE"
DEFAULT_CACHE = ".horacekit-cache.jsonl"


@dataclass(frozen=True)
class RunConfig:
    """Prime, root seed and trial policy of a computation.

    ``certify_regular`` stops the trials of a query as soon as full rank is
    reached (full rank at one point certifies generic full rank); set it to
    False to always run ``trials`` placements.
    """

    prime: int = DEFAULT_PRIME
    seed: int = 0
    trials: int = DEFAULT_TRIALS
    certify_regular: bool = True
    cache_path: str = DEFAULT_CACHE
    use_cache: bool = True

    def __post_init__(self):
        PrimeModulus(self.prime)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    @property
    def modulus(self) -> PrimeModulus:
        return PrimeModulus(self.prime)

    def with_prime(self, prime: int) -> "RunConfig":
        return replace(self, prime=prime)

    def cross_check(self) -> "RunConfig":
        """Same settings over a second, independent prime."""
        return replace(self, prime=SECOND_PRIME if self.prime != SECOND_PRIME else DEFAULT_PRIME)

    @classmethod
    def from_env(cls, **overrides) -> "RunConfig":
        base = {}
        if os.environ.get(ENV_PRIME):
            base["prime"] = int(os.environ[ENV_PRIME], 0)
        if os.environ.get(ENV_CACHE):
            base["cache_path"] = os.environ[ENV_CACHE]
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**base)
