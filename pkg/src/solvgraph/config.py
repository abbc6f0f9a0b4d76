"""Run configuration shared by the engine, the verifier, and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    """Engine limits and seeds.  All limits must be positive."""

    guard: int = 2000
    independence_exact_limit: int = 150
    k44_budget: int = 10_000_000
    audit_fraction: float = 0.1
    seed: int = 12345
    jobs: int = 1
    output_format: str = "json"
    cache_dir: str | None = None

    def __post_init__(self):
        for name in ("guard", "independence_exact_limit", "k44_budget", "jobs"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.audit_fraction <= 1.0:
            raise ValueError("audit_fraction must lie in [0, 1]")

    def params_json(self) -> dict:
        return {
            "guard": int(self.guard),
            "independence-exact-limit": int(self.independence_exact_limit),
            "k44-budget": int(self.k44_budget),
            "audit-fraction": self.audit_fraction,
            "seed": int(self.seed),
            "jobs": int(self.jobs),
        }
