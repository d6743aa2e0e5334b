"""Resource limits, overridable through ``REPST_*`` environment variables."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    return int(raw)


@dataclass(frozen=True)
class Limits:
    enumeration: int = 12  # largest ground set for partition enumeration
    max_points: int = 64  # largest ground set a SetPartition may have
    hom_basis: int = 4140  # Bell(8): cap on materialized diagram bases
    distinct: int = 5  # largest k for the distinct-index idempotent
    fiber_entries: int = 1_000_000  # cap on n**(a+b) for fiber matrices
    algebra_dim: int = 300  # cap on equivariant algebra dimension
    subgroup_degree: int = 6  # exhaustive subgroup enumeration
    overgroup_degree: int = 7  # contains-times search
    sign_degree: int = 8
    embedding_attempts: int = 3  # random candidates per level in level search

    @classmethod
    def from_env(cls) -> "Limits":
        base = cls()
        return cls(
            enumeration=_env_int("REPST_ENUM_LIMIT", base.enumeration),
            max_points=_env_int("REPST_MAX_POINTS", base.max_points),
            hom_basis=_env_int("REPST_HOM_LIMIT", base.hom_basis),
            distinct=_env_int("REPST_DISTINCT_LIMIT", base.distinct),
            fiber_entries=_env_int("REPST_FIBER_BUDGET", base.fiber_entries),
            algebra_dim=_env_int("REPST_ALGEBRA_DIM", base.algebra_dim),
            subgroup_degree=_env_int("REPST_SUBGROUP_DEGREE", base.subgroup_degree),
            overgroup_degree=_env_int("REPST_OVERGROUP_DEGREE", base.overgroup_degree),
            sign_degree=_env_int("REPST_SIGN_DEGREE", base.sign_degree),
            embedding_attempts=_env_int("REPST_EMBED_ATTEMPTS", base.embedding_attempts),
        )

    def as_dict(self) -> dict:
        return asdict(self)


LIMITS = Limits.from_env()
