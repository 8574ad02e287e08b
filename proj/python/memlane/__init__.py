"""Segmented array layouts, memory-controller aliasing analysis and
layout-aware bandwidth kernels."""

from memlane._core import (  # noqa: F401
    AddressMapModel,
    BalanceScore,
    BenchConfig,
    BenchRecord,
    KernelDescriptor,
    LayoutParams,
    LayoutPlan,
    RecipeReport,
    SweepSeries,
    TrafficModel,
    align_up,
    build_layout,
    descriptor,
    detect_period_bytes,
    partition,
    predicted_performance,
    recipe_check,
    run,
    sweep,
    thrashing_candidate,
    to_csv,
    traffic_model,
)

__all__ = [
    "AddressMapModel",
    "BalanceScore",
    "BenchConfig",
    "BenchRecord",
    "KernelDescriptor",
    "LayoutParams",
    "LayoutPlan",
    "RecipeReport",
    "SweepSeries",
    "TrafficModel",
    "align_up",
    "build_layout",
    "descriptor",
    "detect_period_bytes",
    "partition",
    "predicted_performance",
    "recipe_check",
    "run",
    "sweep",
    "thrashing_candidate",
    "to_csv",
    "traffic_model",
]
