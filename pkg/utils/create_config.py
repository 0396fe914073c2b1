import argparse
from pathlib import Path

from configs.config import (
    DEFAULT_K,
    DEFAULT_MEMORY_BUDGET,
    DEFAULT_P,
    DEFAULT_RC_MODE,
    DEFAULT_SCANNER,
    DEFAULT_SEED,
    DEFAULT_T,
    DEFAULT_THREADS,
    DEFAULT_WORKDIR,
    DEFAULT_WRAP,
)
from configs.run_models import BaselineConfig, PartitionConfig
from msp.errors import InvalidArgumentError


def _flag(args: argparse.Namespace, name: str, default):
    value = getattr(args, name, None)
    return default if value is None else value


def _common_fields(args: argparse.Namespace) -> dict:
    return {
        "k": _flag(args, "k", DEFAULT_K),
        "p": _flag(args, "p", DEFAULT_P),
        "t": _flag(args, "t", DEFAULT_T),
        "rc_mode": _flag(args, "rc", DEFAULT_RC_MODE),
        "wrap": _flag(args, "wrap", DEFAULT_WRAP),
        "scanner": _flag(args, "scanner", DEFAULT_SCANNER),
        "work_dir": Path(_flag(args, "workdir", DEFAULT_WORKDIR)),
        "memory_budget": _flag(args, "mem", DEFAULT_MEMORY_BUDGET),
        "seed": _flag(args, "seed", DEFAULT_SEED),
        "threads": _flag(args, "threads", DEFAULT_THREADS),
    }


def create_partition_config(args: argparse.Namespace) -> PartitionConfig:
    """CLI flags win over environment defaults; validation errors surface as InvalidArgumentError."""
    try:
        return PartitionConfig(**_common_fields(args))
    except ValueError as e:
        raise InvalidArgumentError(str(e)) from e


def create_baseline_config(args: argparse.Namespace) -> BaselineConfig:
    try:
        return BaselineConfig(
            **_common_fields(args),
            mode=args.mode,
            suffix_symbols=getattr(args, "suffix_symbols", None),
        )
    except ValueError as e:
        raise InvalidArgumentError(str(e)) from e


def parse_size(text: str) -> int:
    """Byte count with an optional K/M/G suffix (powers of 1024)."""
    units = {"K": 1024, "M": 1024**2, "G": 1024**3}
    text = text.strip().upper().removesuffix("B")
    if text and text[-1] in units:
        return int(float(text[:-1]) * units[text[-1]])
    return int(text)
