"""Scanner factory keyed by the CLI scanner name."""

from configs.types import ScannerName
from msp.base import BaseScanner
from msp.errors import InvalidArgumentError
from msp.minimizer import BruteScanner, QueueScanner, SimpleScanner

SCANNERS: dict[str, type[BaseScanner]] = {
    SimpleScanner.name: SimpleScanner,
    QueueScanner.name: QueueScanner,
    BruteScanner.name: BruteScanner,
}


def create_scanner(name: ScannerName, k: int, p: int, rc_mode: bool = False) -> BaseScanner:
    """
    Create a scanner by name.

    Args:
        name: "scan", "queue" or "brute"
        k: k-mer length
        p: minimizer length
        rc_mode: strand-invariant minimizers

    Returns:
        Configured scanner instance
    """
    try:
        scanner_cls = SCANNERS[name]
    except KeyError:
        raise InvalidArgumentError(f"unknown scanner {name!r}; choose from {sorted(SCANNERS)}") from None
    return scanner_cls(k, p, rc_mode)
