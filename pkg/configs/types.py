from typing import Literal


ScannerName = Literal[
    "scan",
    "queue",
    "brute",
]

BaselineMode = Literal["h", "b"]

WrapMode = Literal["hash", "identity"]

PhaseName = Literal[
    "partition",
    "map",
    "merge",
    "edges",
]

PHASE_ORDER: tuple[PhaseName, ...] = ("partition", "map", "merge", "edges")
