"""Run state management: work directory, manifest and phase bookkeeping."""

import logging
import resource
import time
from contextlib import asynccontextmanager
from pathlib import Path
from typing import AsyncIterator, Optional

from pydantic import BaseModel

from configs.run_models import PartitionConfig, RunManifest
from configs.types import PHASE_ORDER
from msp.errors import PhaseError
from utils.manifest import read_manifest, write_manifest
from utils.workdir_utils import ensure_work_dir, manifest_path

logger = logging.getLogger(__name__)

# Parameters a resumed run must share with the run that wrote the manifest
_ECHOED_FIELDS = ("k", "p", "t", "rc_mode", "wrap", "scanner")


def peak_rss_kb() -> int:
    """Best-effort peak resident set size of this process and its finished workers."""
    own = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    children = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss
    return int(max(own, children))


class RunState(BaseModel):
    """State of one pipeline run."""

    config: PartitionConfig
    manifest: RunManifest

    @property
    def work_dir(self) -> Path:
        return self.config.work_dir


class RunStateManager:
    """Manages the run state lifecycle."""

    def __init__(self, config: PartitionConfig) -> None:
        self.config = config
        self._state: Optional[RunState] = None

    @property
    def state(self) -> Optional[RunState]:
        return self._state

    async def startup(self, resume: bool = False) -> RunState:
        """
        Initialize run state.

        Args:
            resume: continue from the manifest already in the work directory

        Returns:
            The run state, with a fresh manifest unless resuming
        """
        if self._state is not None:
            return self._state

        ensure_work_dir(self.config.work_dir)
        path = manifest_path(self.config.work_dir)
        if resume:
            if not path.exists():
                raise PhaseError("startup", f"no manifest at {path}; run the earlier phases first")
            manifest = read_manifest(path)
            for field in _ECHOED_FIELDS:
                if getattr(manifest, field) != getattr(self.config, field):
                    raise PhaseError(
                        "startup",
                        f"{field}={getattr(self.config, field)} differs from the manifest's "
                        f"{field}={getattr(manifest, field)}",
                    )
            logger.info(f"Run resumed - work_dir: {self.config.work_dir}, last_completed_phase: {manifest.last_completed_phase}")
        else:
            manifest = RunManifest.from_config(self.config)
            logger.info(
                f"Run started - work_dir: {self.config.work_dir}, k: {self.config.k}, p: {self.config.p}, "
                f"t: {self.config.t}, rc_mode: {self.config.rc_mode}"
            )

        self._state = RunState(config=self.config, manifest=manifest)
        return self._state

    def save(self) -> None:
        if self._state is not None:
            write_manifest(manifest_path(self.config.work_dir), self._state.manifest)

    @asynccontextmanager
    async def phase(self, name: str, ordered: bool = True) -> AsyncIterator[RunManifest]:
        """
        Time one phase and record it in the manifest.

        Ordered phases must follow the last completed one; on success the manifest
        records the phase as completed and is saved, on failure it is saved unchanged.
        """
        if self._state is None:
            raise PhaseError(name, "run state not started")
        manifest = self._state.manifest
        if ordered:
            position = PHASE_ORDER.index(name)
            if position > 0 and not manifest.phase_done(PHASE_ORDER[position - 1]):
                raise PhaseError(name, f"{PHASE_ORDER[position - 1]} phase has not completed")

        logger.info(f"Phase started - phase: {name}")
        started = time.perf_counter()
        try:
            yield manifest
        except Exception as e:
            logger.error(f"Phase failed - phase: {name}, error: {e}")
            self.save()
            raise
        elapsed = time.perf_counter() - started
        manifest.phase_seconds[name] = round(elapsed, 3)
        manifest.peak_rss_kb[name] = peak_rss_kb()
        if ordered:
            manifest.last_completed_phase = name
        self.save()
        logger.info(f"Phase finished - phase: {name}, seconds: {elapsed:.3f}")

    async def shutdown(self) -> None:
        """Write the final manifest."""
        if self._state is None:
            return
        self.save()
        problems = self._state.manifest.consistency_errors()
        for problem in problems:
            logger.warning(f"Manifest inconsistency - {problem}")
        self._state = None
        logger.info("Run state shutdown complete")
