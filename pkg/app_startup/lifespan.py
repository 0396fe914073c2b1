"""Run lifespan management."""

import logging
from contextlib import asynccontextmanager
from typing import AsyncIterator

from app_startup.state import RunState, RunStateManager
from configs.config import DEFAULT_LOG_LEVEL
from configs.run_models import PartitionConfig

logger = logging.getLogger(__name__)


# Configure logging
def configure_logging(level: str = DEFAULT_LOG_LEVEL):
    """Configure logging for the application; logs go to stderr so CSV output on stdout stays clean."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(),
        ],
        force=True,
    )


@asynccontextmanager
async def run_lifespan(config: PartitionConfig, resume: bool = False) -> AsyncIterator[tuple[RunStateManager, RunState]]:
    """Manage one pipeline run from work-directory setup to the final manifest."""
    state_manager = RunStateManager(config)
    state = await state_manager.startup(resume=resume)
    try:
        yield state_manager, state
    finally:
        await state_manager.shutdown()
        logger.info(f"Run complete - work_dir: {config.work_dir}")
