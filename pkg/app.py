"""msp-dbg command-line application."""

import logging
import sys
from typing import Optional, Sequence

from api.cli.router import build_parser
from app_startup.lifespan import configure_logging
from configs.config import DEFAULT_LOG_LEVEL
from msp.errors import MSPError

logger = logging.getLogger(__name__)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, configure logging and dispatch the subcommand."""
    args = build_parser().parse_args(argv)
    configure_logging(getattr(args, "log_level", DEFAULT_LOG_LEVEL))
    try:
        return args.handler(args)
    except MSPError as e:
        logger.error(f"Command failed - command: {args.command}, error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
