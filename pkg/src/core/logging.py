"""Logging configuration for the IBLT schemes library.

This module provides centralized logging for the CLI and library, supporting:

- Console output with Rich formatting and tracebacks (on stderr, so listing
  output on stdout stays machine-readable)
- File logging with rotation for all log levels
- Separate error log file for ERROR+ messages only

Function Tree:
--------------
```
logging
├── AppLogger                              # Application-wide logger configuration class
│   ├── __init__()                        # Initialize logger using application settings
│   ├── _setup_console_handler()          # Setup Rich console handler
│   ├── _setup_file_handler()             # Setup rotating file handler for all logs
│   └── _setup_error_handler()            # Setup separate handler for error logs
├── setup_logging()                        # Initialize application-wide logging configuration
└── get_logger()                          # Get a logger instance for a module
```

Environment Configuration:
--------------------------
- **LOG_LEVEL**: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL) - default: "INFO"
- **LOG_TO_FILE**: Also write rotating log files - default: true
- **LOG_MAX_SIZE_MB**: Maximum log file size in MB before rotation - default: 2
- **LOG_BACKUP_COUNT**: Number of backup log files to keep during rotation - default: 5
- **LOG_FORMAT**: Log message format string for file output
- **LOG_FILE_NAME**: Main application log filename - default: "app.log"
- **LOG_ERROR_FILE_NAME**: Error log filename - default: "errors.log"
- **LOG_DIR**: Log directory (relative to OUTPUT_ROOT_DIR) - default: "logs"

Usage Example:
--------------
    from src.core.logging import setup_logging, get_logger

    setup_logging()
    logger = get_logger(__name__)
    logger.info("Verification started")
"""

import logging
import logging.handlers

from rich.console import Console
from rich.logging import RichHandler

from src.core.config import get_settings

# Track if logging has been initialized
_logging_initialized = False


class AppLogger:
    """Application-wide logger configuration.

    Sets up up to three logging destinations:
    1. Console - Rich-formatted output on stderr
    2. Main log file - Rotating file with all log levels
    3. Error log file - Rotating file filtered to ERROR+ only
    """

    def __init__(self, level: str | None = None) -> None:
        """Initialize logger using application settings.

        Args:
            level: Optional level name overriding LOG_LEVEL.
        """
        self.settings = get_settings()
        self.level = getattr(logging, (level or self.settings.LOG_LEVEL).upper(), logging.INFO)

        self.logger = logging.getLogger()
        self.logger.setLevel(self.level)

        # Remove existing handlers to prevent duplicates
        for handler in self.logger.handlers[:]:
            handler.close()
            self.logger.removeHandler(handler)

        self._setup_console_handler()
        if self.settings.LOG_TO_FILE:
            self.log_dir = self.settings.log_path
            self.log_dir.mkdir(parents=True, exist_ok=True)
            self._setup_file_handler()
            self._setup_error_handler()

        logging.getLogger(__name__).debug("Logging initialized at %s", logging.getLevelName(self.level))

    def _setup_console_handler(self) -> None:
        """Setup Rich console handler for formatted output."""
        console = Console(stderr=True)

        handler = RichHandler(
            console=console,
            rich_tracebacks=True,
            show_path=False,
            markup=False,
            show_time=True,
            show_level=True,
        )
        handler.setLevel(self.level)

        self.logger.addHandler(handler)

    def _rotating_handler(self, file_name: str) -> logging.Handler:
        log_file = self.log_dir / file_name
        log_file.touch(exist_ok=True)

        handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=self.settings.LOG_MAX_SIZE_MB * 1024 * 1024,
            backupCount=self.settings.LOG_BACKUP_COUNT,
            encoding="utf-8",
        )
        handler.setFormatter(logging.Formatter(self.settings.LOG_FORMAT))
        return handler

    def _setup_file_handler(self) -> None:
        """Setup rotating file handler for all logs."""
        self.logger.addHandler(self._rotating_handler(self.settings.LOG_FILE_NAME))

    def _setup_error_handler(self) -> None:
        """Setup separate rotating handler for error logs only."""
        handler = self._rotating_handler(self.settings.LOG_ERROR_FILE_NAME)
        handler.setLevel(logging.ERROR)  # Only ERROR and above
        self.logger.addHandler(handler)


def setup_logging(level: str | None = None) -> None:
    """Initialize application-wide logging configuration.

    Args:
        level: Optional log level override. Uses settings if not provided.
    """
    global _logging_initialized

    AppLogger(level)
    _logging_initialized = True


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance for a module.

    Args:
        name: The module name (typically __name__)

    Returns:
        A configured logger instance
    """
    return logging.getLogger(name)
