"""Logger estructurado para relaycap.

Sistema de logging con:
- Formato JSON estructurado (útil para procesar barridos largos).
- Formato texto legible para uso interactivo.
- Rotación de archivos opcional (por tamaño).

La consola usa stderr: stdout queda reservado para las tablas de datos del CLI.
"""

import json
import logging
import os
import sys
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict

from relaycap.config.settings import settings

TEXT_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


class JSONFormatter(logging.Formatter):
    """Formateador que convierte logs a JSON estructurado."""

    def format(self, record: logging.LogRecord) -> str:
        """Convierte el log record a JSON."""
        log_data = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        # Campos de contexto (theta, rate, seed, ...)
        if hasattr(record, "extra_fields"):
            log_data.update(record.extra_fields)

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data, ensure_ascii=False, default=str)


class StructuredLogger:
    """Logger estructurado con contexto por palabra clave.

    Ejemplo:
        logger.debug("Raíz encontrada", theta=0.0123, iterations=48)

    Niveles usados en el proyecto:
    - DEBUG: cada resolución de raíz y cada caída a cuadratura adaptativa.
    - INFO: resúmenes de simulación y de comandos.
    - WARNING: diagnósticos (simulación inestable, bracket sin cambio de signo).
    - ERROR: errores que terminan un comando.
    """

    def __init__(self, name: str = "relaycap"):
        self.logger = logging.getLogger(name)
        self._setup()

    def _setup(self):
        """Configura el logger con handlers y formateadores."""
        level = getattr(logging, settings.log_level.upper(), logging.INFO)
        self.logger.setLevel(level)
        self.logger.propagate = False

        # Si ya tiene handlers, no añadir más (evitar duplicados)
        if self.logger.handlers:
            return

        self._add_console_handler(level)

        if settings.log_to_file:
            Path(settings.log_directory).mkdir(parents=True, exist_ok=True)
            self._add_file_handler(level)

    def _formatter(self) -> logging.Formatter:
        if settings.log_format == "json":
            return JSONFormatter()
        return logging.Formatter(fmt=TEXT_FORMAT, datefmt=DATE_FORMAT)

    def _add_console_handler(self, level: int):
        """Añade handler de consola sobre stderr."""
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(self._formatter())
        self.logger.addHandler(console_handler)

    def _add_file_handler(self, level: int):
        """Añade handler de archivo con rotación por tamaño (relaycap.log, relaycap.log.1, ...)."""
        rotating_handler = RotatingFileHandler(
            filename=os.path.join(settings.log_directory, "relaycap.log"),
            maxBytes=settings.log_max_file_size_mb * 1024 * 1024,
            backupCount=settings.log_backup_count,
            encoding="utf-8",
        )
        rotating_handler.setLevel(level)
        rotating_handler.setFormatter(self._formatter())
        self.logger.addHandler(rotating_handler)

    def set_level(self, level: str):
        """Cambia el nivel en caliente (usado por --verbose del CLI)."""
        numeric = getattr(logging, level.upper(), logging.INFO)
        self.logger.setLevel(numeric)
        for handler in self.logger.handlers:
            handler.setLevel(numeric)

    def _add_context(self, extra: Dict[str, Any]) -> str:
        """Convierte información extra en string legible (para formato texto)."""
        if not extra:
            return ""
        parts = [f"{key}={value}" for key, value in extra.items()]
        return f" | {' | '.join(parts)}"

    def _log(self, level: int, message: str, extra: Dict[str, Any]):
        if not self.logger.isEnabledFor(level):
            return
        if settings.log_format == "json" and extra:
            record = self.logger.makeRecord(
                self.logger.name, level, "(unknown file)", 0, message, (), None
            )
            record.extra_fields = extra
            self.logger.handle(record)
        else:
            self.logger.log(level, f"{message}{self._add_context(extra)}")

    def debug(self, message: str, **extra):
        """Log de debug (solo visible si RELAYCAP_LOG_LEVEL=DEBUG)."""
        self._log(logging.DEBUG, message, extra)

    def info(self, message: str, **extra):
        """Log informativo normal."""
        self._log(logging.INFO, message, extra)

    def warning(self, message: str, **extra):
        """Log de advertencia (algo inesperado pero no crítico)."""
        self._log(logging.WARNING, message, extra)

    def error(self, message: str, **extra):
        """Log de error."""
        self._log(logging.ERROR, message, extra)


# Instancia única para usar en todo el paquete
logger = StructuredLogger()
