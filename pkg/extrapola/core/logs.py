# ===============================================
# ARQUIVO: extrapola/core/logs.py
# Configuração do sistema de logging
# ===============================================

import logging
import sys
from pathlib import Path
from typing import Optional

from .config import LOG_FILE, LOG_LEVEL


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = LOG_FILE) -> None:
    """Configura o sistema de logging (arquivo + stderr)"""
    handlers = [logging.StreamHandler(sys.stderr)]

    if log_file:
        # Criar diretório de logs se não existir
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path, encoding='utf-8'))

    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )
