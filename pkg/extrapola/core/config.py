# -*- coding: utf-8 -*-
# ===============================================
# ARQUIVO: extrapola/core/config.py
# Parâmetros numéricos padrão, lidos do .env
# ===============================================

import os
from dotenv import load_dotenv
from pathlib import Path

current_dir = Path(__file__).parent
project_root = current_dir.parent.parent
env_path = project_root / ".env"

if not env_path.exists():
    alternative_paths = [
        current_dir.parent / ".env",
        Path(".env"),
        Path("../.env")
    ]
    for alt_path in alternative_paths:
        if alt_path.exists():
            env_path = alt_path
            break

load_dotenv(dotenv_path=env_path)


def _flag(nome: str, padrao: str) -> bool:
    return os.getenv(nome, padrao).lower() in ("true", "1", "yes")


# Autofunções u(x;mu)
MU_SWITCH = float(os.getenv("MU_SWITCH", "20"))
MPMATH_DPS = int(os.getenv("MPMATH_DPS", "20"))
DPS_POR_MU = float(os.getenv("DPS_POR_MU", "0.75"))
REAL_TOL = float(os.getenv("REAL_TOL", "1e-8"))

# Malhas em [0,1] e transformada u
GRID_NODES = int(os.getenv("GRID_NODES", "200"))
LOG_GRID_SPAN = float(os.getenv("LOG_GRID_SPAN", "40"))
TRANSFORM_MU_STEP = float(os.getenv("TRANSFORM_MU_STEP", "0.05"))
TRANSFORM_MU_MAX = float(os.getenv("TRANSFORM_MU_MAX", "12"))
TRANSFORM_TAIL_SHARE = float(os.getenv("TRANSFORM_TAIL_SHARE", "1e-6"))
FD_STEP = float(os.getenv("FD_STEP", "1e-4"))

# Solver espectral do problema phi
MU_STEP = float(os.getenv("MU_STEP", "0.02"))
MU_TAIL_MARGIN = float(os.getenv("MU_TAIL_MARGIN", "6"))
TAIL_TOL = float(os.getenv("TAIL_TOL", "1e-8"))
PYTHAGORAS_TOL = float(os.getenv("PYTHAGORAS_TOL", "1e-8"))
BISECT_LOG10_LO = float(os.getenv("BISECT_LOG10_LO", "-16"))
BISECT_LOG10_HI = float(os.getenv("BISECT_LOG10_HI", "2"))
BISECT_ITERS = int(os.getenv("BISECT_ITERS", "60"))

# Problema local (Caprini)
CERT_TOL = float(os.getenv("CERT_TOL", "1e-8"))
CERT_GRID = int(os.getenv("CERT_GRID", "10000"))
PRUNE_REL = float(os.getenv("PRUNE_REL", "1e-12"))
MERGE_TOL = float(os.getenv("MERGE_TOL", "1e-6"))
CLUSTER_TOL = float(os.getenv("CLUSTER_TOL", "0.05"))
MAX_OUTER = int(os.getenv("MAX_OUTER", "200"))
T_MAX_BASE = float(os.getenv("T_MAX_BASE", "50"))
T_MAX_SLOPE = float(os.getenv("T_MAX_SLOPE", "10"))
LOCAL_X_NODES = int(os.getenv("LOCAL_X_NODES", "256"))
SLOPE_DELTA = float(os.getenv("SLOPE_DELTA", "1e-6"))
TAU_SCAN_POINTS = int(os.getenv("TAU_SCAN_POINTS", "400"))

# Oráculos
NYSTROM_NODES = int(os.getenv("NYSTROM_NODES", "400"))
NYSTROM_SPAN = float(os.getenv("NYSTROM_SPAN", "36"))
NYSTROM_EPS2_MIN = float(os.getenv("NYSTROM_EPS2_MIN", "1e-10"))
ORACLE_T_GRID = int(os.getenv("ORACLE_T_GRID", "2000"))

# Saída, execução e logs
CSV_DIGITS = int(os.getenv("CSV_DIGITS", "12"))
SEED = int(os.getenv("SEED", "20240607"))
WORKERS = int(os.getenv("WORKERS", "1"))
DEBUG = _flag("DEBUG", "False")
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE = os.getenv("LOG_FILE", "logs/extrapola.log")


def validar_configuracoes():
    erros = []
    for nome, valor in (("MU_STEP", MU_STEP), ("TRANSFORM_MU_STEP", TRANSFORM_MU_STEP),
                        ("FD_STEP", FD_STEP), ("SLOPE_DELTA", SLOPE_DELTA),
                        ("LOG_GRID_SPAN", LOG_GRID_SPAN), ("MU_SWITCH", MU_SWITCH)):
        if valor <= 0:
            erros.append(f"{nome} deve ser positivo (atual: {valor})")
    for nome, valor in (("TAIL_TOL", TAIL_TOL), ("CERT_TOL", CERT_TOL),
                        ("REAL_TOL", REAL_TOL), ("PRUNE_REL", PRUNE_REL),
                        ("MERGE_TOL", MERGE_TOL), ("PYTHAGORAS_TOL", PYTHAGORAS_TOL)):
        if not 0 < valor < 1:
            erros.append(f"{nome} deve estar em (0, 1) (atual: {valor})")
    if BISECT_LOG10_LO >= BISECT_LOG10_HI:
        erros.append("BISECT_LOG10_LO deve ser menor que BISECT_LOG10_HI")
    if GRID_NODES < 2 or NYSTROM_NODES < 50:
        erros.append("GRID_NODES >= 2 e NYSTROM_NODES >= 50 são obrigatórios")
    if MAX_OUTER < 1 or BISECT_ITERS < 1:
        erros.append("MAX_OUTER e BISECT_ITERS devem ser >= 1")
    if not 1 <= CSV_DIGITS <= 17:
        erros.append("CSV_DIGITS deve estar entre 1 e 17")
    if WORKERS < 1:
        erros.append("WORKERS deve ser >= 1")
    if erros:
        raise ValueError(f"Erros: {erros}")
    return True


def t_max_padrao(x0: float) -> float:
    """Limite superior da busca do certificado: T_MAX_BASE + T_MAX_SLOPE·x0"""
    return T_MAX_BASE + T_MAX_SLOPE * x0


class Config:
    MU_SWITCH = MU_SWITCH
    MU_STEP = MU_STEP
    MU_TAIL_MARGIN = MU_TAIL_MARGIN
    TAIL_TOL = TAIL_TOL
    GRID_NODES = GRID_NODES
    LOG_GRID_SPAN = LOG_GRID_SPAN
    TRANSFORM_MU_STEP = TRANSFORM_MU_STEP
    TRANSFORM_MU_MAX = TRANSFORM_MU_MAX
    BISECT_LOG10_LO = BISECT_LOG10_LO
    BISECT_LOG10_HI = BISECT_LOG10_HI
    BISECT_ITERS = BISECT_ITERS
    CERT_TOL = CERT_TOL
    CERT_GRID = CERT_GRID
    MAX_OUTER = MAX_OUTER
    T_MAX_BASE = T_MAX_BASE
    T_MAX_SLOPE = T_MAX_SLOPE
    NYSTROM_NODES = NYSTROM_NODES
    NYSTROM_EPS2_MIN = NYSTROM_EPS2_MIN
    CSV_DIGITS = CSV_DIGITS
    SEED = SEED
    WORKERS = WORKERS
    DEBUG = DEBUG


config = Config()

__all__ = [
    "MU_SWITCH", "MPMATH_DPS", "DPS_POR_MU", "REAL_TOL",
    "GRID_NODES", "LOG_GRID_SPAN", "TRANSFORM_MU_STEP", "TRANSFORM_MU_MAX",
    "TRANSFORM_TAIL_SHARE", "FD_STEP",
    "MU_STEP", "MU_TAIL_MARGIN", "TAIL_TOL", "PYTHAGORAS_TOL",
    "BISECT_LOG10_LO", "BISECT_LOG10_HI", "BISECT_ITERS",
    "CERT_TOL", "CERT_GRID", "PRUNE_REL", "MERGE_TOL", "CLUSTER_TOL", "MAX_OUTER",
    "T_MAX_BASE", "T_MAX_SLOPE", "LOCAL_X_NODES", "SLOPE_DELTA", "TAU_SCAN_POINTS",
    "NYSTROM_NODES", "NYSTROM_SPAN", "NYSTROM_EPS2_MIN", "ORACLE_T_GRID",
    "CSV_DIGITS", "SEED", "WORKERS", "DEBUG", "LOG_LEVEL", "LOG_FILE",
    "config", "validar_configuracoes", "t_max_padrao",
]
