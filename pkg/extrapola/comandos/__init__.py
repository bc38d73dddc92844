# ===============================================
# ARQUIVO: extrapola/comandos/__init__.py
# Registro dos subcomandos de manage.py
# ===============================================

import importlib
import sys
from typing import List, Optional

from .base import SAIDA_USO, BaseCommand

# subcomando -> módulo em extrapola.comandos
COMANDOS = {
    "powerlaw": "powerlaw",
    "delta-star": "delta_star",
    "local": "local",
    "eig": "eig",
    "oracle-compare": "oracle_compare",
    "demo-left": "demo_left",
    "verify": "verify",
}


def carregar_comando(nome: str) -> BaseCommand:
    modulo = importlib.import_module(f"{__name__}.{COMANDOS[nome]}")
    return modulo.Command()


def uso() -> str:
    linhas = ["Uso: manage.py <subcomando> [opções]", "", "Subcomandos:"]
    for nome in COMANDOS:
        linhas.append(f"  {nome:<16} {carregar_comando(nome).help}")
    return "\n".join(linhas)


def executar_linha_de_comando(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv if argv is None else argv)
    if len(argv) < 2 or argv[1] in ("-h", "--help", "help"):
        sys.stdout.write(uso() + "\n")
        return 0 if len(argv) >= 2 else SAIDA_USO
    if argv[1] not in COMANDOS:
        sys.stderr.write(f"❌ Subcomando desconhecido: {argv[1]}\n\n{uso()}\n")
        return SAIDA_USO
    return carregar_comando(argv[1]).executar(argv[2:])
