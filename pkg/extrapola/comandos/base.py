# ===============================================
# ARQUIVO: extrapola/comandos/base.py
# Base dos subcomandos: RunConfig (pydantic), parser com flags comuns,
# leitura do --config YAML, saída CSV/JSON e códigos de saída
# ===============================================

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, TextIO, Tuple

import pandas as pd
import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..core.config import (CERT_GRID, CERT_TOL, GRID_NODES, LOG_LEVEL, MU_STEP, MU_SWITCH,
                           NYSTROM_NODES, PYTHAGORAS_TOL, SEED, TAIL_TOL, WORKERS,
                           validar_configuracoes)
from ..core.erros import DominioError, ExtrapolaError, InviavelError
from ..core.logs import setup_logging
from ..core.utils import Formatters

logger = logging.getLogger(__name__)

SAIDA_OK = 0
SAIDA_USO = 1
SAIDA_SOLVER = 2
SAIDA_VERIFICACAO = 3

# ===============================================
# CONFIGURAÇÃO DA EXECUÇÃO
# ===============================================

class RunConfig(BaseModel):
    """Configuração de uma execução; mesmo esquema das flags e do --config YAML"""
    model_config = ConfigDict(extra="forbid")

    command: Literal["powerlaw", "delta-star", "local", "eig", "oracle-compare", "demo-left", "verify"]
    x0: float = 2.0
    eps: List[float] = Field(default_factory=list)
    veps: List[float] = Field(default_factory=list)
    eps_decades: Optional[str] = None
    parametros: Dict[str, Any] = Field(default_factory=dict)

    # perfil de quadratura
    mu_max: Optional[float] = None
    mu_step: float = MU_STEP
    mu_switch: float = MU_SWITCH
    grid_nodes: int = GRID_NODES
    nystrom_nodes: int = NYSTROM_NODES
    cert_grid: int = CERT_GRID

    # tolerâncias
    tail_tol: float = TAIL_TOL
    pythagoras_tol: float = PYTHAGORAS_TOL
    cert_tol: float = CERT_TOL

    # saída e execução
    output: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    workers: int = WORKERS
    seed: int = SEED
    log_level: str = LOG_LEVEL

    @field_validator("x0")
    @classmethod
    def _x0_valido(cls, v: float) -> float:
        if not v >= 1:
            raise ValueError(f"x0 deve ser >= 1 (atual: {v})")
        return v

    @field_validator("eps", "veps")
    @classmethod
    def _positivos(cls, v: List[float]) -> List[float]:
        if any(not x > 0 for x in v):
            raise ValueError("valores de eps/veps devem ser > 0")
        return v

    @field_validator("mu_step", "mu_switch", "tail_tol", "pythagoras_tol", "cert_tol")
    @classmethod
    def _positivo(cls, v: float) -> float:
        if not v > 0:
            raise ValueError(f"valor deve ser > 0 (atual: {v})")
        return v

    @field_validator("workers", "grid_nodes", "nystrom_nodes", "cert_grid")
    @classmethod
    def _inteiro_positivo(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"valor deve ser >= 1 (atual: {v})")
        return v

    @classmethod
    def from_yaml(cls, caminho: str, **sobrescritas) -> "RunConfig":
        """Carrega o YAML; flags explícitas sobrescrevem o arquivo"""
        with open(caminho, encoding="utf-8") as arquivo:
            dados = yaml.safe_load(arquivo) or {}
        if not isinstance(dados, dict):
            raise DominioError(f"arquivo de configuração {caminho} não é um mapeamento")
        parametros = dict(dados.get("parametros") or {})
        parametros.update(sobrescritas.pop("parametros", None) or {})
        dados.update({k: v for k, v in sobrescritas.items() if v is not None})
        dados["parametros"] = parametros
        return cls(**dados)


class ComandoError(ExtrapolaError):
    """Erro de uso de um subcomando; carrega o código de saída"""

    def __init__(self, mensagem: str, codigo: int = SAIDA_USO):
        super().__init__(mensagem)
        self.codigo = codigo


class _Parser(argparse.ArgumentParser):
    # argparse sai com 2 em erro de uso; aqui uso é 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ComandoError(f"{self.prog}: erro: {message}", SAIDA_USO)

# ===============================================
# COMANDO BASE
# ===============================================

# campos do RunConfig que também são flags comuns
CAMPOS_COMUNS = ("output", "format", "workers", "seed", "log_level", "mu_max", "mu_step",
                 "mu_switch", "grid_nodes", "nystrom_nodes", "cert_grid", "tail_tol",
                 "pythagoras_tol", "cert_tol")
CAMPOS_GERAIS = ("x0", "eps", "veps", "eps_decades")

# flags numéricas agrupadas pelo solver que as consome; cada subcomando
# registra apenas os grupos que de fato repassa
GRUPOS_FLAGS: Dict[str, Tuple[Tuple[str, str, type, str], ...]] = {
    "espectral": (
        ("--mu-max", "mu_max", float, "corte da integral espectral"),
        ("--mu-step", "mu_step", float, "passo de Simpson em mu"),
        ("--tail-tol", "tail_tol", float, "massa de cauda tolerada"),
        ("--pythagoras-tol", "pythagoras_tol", float, "resíduo relativo de Pitágoras tolerado"),
    ),
    "malha": (
        ("--mu-switch", "mu_switch", float, "início do ramo assintótico"),
        ("--grid-nodes", "grid_nodes", int, "nós da malha em [0,1]"),
    ),
    "nystrom": (
        ("--nystrom-nodes", "nystrom_nodes", int, "nós do Nyström"),
    ),
    "certificado": (
        ("--cert-grid", "cert_grid", int, "pontos da busca do certificado"),
        ("--cert-tol", "cert_tol", float, "tolerância relativa do certificado"),
    ),
}


def opcoes_espectrais(config: RunConfig) -> Dict[str, Any]:
    """Perfil do solver espectral para solve_psi e derivados"""
    return {"mu_max": config.mu_max, "step": config.mu_step,
            "tail_tol": config.tail_tol, "pythagoras_tol": config.pythagoras_tol}


def opcoes_certificado(config: RunConfig) -> Dict[str, Any]:
    return {"cert_tol": config.cert_tol, "cert_grid": config.cert_grid}


class BaseCommand:
    """Subcomando com help, add_arguments(parser) e handle(config, **options)"""
    help = ""
    nome = ""
    grupos: Tuple[str, ...] = ()

    def __init__(self, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        pass

    def handle(self, config: RunConfig, **options) -> int:
        raise NotImplementedError("subcomandos devem implementar handle()")

    def escrever(self, texto: str = "") -> None:
        self.stdout.write(texto + "\n")

    def erro(self, texto: str) -> None:
        self.stderr.write(texto + "\n")

    def criar_parser(self) -> argparse.ArgumentParser:
        parser = _Parser(prog=f"manage.py {self.nome}", description=self.help)
        parser.add_argument("--config", dest="config_file",
                            help="arquivo YAML com o mesmo esquema das flags")
        parser.add_argument("--output", help="arquivo de saída (padrão: saída padrão)")
        parser.add_argument("--format", choices=["csv", "json"], help="formato da saída")
        parser.add_argument("--workers", type=int, help="processos da varredura")
        parser.add_argument("--seed", type=int, help="semente das verificações aleatórias")
        parser.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING...")
        for grupo in self.grupos:
            for flag, dest, tipo, ajuda in GRUPOS_FLAGS[grupo]:
                parser.add_argument(flag, dest=dest, type=tipo, help=ajuda)
        self.add_arguments(parser)
        return parser

    def montar_config(self, options: Dict[str, Any]) -> RunConfig:
        """RunConfig a partir do YAML (se houver) e das flags; flags vencem"""
        campos: Dict[str, Any] = {k: options.get(k) for k in CAMPOS_COMUNS + CAMPOS_GERAIS}
        campos["command"] = self.nome
        especificos = {k: v for k, v in options.items()
                       if k not in CAMPOS_COMUNS + CAMPOS_GERAIS + ("config_file",) and v is not None}
        if options.get("config_file"):
            return RunConfig.from_yaml(options["config_file"], parametros=especificos, **campos)
        return RunConfig(parametros=especificos, **{k: v for k, v in campos.items() if v is not None})

    @staticmethod
    def param(config: RunConfig, nome: str, padrao: Any = None) -> Any:
        return config.parametros.get(nome, padrao)

    def executar(self, argv: List[str]) -> int:
        """Parse, configuração, logging e despacho; devolve o código de saída"""
        try:
            parser = self.criar_parser()
            options = vars(parser.parse_args(argv))
            config = self.montar_config(options)
            validar_configuracoes()
        except ComandoError as exc:
            self.erro(f"❌ {exc}")
            return exc.codigo
        except (ValueError, OSError) as exc:
            self.erro(f"❌ Configuração inválida: {exc}")
            return SAIDA_USO

        # o caminho do YAML já foi consumido; handle recebe só as opções
        options.pop("config_file", None)
        setup_logging(config.log_level)
        logger.debug(f"🚀 {self.nome}: {config.model_dump_json()}")
        try:
            return self.handle(config, **options)
        except ComandoError as exc:
            self.erro(f"❌ {exc}")
            return exc.codigo
        except (DominioError, InviavelError) as exc:
            self.erro(f"❌ Entrada inválida: {exc}")
            self.erro(parser.format_usage().rstrip())
            return SAIDA_USO
        except ExtrapolaError as exc:
            logger.error(f"❌ Falha do solver em {self.nome}: {exc}")
            diagnostico = getattr(exc, "diagnostico", None)
            self.erro(f"❌ Falha do solver: {exc}")
            if diagnostico:
                self.erro(Formatters.json(diagnostico))
            return SAIDA_SOLVER

    # ===============================================
    # SAÍDA
    # ===============================================

    def emitir(self, config: RunConfig, df: pd.DataFrame, destino: Optional[str] = None,
               extras: Optional[Dict[str, Any]] = None) -> None:
        """Grava a tabela no destino (ou stdout) no formato escolhido"""
        destino = destino if destino is not None else config.output
        if config.format == "json":
            dados = {"command": config.command, "rows": df.to_dict(orient="records")}
            if extras:
                dados.update(extras)
            texto = Formatters.json(dados, destino)
        else:
            texto = Formatters.csv(df, destino)
        if destino is None:
            self.stdout.write(texto if texto.endswith("\n") else texto + "\n")

    def emitir_json(self, config: RunConfig, dados: Dict[str, Any], destino: Optional[str] = None) -> None:
        destino = destino if destino is not None else config.output
        texto = Formatters.json(dados, destino)
        if destino is None:
            self.escrever(texto)


def caminho_irmao(destino: Optional[str], sufixo: str) -> Optional[str]:
    """resultado.json -> resultado_<sufixo>.csv; None se não houver destino"""
    if destino is None:
        return None
    p = Path(destino)
    return str(p.with_name(f"{p.stem}_{sufixo}.csv"))
