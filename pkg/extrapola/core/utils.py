# ===============================================
# ARQUIVO: extrapola/core/utils.py
# Funções utilitárias: validação de entrada, tabelas e execução paralela
# ===============================================

import json
import logging
import math
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from .config import CSV_DIGITS
from .erros import DominioError

logger = logging.getLogger(__name__)

# ===============================================
# VALIDADORES
# ===============================================

class Validators:
    """Classe com validadores de entrada"""

    @staticmethod
    def validar_faixa(texto: str, por_decada: int = 4) -> List[float]:
        """Converte 'a:b' (ou 'a:b:n') em valores log-espaçados de a até b"""
        partes = [p.strip() for p in texto.split(":")]
        if len(partes) not in (2, 3):
            raise DominioError(f"faixa malformada: '{texto}' (esperado a:b ou a:b:n)")
        try:
            a, b = float(partes[0]), float(partes[1])
        except ValueError as exc:
            raise DominioError(f"faixa malformada: '{texto}'") from exc
        if not (0 < a < b) or not math.isfinite(b):
            raise DominioError(f"faixa inválida: '{texto}' (exige 0 < a < b)")
        if len(partes) == 3:
            try:
                n = int(partes[2])
            except ValueError as exc:
                raise DominioError(f"número de pontos inválido em '{texto}'") from exc
        else:
            n = max(2, int(round(por_decada * math.log10(b / a))) + 1)
        if n < 2:
            raise DominioError(f"faixa '{texto}' precisa de pelo menos 2 pontos")
        return list(np.logspace(math.log10(a), math.log10(b), n))

    @staticmethod
    def validar_lista(texto: str) -> List[float]:
        """Converte '1,2.5,5' em lista de floats"""
        try:
            valores = [float(v) for v in texto.split(",") if v.strip()]
        except ValueError as exc:
            raise DominioError(f"lista malformada: '{texto}'") from exc
        if not valores:
            raise DominioError("lista vazia")
        return valores

    @staticmethod
    def validar_atomos(texto: str) -> List[Tuple[float, float]]:
        """Converte 't1:a1,t2:a2' em átomos (t, a) de uma medida positiva"""
        atomos = []
        for item in texto.split(","):
            if not item.strip():
                continue
            try:
                t, a = (float(v) for v in item.split(":"))
            except ValueError as exc:
                raise DominioError(f"átomo malformado: '{item}' (esperado t:a)") from exc
            atomos.append((t, a))
        if not atomos:
            raise DominioError("nenhum átomo informado")
        return atomos

    @staticmethod
    def validar_x0(x0: float) -> float:
        if not math.isfinite(x0) or x0 < 1:
            raise DominioError(f"x0 deve ser >= 1 (atual: {x0})")
        return float(x0)

# ===============================================
# FORMATADORES
# ===============================================

class Formatters:
    """Saída de tabelas e relatórios"""

    @staticmethod
    def tabela(linhas: Union[pd.DataFrame, Sequence[Dict[str, Any]]],
               colunas: Optional[Sequence[str]] = None) -> pd.DataFrame:
        df = linhas if isinstance(linhas, pd.DataFrame) else pd.DataFrame(list(linhas))
        if colunas is not None:
            df = df.reindex(columns=list(colunas))
        return df

    @staticmethod
    def csv(df: pd.DataFrame, destino: Optional[Union[str, Path]] = None,
            digitos: int = CSV_DIGITS) -> str:
        """CSV com `digitos` algarismos significativos; grava se houver destino"""
        texto = df.to_csv(index=False, float_format=f"%.{digitos}g")
        if destino is not None:
            Path(destino).parent.mkdir(parents=True, exist_ok=True)
            Path(destino).write_text(texto, encoding="utf-8")
            logger.info(f"✅ Tabela gravada em {destino} ({len(df)} linhas)")
        return texto

    @staticmethod
    def json(dados: Any, destino: Optional[Union[str, Path]] = None) -> str:
        texto = json.dumps(Formatters._serializavel(dados), indent=2, ensure_ascii=False)
        if destino is not None:
            Path(destino).parent.mkdir(parents=True, exist_ok=True)
            Path(destino).write_text(texto, encoding="utf-8")
            logger.info(f"✅ Relatório gravado em {destino}")
        return texto

    @staticmethod
    def _serializavel(obj: Any) -> Any:
        if isinstance(obj, dict):
            return {str(k): Formatters._serializavel(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [Formatters._serializavel(v) for v in obj]
        if isinstance(obj, np.ndarray):
            return [Formatters._serializavel(v) for v in obj.tolist()]
        if isinstance(obj, (np.floating, float)):
            valor = float(obj)
            return valor if math.isfinite(valor) else str(valor)
        if isinstance(obj, (np.integer,)):
            return int(obj)
        if isinstance(obj, (np.bool_,)):
            return bool(obj)
        if isinstance(obj, complex):
            return {"real": obj.real, "imag": obj.imag}
        return obj

# ===============================================
# EXECUÇÃO PARALELA
# ===============================================

def executar_em_paralelo(funcao: Callable[[Any], Any], tarefas: Iterable[Any],
                         workers: int = 1, descricao: str = "varredura") -> List[Any]:
    """Aplica `funcao` às tarefas, em processo ou num Pool; mantém a ordem de entrada"""
    tarefas = list(tarefas)
    if workers <= 1 or len(tarefas) <= 1:
        return [funcao(t) for t in tqdm(tarefas, desc=descricao, disable=len(tarefas) < 4)]

    logger.info(f"🚀 {descricao}: {len(tarefas)} tarefas em {workers} processos")
    with Pool(processes=workers) as pool:
        return list(tqdm(pool.imap(funcao, tarefas), total=len(tarefas), desc=descricao))
