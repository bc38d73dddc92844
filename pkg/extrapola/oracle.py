# ===============================================
# ARQUIVO: extrapola/oracle.py
# Validadores independentes: Nyström da equação integral, mínimos quadrados
# em malha densa para o problema local, cota dual e a demonstração de
# extrapolação à esquerda sem limite
# ===============================================

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy import linalg

from .core.config import (NYSTROM_EPS2_MIN, NYSTROM_NODES, NYSTROM_SPAN, ORACLE_T_GRID,
                          WORKERS, t_max_padrao)
from .core.erros import DominioError, InviavelError, MalCondicionadoError
from .core.utils import Formatters, executar_em_paralelo
from .local_caprini import Cmf, CmfMeasure, XQuadrature, support_weights
from .operator_k import UnitGridFunction, apply_K, unit_quadrature
from .phi_solver import solve_psi

logger = logging.getLogger(__name__)

COLUNAS_COMPARACAO = ["method", "parameter", "value", "reference", "relative_gap"]
COLUNAS_DEMO = ["K", "l2_discrepancy", "gap", "bound_K"]

# ===============================================
# NYSTRÖM
# ===============================================

@dataclass(frozen=True, eq=False)
class NystromSolution:
    grid: UnitGridFunction
    eps2: float
    x0: float
    psi_values: np.ndarray
    psi_at_x0: float
    norm_l2: float
    norm_hardy: float
    eps: float
    delta_star: float
    condition: float
    system_residual: float

    @property
    def pythagoras_residual(self) -> float:
        return abs(self.norm_l2 ** 2 + self.eps2 * self.norm_hardy ** 2 - self.psi_at_x0) / self.psi_at_x0


def nystrom_solve(x0: float, eps2: float, n: int = NYSTROM_NODES,
                  span: float = NYSTROM_SPAN) -> NystromSolution:
    """
    Resolve eps2 psi + K psi = 1/(x0 + .) na malha log-legendre por sistema
    simétrico denso. A norma de Hardy sai da forma fechada
    ||Lambda psi - e^{-x0 t}||^2 = (psi, K psi) - 2 (psi, k0) + 1/(2 x0).
    """
    if n < 50:
        raise DominioError(f"Nyström exige n >= 50 (atual: {n})")
    if not math.isfinite(x0) or x0 < 1:
        raise DominioError(f"x0 deve ser >= 1 (atual: {x0})")
    if eps2 < NYSTROM_EPS2_MIN:
        raise MalCondicionadoError(f"eps2={eps2:.1e} abaixo da resolução da malha; use o solver espectral",
                                   condicao=(math.pi + eps2) / eps2)

    x, w = unit_quadrature(n, "log-legendre", span)
    raiz_w = np.sqrt(w)
    S = raiz_w[:, None] * (1.0 / (x[:, None] + x[None, :])) * raiz_w[None, :]
    autovalores = linalg.eigvalsh(S)
    condicao = float((autovalores[-1] + eps2) / (max(autovalores[0], 0.0) + eps2))

    k0 = 1.0 / (x0 + x)
    A = S + eps2 * np.eye(n)
    phi = linalg.solve(A, raiz_w * k0, assume_a="pos")
    psi = phi / raiz_w

    residuo = float(np.max(np.abs(A @ phi - raiz_w * k0)))

    grid = UnitGridFunction(x, w, psi, "log-legendre")
    psi_k0 = float(np.sum(w * psi * k0))
    psi_x0 = (1.0 / (2.0 * x0) - psi_k0) / eps2
    norm_l2 = math.sqrt(float(np.sum(w * psi ** 2)))
    hardy_sq = (float(phi @ S @ phi) - 2.0 * psi_k0 + 1.0 / (2.0 * x0)) / eps2 ** 2
    norm_hardy = math.sqrt(max(hardy_sq, 0.0))

    logger.debug(f"🔍 Nyström x0={x0}, eps2={eps2:.2e}, n={n}: psi(x0)={psi_x0:.10g}, "
                 f"cond={condicao:.2e}, resíduo={residuo:.1e}")
    return NystromSolution(
        grid=grid, eps2=eps2, x0=float(x0), psi_values=psi, psi_at_x0=psi_x0,
        norm_l2=norm_l2, norm_hardy=norm_hardy, eps=norm_l2 / norm_hardy,
        delta_star=psi_x0 / norm_hardy, condition=condicao, system_residual=residuo,
    )


def nystrom_psi(sol: NystromSolution, z: Union[float, complex]):
    """Regra de extensão psi(z) = (1/eps2)(1/(z + x0) - (K psi)(z))"""
    return (1.0 / (z + sol.x0) - apply_K(sol.grid, z)) / sol.eps2

# ===============================================
# PROBLEMA LOCAL EM MALHA DENSA
# ===============================================

@dataclass(frozen=True, eq=False)
class GridLocalResult:
    support: CmfMeasure
    residual_l2: float
    t_grid: np.ndarray
    delta: float


def grid_local_solve(f0: Cmf, x0: float, delta: float, t_grid=None) -> GridLocalResult:
    """NNLS com restrição de igualdade sobre os pesos de uma malha fixa em t"""
    if t_grid is None:
        t_max = t_max_padrao(x0)
        t_grid = np.concatenate([[0.0], np.logspace(-3, math.log10(t_max), ORACLE_T_GRID - 1)])
        if isinstance(f0, CmfMeasure):
            t_grid = np.union1d(t_grid, f0.t)
    t_grid = np.unique(np.asarray(t_grid, dtype=float))
    if t_grid.size > ORACLE_T_GRID + 16:
        raise DominioError(f"malha em t grande demais ({t_grid.size} pontos)")

    alvo = float(f0.value(x0)) + delta
    if alvo <= 0:
        raise InviavelError(f"delta={delta:.6g} exige f(x0) <= 0", supremo=-float(f0.value(x0)))

    quad = XQuadrature(f0)
    t, a = support_weights(t_grid, f0, quad, x0, alvo)
    suporte = CmfMeasure(t, a)
    return GridLocalResult(suporte, quad.residuo(suporte), t_grid, delta)

# ===============================================
# COTA DUAL
# ===============================================

def _psi_x0(x0: float, veps: float, solver: str, n: int,
            opcoes: Optional[Dict[str, Any]] = None) -> float:
    if solver == "spectral":
        return solve_psi(x0, veps, **(opcoes or {})).psi_at_x0
    return nystrom_solve(x0, veps ** 2, n).psi_at_x0


def dual_bound_scan(x0: float, eps: float, p_scan: Sequence[float], solver: str = "nystrom",
                    n: int = NYSTROM_NODES, opcoes: Optional[Dict[str, Any]] = None) -> pd.DataFrame:
    """
    Tabela p, q, veps, bound com bound(p) = sqrt(q Q(veps_p)), Q = veps_p^2 psi(x0)
    e veps_p = eps sqrt(p/q) = eps sqrt(p - 1).
    """
    linhas = []
    for p in p_scan:
        if not (p > 1 and math.isfinite(p)):
            raise DominioError(f"p deve ser finito e > 1 (atual: {p})")
        q = p / (p - 1.0)
        veps = eps * math.sqrt(p - 1.0)
        Q = veps ** 2 * _psi_x0(x0, veps, solver, n, opcoes)
        linhas.append({"p": p, "q": q, "veps": veps, "bound": math.sqrt(q * Q)})
    return Formatters.tabela(linhas, ["p", "q", "veps", "bound"])


def dual_upper_bound(x0: float, eps: float, p_scan: Sequence[float], solver: str = "nystrom",
                     n: int = NYSTROM_NODES) -> float:
    """min sobre p de sqrt(q Q); cota superior de Delta*(eps)"""
    return float(dual_bound_scan(x0, eps, p_scan, solver, n)["bound"].min())

# ===============================================
# EXTRAPOLAÇÃO À ESQUERDA
# ===============================================

def left_unbounded_demo(eps: float, K_list: Sequence[float], c: float = 0.0) -> pd.DataFrame:
    """
    Família f_K = f + eps sqrt(2K) e^{-Kx}: discrepância L2 eps sqrt(1 - e^{-2K}) <= eps
    e diferença pontual em c <= 0 igual a eps sqrt(2K) e^{-Kc}, sem limite em K.
    """
    if c > 0:
        raise DominioError(f"c deve ser <= 0 (atual: {c})")
    if eps <= 0:
        raise DominioError(f"eps deve ser > 0 (atual: {eps})")
    linhas = []
    for K in sorted(K_list):
        if K <= 0:
            raise DominioError(f"K deve ser > 0 (atual: {K})")
        linhas.append({
            "K": K,
            "l2_discrepancy": eps * math.sqrt(-math.expm1(-2.0 * K)),
            "gap": eps * math.sqrt(2.0 * K) * math.exp(-K * c),
            "bound_K": eps * math.sqrt(2.0 * K),
        })
    return Formatters.tabela(linhas, COLUNAS_DEMO)

# ===============================================
# COMPARAÇÃO ESPECTRAL x NYSTRÖM
# ===============================================

def _tarefa_comparacao(args):
    x0, veps, n, opcoes = args
    espectral = solve_psi(x0, veps, **opcoes)
    nystrom = nystrom_solve(x0, veps ** 2, n)
    linhas = []
    for nome in ("psi_at_x0", "norm_l2", "norm_hardy", "eps", "delta_star"):
        valor, referencia = getattr(nystrom, nome), getattr(espectral, nome)
        linhas.append({
            "method": "nystrom",
            "parameter": f"x0={x0:g};veps={veps:g};{nome}",
            "value": valor,
            "reference": referencia,
            "relative_gap": abs(valor - referencia) / abs(referencia),
        })
    return linhas


def compare_spectral_nystrom(x0_list: Sequence[float], veps_list: Sequence[float],
                             n: int = NYSTROM_NODES, workers: int = WORKERS,
                             opcoes: Optional[Dict[str, Any]] = None) -> pd.DataFrame:
    """Tabela method, parameter, value, reference, relative_gap; `opcoes` vão para solve_psi"""
    opcoes = dict(opcoes or {})
    tarefas = [(float(x0), float(v), n, opcoes) for x0 in x0_list for v in veps_list]
    blocos = executar_em_paralelo(_tarefa_comparacao, tarefas, workers, "espectral x Nyström")
    df = Formatters.tabela([linha for bloco in blocos for linha in bloco], COLUNAS_COMPARACAO)
    pior = df["relative_gap"].max()
    if pior <= 1e-4:
        logger.info(f"✅ espectral x Nyström: maior diferença relativa {pior:.2e}")
    else:
        logger.warning(f"⚠️ espectral x Nyström: maior diferença relativa {pior:.2e}")
    return df
