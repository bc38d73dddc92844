# ===============================================
# ARQUIVO: extrapola/phi_solver.py
# Problema phi: psi_eps pela representação espectral, normas, identidade de
# Pitágoras, inversão veps -> eps e a curva exata Delta*(eps)
# ===============================================

"""
Solver espectral do problema phi.

A solução psi de veps^2 psi + K psi = 1/(x0 + x) tem coeficientes
u(x0;mu) / (2 veps_hat^2 cosh(pi mu) + 1) na base das autofunções u(.;mu), com
veps_hat = veps / sqrt(2 pi). As três integrais

    psi(x0)  = int u0^2 mu tanh(pi mu) / D      dmu
    ||psi||2 = int u0^2 mu tanh(pi mu) / D^2    dmu
    ||psi||  = (1/pi) int u0^2 mu sinh(pi mu) / D^2 dmu

(u0 = u(x0;mu), D = 2 veps_hat^2 cosh(pi mu) + 1) são somadas na mesma malha de
Simpson, em escala logarítmica. Daí saem eps = ||psi||2 / ||psi|| e
Delta* = psi(x0) / ||psi||.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import integrate

from .core.config import (BISECT_ITERS, BISECT_LOG10_HI, BISECT_LOG10_LO, MU_STEP,
                          MU_TAIL_MARGIN, PYTHAGORAS_TOL, TAIL_TOL, WORKERS)
from .core.erros import (BracketError, CaudaError, ConvergenciaError, DominioError,
                         QuadraturaError)
from .core.utils import Formatters, executar_em_paralelo
from .operator_k import MuQuadrature, simpson_rule
from .special_fn import (_alpha_real, alpha, c_star, eigfun_u, eigfun_u_table,
                         gamma_star, r_factor)

logger = logging.getLogger(__name__)

COLUNAS_CURVA = ["eps", "veps", "delta_star", "asymptotic_value", "ratio", "local_slope"]

# extensões do corte em mu antes de desistir da cauda
MAX_EXTENSOES_CAUDA = 8

# ===============================================
# MALHA ESPECTRAL
# ===============================================

@dataclass(frozen=True, eq=False)
class SpectralGrid(MuQuadrature):
    """Malha de Simpson em mu com log u(x0;mu) exato em cada nó"""
    x0: float = 1.0
    veps_hat: float = 1.0
    log_u_x0: Optional[np.ndarray] = None

    @property
    def u_x0_cache(self) -> np.ndarray:
        return np.exp(self.log_u_x0)

    @property
    def mu_crossover(self) -> float:
        """mu* = (2/pi)|ln veps_hat|, onde o denominador D deixa de ser ~1"""
        return max(0.0, 2.0 / math.pi * math.log(1.0 / self.veps_hat))


def _beta0(x0: float) -> float:
    return 2.0 * _alpha_real(x0) / math.pi


def mu_max_rule(x0: float, veps: float, taxa: Optional[float] = None) -> float:
    """
    Truncamento: mu* + max(margem, ln(1/TAIL_TOL)/taxa). A taxa de decaimento
    dos integrandos além de mu* é pi(1 - beta(x0)).
    """
    veps_hat = veps / math.sqrt(2.0 * math.pi)
    mu_star = max(0.0, 2.0 / math.pi * math.log(1.0 / veps_hat))
    if taxa is None:
        taxa = math.pi * (1.0 - _beta0(x0))
    return mu_star + max(MU_TAIL_MARGIN, math.log(1.0 / TAIL_TOL) / taxa)


def build_grid(x0: float, veps: float, mu_max: Optional[float] = None,
               step: float = MU_STEP) -> SpectralGrid:
    if not math.isfinite(x0) or x0 < 1:
        raise DominioError(f"x0 deve ser >= 1 (atual: {x0})")
    if not (veps > 0 and math.isfinite(veps)):
        raise DominioError(f"veps deve ser > 0 (atual: {veps})")
    if mu_max is None:
        mu_max = mu_max_rule(x0, veps)
    nos, pesos = simpson_rule(mu_max, step)
    log_u = np.zeros_like(nos) if x0 == 1 else eigfun_u_table(x0, nos)
    return SpectralGrid(nos, pesos, float(nos[-1]), step,
                        x0=float(x0), veps_hat=veps / math.sqrt(2.0 * math.pi), log_u_x0=log_u)


def _logs_espectrais(grid: SpectralGrid):
    """log mu, log tanh(pi mu), log sinh(pi mu), log D em cada nó"""
    y = math.pi * grid.mu_nodes
    with np.errstate(divide="ignore"):
        log_mu = np.log(grid.mu_nodes)
        e2 = np.exp(-2.0 * y)
        log_tanh = np.log(-np.expm1(-2.0 * y)) - np.log1p(e2)
        log_sinh = y + np.log(-np.expm1(-2.0 * y)) - math.log(2.0)
    log_cosh = y + np.log1p(e2) - math.log(2.0)
    log_D = np.logaddexp(0.0, math.log(2.0 * grid.veps_hat ** 2) + log_cosh)
    return log_mu, log_tanh, log_sinh, log_D


def _somar(grid: SpectralGrid, log_integrando: np.ndarray) -> Tuple[float, float]:
    """Integral por Simpson e a razão cauda/integral estimada no último nó"""
    valores = np.exp(log_integrando)
    total = float(np.sum(grid.weights * valores))
    return total, float(valores[-1])


def _log_peso_psi(grid: SpectralGrid, logs) -> np.ndarray:
    """log de u(x0;mu) mu tanh(pi mu) / D; psi(z) soma este peso vezes u(z;mu)"""
    log_mu, log_tanh, _, log_D = logs
    return grid.log_u_x0 + log_mu + log_tanh - log_D


def _integrais(grid: SpectralGrid):
    logs = _logs_espectrais(grid)
    log_mu, log_tanh, log_sinh, log_D = logs
    base = 2.0 * grid.log_u_x0 + log_mu
    psi0, ultimo0 = _somar(grid, _log_peso_psi(grid, logs) + grid.log_u_x0)
    l2sq, ultimo2 = _somar(grid, base + log_tanh - 2.0 * log_D)
    hsq, ultimoh = _somar(grid, base + log_sinh - 2.0 * log_D - math.log(math.pi))

    taxa = math.pi * (1.0 - _beta0(grid.x0))
    cauda = max(ultimo0 / psi0, ultimo2 / l2sq, ultimoh / hsq) / taxa
    return psi0, l2sq, hsq, cauda

# ===============================================
# SOLUÇÃO
# ===============================================

@dataclass(frozen=True, eq=False)
class PhiSolution:
    x0: float
    veps: float
    veps_hat: float
    mu_max: float
    psi_at_x0: float
    norm_l2: float
    norm_hardy: float
    eps: float
    delta_star: float
    grid: SpectralGrid = field(repr=False, default=None)
    pythagoras_residual: float = 0.0
    tail_mass: float = 0.0


def solve_psi(x0: float, veps: float, mu_max: Optional[float] = None,
              step: float = MU_STEP, tail_tol: float = TAIL_TOL,
              pythagoras_tol: float = PYTHAGORAS_TOL) -> PhiSolution:
    """
    Resolve veps^2 psi + K psi = 1/(x0+x) pela representação espectral.

    Em x0 = 1 usa u(1;mu) = 1 e não avalia autofunções. Sem `mu_max`, o corte
    da regra é estendido até a massa de cauda ficar abaixo de `tail_tol`;
    CaudaError só sai de um `mu_max` explícito (ou da extensão esgotada).
    """
    grid = build_grid(x0, veps, mu_max, step)
    psi0, l2sq, hsq, cauda = _integrais(grid)
    if mu_max is None:
        taxa = math.pi * (1.0 - _beta0(x0))
        for _ in range(MAX_EXTENSOES_CAUDA):
            if cauda <= tail_tol:
                break
            # cada extensão corta a cauda por um fator ~ e^(-taxa * passo)
            novo = grid.mu_max + max(1.0, math.log(max(cauda / tail_tol, math.e)) / taxa)
            logger.debug(f"🔧 cauda {cauda:.2e} > {tail_tol:.1e}: mu_max {grid.mu_max:.4g} -> {novo:.4g}")
            grid = build_grid(x0, veps, novo, step)
            psi0, l2sq, hsq, cauda = _integrais(grid)
    if cauda > tail_tol:
        raise CaudaError(f"mu_max={grid.mu_max:.4g} insuficiente para x0={x0}, veps={veps:.3e}",
                         massa_cauda=cauda)

    residuo = abs(l2sq + veps ** 2 * hsq - psi0) / psi0
    if residuo > pythagoras_tol:
        raise ConvergenciaError(f"identidade de Pitágoras violada: resíduo relativo {residuo:.2e}",
                                diagnostico={"x0": x0, "veps": veps, "residuo": residuo})

    norm_l2, norm_hardy = math.sqrt(l2sq), math.sqrt(hsq)
    if norm_l2 > math.sqrt(math.pi) * norm_hardy:
        raise ConvergenciaError("||psi||_2 <= sqrt(pi)||psi|| violada",
                                diagnostico={"norm_l2": norm_l2, "norm_hardy": norm_hardy})

    sol = PhiSolution(
        x0=float(x0), veps=float(veps), veps_hat=grid.veps_hat, mu_max=grid.mu_max,
        psi_at_x0=psi0, norm_l2=norm_l2, norm_hardy=norm_hardy,
        eps=norm_l2 / norm_hardy, delta_star=psi0 / norm_hardy,
        grid=grid, pythagoras_residual=residuo, tail_mass=cauda,
    )
    logger.debug(f"🔍 psi resolvido: x0={x0}, veps={veps:.3e}, eps={sol.eps:.6e}, "
                 f"Delta*={sol.delta_star:.6e}, mu_max={grid.mu_max:.3g}")
    return sol


def psi_value(sol: PhiSolution, z: Union[float, complex]) -> Union[float, complex]:
    """
    Extensão analítica psi(z) pela integral espectral; z real em (0,1] ou em Omega.
    A malha é estendida quando a taxa de decaimento em z exige mu_max maior.
    """
    z = complex(z)
    if not (cmath.isfinite(z) and z.real > 0):
        raise DominioError(f"z={z} fora do domínio")
    grid = sol.grid
    real_maior_1 = z.imag == 0 and z.real >= 1

    if real_maior_1:
        taxa = math.pi - _alpha_real(sol.x0) - _alpha_real(z.real)
    elif z.imag == 0:
        taxa = math.pi - _alpha_real(sol.x0)
    else:
        taxa = math.pi - _alpha_real(sol.x0) - alpha(z).real
    necessario = mu_max_rule(sol.x0, sol.veps, taxa)
    if necessario > grid.mu_max + grid.step:
        logger.warning(f"⚠️ malha em mu estendida para z={z}: {grid.mu_max:.3g} -> {necessario:.3g}")
        grid = build_grid(sol.x0, sol.veps, necessario, grid.step)

    log_peso = _log_peso_psi(grid, _logs_espectrais(grid))

    if real_maior_1:
        x = z.real
        log_u_z = np.zeros_like(grid.mu_nodes) if x == 1 else eigfun_u_table(x, grid.mu_nodes)
        valor, _ = _somar(grid, log_peso + log_u_z)
        return valor

    u_z = np.array([eigfun_u(z, float(m)) for m in grid.mu_nodes])
    valor = complex(np.sum(grid.weights * np.exp(log_peso) * u_z))
    return valor.real if z.imag == 0 else valor


def eps_of_veps(sol: PhiSolution) -> float:
    return sol.norm_l2 / sol.norm_hardy


def p_of_eps(sol: PhiSolution) -> float:
    """p = psi(x0)/||psi||_2^2 > 1 da relaxação quadrática"""
    return sol.psi_at_x0 / sol.norm_l2 ** 2


def q_of_eps(sol: PhiSolution) -> float:
    p = p_of_eps(sol)
    return p / (p - 1.0)

# ===============================================
# INVERSÃO eps -> veps E CURVA Delta*
# ===============================================

def match_veps(x0: float, eps: float, lo: float = BISECT_LOG10_LO, hi: float = BISECT_LOG10_HI,
               iters: int = BISECT_ITERS, **opcoes) -> PhiSolution:
    """
    Bissecção em log10(veps) até eps_of_veps(veps) = eps. As `opcoes`
    (mu_max, step, tail_tol, pythagoras_tol) seguem para cada solve_psi.
    """
    if not (0 < eps < 0.5):
        raise DominioError(f"eps deve estar em (0, 1/2) (atual: {eps})")

    sol_lo, sol_hi = solve_psi(x0, 10.0 ** lo, **opcoes), solve_psi(x0, 10.0 ** hi, **opcoes)
    if not (sol_lo.eps <= eps <= sol_hi.eps):
        raise BracketError(f"eps={eps:.3e} fora do alcance de eps(veps) para x0={x0}",
                           intervalo=(10.0 ** lo, 10.0 ** hi),
                           varredura=[(sol_lo.veps, sol_lo.eps), (sol_hi.veps, sol_hi.eps)])

    sol = sol_lo
    for _ in range(iters):
        meio = 0.5 * (lo + hi)
        sol = solve_psi(x0, 10.0 ** meio, **opcoes)
        if sol.eps < eps:
            lo = meio
        else:
            hi = meio
        if hi - lo < 1e-14 or abs(sol.eps / eps - 1.0) < 1e-14:
            break
    return sol


def delta_star_at(x0: float, eps: float, **opcoes) -> float:
    """Delta*(eps) exato: psi(x0)/||psi|| no veps que reproduz eps"""
    return match_veps(x0, eps, **opcoes).delta_star


def delta_star_asymptotic(x0: float, eps: float, veps: Optional[float] = None) -> float:
    """
    C*(x0) eps^gamma* para x0 > 1; (sqrt2/pi) eps |ln eps| para x0 = 1.
    Em x0 = 1, com `veps`, usa |ln veps_hat| no lugar de |ln eps|.
    """
    if x0 > 1:
        return c_star(x0) * eps ** gamma_star(x0)
    log_abs = abs(math.log(veps / math.sqrt(2.0 * math.pi))) if veps else abs(math.log(eps))
    return math.sqrt(2.0) / math.pi * eps * log_abs


def _tarefa_delta_star(args: Tuple[float, float, Dict[str, Any]]) -> Tuple[float, float, float]:
    x0, eps, opcoes = args
    sol = match_veps(x0, eps, **opcoes)
    return eps, sol.veps, sol.delta_star


def delta_star_curve(x0: float, eps_list: Sequence[float], workers: int = WORKERS,
                     opcoes: Optional[Dict[str, Any]] = None) -> pd.DataFrame:
    """Tabela eps, veps, delta_star, asymptotic_value, ratio, local_slope"""
    eps_list = sorted(float(e) for e in eps_list)
    opcoes = dict(opcoes or {})
    resultados = executar_em_paralelo(_tarefa_delta_star, [(x0, e, opcoes) for e in eps_list],
                                      workers=workers, descricao=f"Delta* x0={x0}")
    linhas = []
    for eps, veps, ds in resultados:
        assint = delta_star_asymptotic(x0, eps)
        linhas.append({"eps": eps, "veps": veps, "delta_star": ds,
                       "asymptotic_value": assint, "ratio": ds / assint})
    df = Formatters.tabela(linhas, COLUNAS_CURVA)
    if len(df) >= 2:
        df["local_slope"] = np.gradient(np.log(df["delta_star"].to_numpy()),
                                        np.log(df["eps"].to_numpy()))
    return df


@dataclass(frozen=True, eq=False)
class PowerLawFit:
    x0: float
    slope: float
    intercept: float
    eps: np.ndarray
    delta_star: np.ndarray
    local_slopes: np.ndarray
    table: pd.DataFrame = field(repr=False, default=None)

    def __float__(self) -> float:
        return self.slope


def powerlaw_fit(x0: float, eps_decades: Sequence[float], workers: int = WORKERS,
                 opcoes: Optional[Dict[str, Any]] = None) -> PowerLawFit:
    """Inclinação de mínimos quadrados de ln Delta* contra ln eps"""
    eps = np.sort(np.asarray(eps_decades, dtype=float))
    if eps.size < 2 or math.log10(eps[-1] / eps[0]) < 4 - 1e-9:
        raise DominioError("o ajuste exige pelo menos 4 décadas de eps")
    df = delta_star_curve(x0, eps, workers, opcoes)
    log_e, log_d = np.log(df["eps"].to_numpy()), np.log(df["delta_star"].to_numpy())
    slope, intercept = np.polyfit(log_e, log_d, 1)
    ajuste = PowerLawFit(x0=float(x0), slope=float(slope), intercept=float(intercept),
                         eps=df["eps"].to_numpy(), delta_star=df["delta_star"].to_numpy(),
                         local_slopes=df["local_slope"].to_numpy(), table=df)
    logger.info(f"✅ lei de potência x0={x0}: inclinação {slope:.5f} "
                f"(gamma*={gamma_star(x0):.5f}), locais {np.round(ajuste.local_slopes, 4).tolist()}")
    return ajuste

# ===============================================
# FUNÇÃO EXTREMAL
# ===============================================

class PhiExtremal:
    """phi_eps = eps psi / ||psi||_2 = psi / ||psi||"""

    def __init__(self, sol: PhiSolution):
        self.sol = sol
        self.escala = 1.0 / sol.norm_hardy
        psi0, l2sq, hsq, _ = _integrais(sol.grid)
        self.norm_l2 = self.escala * math.sqrt(l2sq)
        self.norm_hardy = self.escala * math.sqrt(hsq)
        self.value_at_x0 = self.escala * psi0

    def __call__(self, z):
        return self.escala * psi_value(self.sol, z)

    def evaluate(self, z):
        return self(z)


def phi_extremal(sol: PhiSolution) -> PhiExtremal:
    phi = PhiExtremal(sol)
    desvios = {
        "norm_l2/eps": phi.norm_l2 / sol.eps - 1.0,
        "norm_hardy": phi.norm_hardy - 1.0,
        "phi(x0)/Delta*": phi.value_at_x0 / sol.delta_star - 1.0,
    }
    if max(abs(v) for v in desvios.values()) > 1e-6:
        raise ConvergenciaError("função extremal fora das normas esperadas", diagnostico=desvios)
    return phi

# ===============================================
# FORMAS ASSINTÓTICAS
# ===============================================

def _a2(x0: float) -> float:
    return math.sqrt(x0 * math.asin(1.0 / x0) / (2.0 * (x0 * x0 - 1.0))) / math.pi


def _a3(x0: float) -> float:
    return math.sqrt(x0 * math.acos(1.0 / x0) / (2.0 * (x0 * x0 - 1.0))) / math.pi


def _veps_hat(veps: float) -> float:
    return veps / math.sqrt(2.0 * math.pi)


def psi_asymptotic(x0: float, z: Union[float, complex], veps: float) -> Union[float, complex]:
    """Forma assintótica de psi_veps(z) quando veps -> 0"""
    eh = _veps_hat(veps)
    if x0 > 1:
        a_z = alpha(z)
        beta = (_alpha_real(x0) + a_z) / math.pi
        valor = (r_factor(x0) * r_factor(z) * cmath.exp(-2.0 * beta * math.log(eh))
                 / (2.0 * math.pi * cmath.sin(math.pi * beta)))
    elif complex(z) == 1:
        return 2.0 * math.log(veps) ** 2 / math.pi ** 2
    else:
        a_z = alpha(z)
        valor = (r_factor(z) * math.sqrt(abs(math.log(eh))) * cmath.exp(-2.0 * a_z / math.pi * math.log(eh))
                 / (math.pi * cmath.sin(a_z)))
    return valor.real if complex(z).imag == 0 else valor


def l2_norm_asymptotic(x0: float, veps: float) -> float:
    if x0 > 1:
        return _a2(x0) * _veps_hat(veps) ** (-_beta0(x0))
    return math.sqrt(2.0) * abs(math.log(veps)) / math.pi


def hardy_norm_asymptotic(x0: float, veps: float) -> float:
    """Assintótica de veps·||psi||"""
    if x0 > 1:
        return _a3(x0) * _veps_hat(veps) ** (-_beta0(x0))
    return math.sqrt(2.0 * abs(math.log(veps))) / math.pi


def bridge_E0_E1(x0: float, veps: float) -> Tuple[float, float]:
    """
    (E0, E1) com psi(x0)/||psi|| ~ E0(veps) e ||psi||_2/||psi|| ~ E1(veps);
    Delta*(eps) ~ E0(E1^-1(eps)).
    """
    if x0 > 1:
        b = _beta0(x0)
        e1 = veps * _a2(x0) / _a3(x0)
        e0 = (veps * r_factor(x0).real ** 2 * _veps_hat(veps) ** (-b)
              / (2.0 * math.pi * math.sin(math.pi * b) * _a3(x0)))
        return e0, e1
    log_abs = abs(math.log(veps))
    return math.sqrt(2.0) / math.pi * veps * log_abs ** 1.5, veps * math.sqrt(log_abs)

# ===============================================
# NORMAS H_p
# ===============================================

def hp_norm(f, p: float, limite: int = 500) -> float:
    """
    ||f||_Hp^2 = (p/pi) int_0^inf |f(e^{i pi/(2p)} w)|^2 / |e^{i pi/(2p)} w + 1|^2 dw,
    que é (1/pi) int_0^inf |F_p[f](iy)|^2 dy após a troca y = w^p.
    `f` é um avaliador complexo (função ou objeto com `evaluate`).
    """
    if p < 1:
        raise DominioError(f"p deve ser >= 1 (atual: {p})")
    avaliar: Callable = getattr(f, "evaluate", f)
    rot = cmath.exp(1j * math.pi / (2.0 * p))

    def integrando(w):
        z = rot * w
        return abs(avaliar(z)) ** 2 / abs(z + 1.0) ** 2

    valor, erro = integrate.quad(integrando, 0.0, math.inf, limit=limite)
    if erro > 1e-6 * max(valor, 1e-300):
        raise QuadraturaError(f"norma H_p não convergiu (p={p})", estimativa=erro)
    return math.sqrt(p / math.pi * valor)
