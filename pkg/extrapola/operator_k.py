# ===============================================
# ARQUIVO: extrapola/operator_k.py
# Operadores discretizados: K (núcleo 1/(x+y) em [0,1]), Lambda (Laplace
# finita), par da transformada u e o resíduo do operador diferencial L
# ===============================================

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .core.config import (FD_STEP, GRID_NODES, LOG_GRID_SPAN, TRANSFORM_MU_MAX,
                          TRANSFORM_MU_STEP, TRANSFORM_TAIL_SHARE)
from .core.erros import DominioError
from .special_fn import eigenvalue_nu, eigfun_u_matrix, eigfun_u_real

logger = logging.getLogger(__name__)

FAMILIAS = ("legendre", "log-legendre")

# piso da escala por ponto do resíduo de L, relativo ao maior |u|
PISO_ESCALA_L = 0.1

# ===============================================
# MALHAS EM [0,1]
# ===============================================

def unit_quadrature(n: int = GRID_NODES, family: str = "legendre",
                    span: float = LOG_GRID_SPAN):
    """
    Nós crescentes em (0,1) e pesos positivos com soma 1.

    ``legendre``: Gauss-Legendre em [0,1].
    ``log-legendre``: Gauss-Legendre em v = -ln x sobre [0, span], pesos e^-v·w;
    resolve o fator x^(-1/2) das autofunções junto de x = 0.
    """
    if n < 2:
        raise DominioError("a malha precisa de pelo menos 2 nós")
    t, w = np.polynomial.legendre.leggauss(n)
    if family == "legendre":
        nos, pesos = 0.5 * (t + 1.0), 0.5 * w
    elif family == "log-legendre":
        v = 0.5 * span * (t + 1.0)
        nos, pesos = np.exp(-v), 0.5 * span * w * np.exp(-v)
        ordem = np.argsort(nos)
        nos, pesos = nos[ordem], pesos[ordem]
    else:
        raise DominioError(f"família de quadratura desconhecida: {family} (opções: {FAMILIAS})")
    return nos, pesos


@dataclass(frozen=True, eq=False)
class UnitGridFunction:
    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    family: str = "legendre"

    @classmethod
    def from_callable(cls, f: Callable, n: int = GRID_NODES, family: str = "legendre",
                      span: float = LOG_GRID_SPAN) -> "UnitGridFunction":
        nos, pesos = unit_quadrature(n, family, span)
        valores = np.asarray(f(nos))
        if valores.shape != nos.shape:
            valores = np.array([f(x) for x in nos])
        return cls(nos, pesos, valores, family)

    @classmethod
    def constant(cls, c: float = 1.0, n: int = GRID_NODES, family: str = "legendre",
                 span: float = LOG_GRID_SPAN) -> "UnitGridFunction":
        nos, pesos = unit_quadrature(n, family, span)
        return cls(nos, pesos, np.full(nos.shape, float(c)), family)

    def with_values(self, values) -> "UnitGridFunction":
        values = np.asarray(values)
        if values.shape != self.nodes.shape:
            raise DominioError("valores incompatíveis com a malha")
        return replace(self, values=values)

    def __add__(self, other: "UnitGridFunction") -> "UnitGridFunction":
        return self.with_values(self.values + other.values)

    def __mul__(self, c: float) -> "UnitGridFunction":
        return self.with_values(c * self.values)

    __rmul__ = __mul__

# ===============================================
# OPERADORES K E LAMBDA
# ===============================================

def apply_K(f: UnitGridFunction, x):
    """(Kf)(x) = int_0^1 f(y)/(x+y) dy; x real > 0 ou complexo com Re x > 0"""
    xa = np.asarray(x)
    if np.any(np.real(xa) <= 0):
        raise DominioError("K exige Re x > 0")
    kernel = 1.0 / (xa[..., None] + f.nodes)
    resultado = kernel @ (f.weights * f.values)
    return resultado.item() if resultado.ndim == 0 else resultado


def apply_Lambda(f: UnitGridFunction, t):
    """(Lambda f)(t) = int_0^1 f(x) e^(-x t) dx, t >= 0"""
    ta = np.asarray(t, dtype=float)
    if np.any(ta < 0):
        raise DominioError("Lambda exige t >= 0")
    resultado = np.exp(-ta[..., None] * f.nodes) @ (f.weights * f.values)
    return resultado.item() if resultado.ndim == 0 else resultado


def gram_K(f: UnitGridFunction, g: UnitGridFunction) -> float:
    """(f, Kg)_2 na malha de f"""
    return float(np.sum(f.weights * f.values * apply_K(g, f.nodes)))


def l2_norm(f: UnitGridFunction) -> float:
    return float(np.sqrt(np.sum(f.weights * np.abs(f.values) ** 2)))


def eigen_residual(mu: float, grid: Optional[UnitGridFunction] = None,
                   inner: Optional[UnitGridFunction] = None) -> float:
    """
    ||K u - nu u||_2 / ||u||_2 para u = u(.;mu), medido na malha `grid` com K
    aplicado pela quadratura `inner` (log-legendre fina por padrão).
    """
    if grid is None:
        grid = UnitGridFunction.constant(n=GRID_NODES)
    if inner is None:
        inner = UnitGridFunction.constant(n=400, family="log-legendre", span=60.0)
    u_inner = inner.with_values(eigfun_u_matrix(inner.nodes, [mu])[:, 0])
    u_fora = eigfun_u_matrix(grid.nodes, [mu])[:, 0]
    diferenca = apply_K(u_inner, grid.nodes) - eigenvalue_nu(mu) * u_fora
    return l2_norm(grid.with_values(diferenca)) / l2_norm(grid.with_values(u_fora))

# ===============================================
# TRANSFORMADA U
# ===============================================

@dataclass(frozen=True, eq=False)
class MuQuadrature:
    """Simpson composto com passo fixo em [0, mu_max]; mu_max arredondado para cima"""
    mu_nodes: np.ndarray
    weights: np.ndarray
    mu_max: float
    step: float

    @classmethod
    def build(cls, mu_max: float = TRANSFORM_MU_MAX, step: float = TRANSFORM_MU_STEP) -> "MuQuadrature":
        nos, pesos = simpson_rule(mu_max, step)
        return cls(nos, pesos, float(nos[-1]), step)

    @property
    def spectral_weight(self) -> np.ndarray:
        """mu tanh(pi mu), a densidade da medida espectral"""
        return self.mu_nodes * np.tanh(np.pi * self.mu_nodes)


def simpson_rule(mu_max: float, step: float):
    if mu_max <= 0 or step <= 0:
        raise DominioError("mu_max e step devem ser positivos")
    n = int(math.ceil(mu_max / step - 1e-9))
    n += n % 2
    n = max(n, 2)
    nos = np.arange(n + 1) * step
    pesos = np.full(n + 1, 2.0)
    pesos[1::2] = 4.0
    pesos[0] = pesos[-1] = 1.0
    return nos, pesos * step / 3.0


@dataclass(frozen=True, eq=False)
class UTransform:
    mu_grid: MuQuadrature
    coefficients: np.ndarray
    tail_estimate: float = 0.0

    def plancherel(self) -> float:
        """sum |f^(mu)|^2 mu tanh(pi mu) w(mu) ~ ||f||_2^2"""
        g = self.mu_grid
        return float(np.sum(g.weights * g.spectral_weight * np.abs(self.coefficients) ** 2))


def u_forward(f: UnitGridFunction, grid: Optional[MuQuadrature] = None) -> UTransform:
    """f^(mu) = int_0^1 f(x) u(x;mu) dx em cada nó de `grid`"""
    if grid is None:
        grid = MuQuadrature.build()
    U = eigfun_u_matrix(f.nodes, grid.mu_nodes)
    coef = (f.weights * f.values) @ U

    norma2 = l2_norm(f) ** 2
    cauda = float(abs(coef[-1]) ** 2 * grid.mu_max)
    if norma2 > 0 and cauda > TRANSFORM_TAIL_SHARE * norma2:
        logger.warning(f"⚠️ transformada u truncada em mu_max={grid.mu_max:.3g}: cauda estimada "
                       f"{cauda:.2e} contra ||f||^2={norma2:.3e}")
    return UTransform(grid, coef, cauda)


def u_inverse(tf: UTransform, x):
    """int_0^mu_max f^(mu) u(x;mu) mu tanh(pi mu) dmu pela quadratura da malha"""
    g = tf.mu_grid
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((xa <= 0) | (xa > 1)):
        raise DominioError("u_inverse exige x em (0,1]")
    U = eigfun_u_matrix(xa, g.mu_nodes)
    valores = U @ (g.weights * g.spectral_weight * tf.coefficients)
    valores = np.real_if_close(valores)
    return float(valores[0]) if np.ndim(x) == 0 else valores

# ===============================================
# OPERADOR DIFERENCIAL L
# ===============================================

def _segunda_diferenca(u: Callable[[float], float], x: float, h: float) -> float:
    """-(p u')' + 2x^2 u com p = x^2 (1 - x^2), diferenças centradas"""
    def p(s):
        return s * s * (1.0 - s * s)
    u0, um, up = u(x), u(x - h), u(x + h)
    fluxo = (p(x + h / 2) * (up - u0) - p(x - h / 2) * (u0 - um)) / (h * h)
    return -fluxo + 2.0 * x * x * u0


def diffop_L_residual(mu: float, pontos, h: float = FD_STEP) -> float:
    """
    max_j |L u - (mu^2 + 1/4) u|(x_j) / s_j nos pontos x_j, com extrapolação
    de Richardson sobre os passos h e h/2. A escala é relativa por ponto,
    s_j = max(|u(x_j)|, PISO_ESCALA_L max_k |u(x_k)|): u oscila em (0,1) e
    pode se anular num ponto.
    """
    sondas = np.atleast_1d(np.asarray(pontos, dtype=float))
    if np.any((sondas - 2 * h <= 0) | (sondas + 2 * h >= 1)):
        raise DominioError("pontos devem ficar longe das extremidades de (0,1)")
    lam = mu * mu + 0.25

    def u(s):
        return eigfun_u_real(s, mu)

    residuos, valores = [], []
    for x in sondas:
        grosso = _segunda_diferenca(u, x, h)
        fino = _segunda_diferenca(u, x, h / 2)
        Lu = (4.0 * fino - grosso) / 3.0
        ux = u(x)
        valores.append(abs(ux))
        residuos.append(abs(Lu - lam * ux))
    valores = np.asarray(valores)
    escalas = np.maximum(valores, PISO_ESCALA_L * valores.max())
    return float(np.max(np.asarray(residuos) / escalas))
