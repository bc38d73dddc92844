# ===============================================
# ARQUIVO: extrapola/special_fn.py
# Funções especiais do problema: alpha(z), R(z), autofunções u(.;mu),
# autovalores nu(mu) e as constantes gamma*, C*
# ===============================================

"""
Funções especiais do núcleo 1/(x+y) em [0,1].

Domínio Omega = {Re z > 0} menos o segmento [0,1]. Todas as potências e
logaritmos complexos usam o ramo principal.

As autofunções são avaliadas por três caminhos:

- ``hypergeometric``: forma de Pfaff da representação hipergeométrica,
  u(z;mu) = z^-1 · 2F1(1/4+i mu/2, 1/4-i mu/2; 1; 1 - z^-2), via mpmath, com
  precisão de trabalho crescendo com mu;
- ``euler_integral``: integral de Euler por tanh-sinh (mpmath.quad), usada como
  verificação cruzada para mu moderado;
- ``asymptotic``: u0(z;mu) = R(z) e^{mu alpha(z)} / sqrt(2 pi mu), válida em Omega.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import mpmath
import numpy as np

from .core.config import DPS_POR_MU, MPMATH_DPS, MU_SWITCH, REAL_TOL
from .core.erros import DominioError, QuadraturaError

logger = logging.getLogger(__name__)

Numero = Union[float, complex]

METODOS_U = ("auto", "hypergeometric", "euler_integral", "asymptotic")

# ===============================================
# TIPOS
# ===============================================

@dataclass(frozen=True)
class AsymptoticParams:
    """Parâmetros assintóticos para um x0 e um ponto de avaliação z"""
    z: complex
    alpha: complex
    r_factor: complex
    beta: complex
    x0: float
    gamma_star: float
    c_star: Optional[float] = None


@dataclass(frozen=True)
class EigenfunctionSample:
    mu: float
    x_or_z: Numero
    value: complex
    method: str

# ===============================================
# DOMÍNIO
# ===============================================

def _no_segmento(z: complex) -> bool:
    return z.imag == 0 and 0.0 <= z.real <= 1.0


def _checar_omega(z: Numero, nome: str = "z") -> complex:
    z = complex(z)
    if not (cmath.isfinite(z) and z.real > 0) or _no_segmento(z):
        raise DominioError(f"{nome}={z} fora de Omega (exige Re z > 0 e z fora de [0,1])")
    return z


def _checar_x0(x0: float) -> float:
    if not math.isfinite(x0) or x0 < 1:
        raise DominioError(f"x0 deve ser >= 1 (atual: {x0})")
    return float(x0)

# ===============================================
# ALPHA, R, NU
# ===============================================

def alpha(z: Numero) -> complex:
    """alpha(z) = arccos(1/z), ramo principal; Re alpha em (0, pi/2) em Omega"""
    z = _checar_omega(z)
    return complex(np.arccos(1.0 / z))


def _alpha_real(x0: float) -> float:
    # limite contínuo em x0 = 1 (alpha -> 0)
    return math.acos(1.0 / x0)


def r_factor(z: Numero) -> complex:
    """R(z) = z^(-1/2) (z^2 - 1)^(-1/4)"""
    z = _checar_omega(z)
    if z == 1:
        raise DominioError("R(z) é singular em z = 1")
    return cmath.exp(-0.5 * cmath.log(z) - 0.25 * cmath.log(z * z - 1.0))


def eigenvalue_nu(mu):
    """nu(mu) = pi / cosh(pi mu), escrito sem overflow para mu grande"""
    mu = np.asarray(mu, dtype=float)
    if np.any(mu < 0):
        raise DominioError("mu deve ser >= 0")
    e = np.exp(-np.pi * mu)
    valor = 2.0 * np.pi * e / (1.0 + e * e)
    return float(valor) if valor.ndim == 0 else valor


def beta_exponent(x0: float, z: Numero) -> complex:
    """beta = (alpha(x0) + alpha(z)) / pi"""
    x0 = _checar_x0(x0)
    return (_alpha_real(x0) + alpha(z)) / math.pi


def gamma_star(x0: float) -> float:
    """Expoente da lei de potência: (2/pi) arcsin(1/x0)"""
    x0 = _checar_x0(x0)
    return 2.0 / math.pi * math.asin(1.0 / x0)


def c_star(x0: float) -> float:
    """Constante C*(x0) da assintótica Delta* ~ C* eps^gamma*; só para x0 > 1"""
    if not math.isfinite(x0) or x0 <= 1:
        raise DominioError(f"C* exige x0 > 1 (atual: {x0}); em x0 = 1 use o ramo (sqrt2/pi) eps|ln eps|")
    s = math.asin(1.0 / x0)
    c = math.acos(1.0 / x0)
    return 0.5 * math.sqrt(x0 / (2.0 * (x0 * x0 - 1.0) * s)) * (2.0 * math.pi * s / c) ** (c / math.pi)


def asymptotic_params(x0: float, z: Numero) -> AsymptoticParams:
    x0 = _checar_x0(x0)
    a = alpha(z)
    return AsymptoticParams(
        z=complex(z),
        alpha=a,
        r_factor=r_factor(z),
        beta=(_alpha_real(x0) + a) / math.pi,
        x0=x0,
        gamma_star=gamma_star(x0),
        c_star=c_star(x0) if x0 > 1 else None,
    )


def hp_constant(p: float) -> float:
    """C_p com C_p^2 = p/(pi a_p) + pi p a_p / 6, a_p = cos(pi/(2p)); infinito em p = 1"""
    if p < 1:
        raise DominioError(f"p deve ser >= 1 (atual: {p})")
    if p == 1:
        return math.inf
    a = math.cos(math.pi / (2.0 * p))
    return math.sqrt(p / (math.pi * a) + math.pi * p * a / 6.0)


def hardy_reverse_constant(p: float) -> float:
    """Constante da desigualdade reversa ||f||_2 <= 2 sqrt(2 pi / p) ||f||_hp"""
    if p < 1:
        raise DominioError(f"p deve ser >= 1 (atual: {p})")
    return 2.0 * math.sqrt(2.0 * math.pi / p)

# ===============================================
# AUTOFUNÇÕES
# ===============================================

def _dps(mu: float, extra: float = 0.0) -> int:
    return MPMATH_DPS + int(math.ceil(DPS_POR_MU * mu + extra))


def _mp_ponto(z: complex):
    return mpmath.mpf(z.real) if z.imag == 0 else mpmath.mpc(z.real, z.imag)


@lru_cache(maxsize=250_000)
def _u_hipergeometrica(z: complex, mu: float) -> complex:
    with mpmath.workdps(_dps(mu)):
        zz = _mp_ponto(z)
        a = mpmath.mpc(0.25, mu / 2)
        b = mpmath.mpc(0.25, -mu / 2)
        valor = mpmath.hyp2f1(a, b, 1, 1 - 1 / zz ** 2) / zz
        return complex(valor)


@lru_cache(maxsize=250_000)
def _log_u_real(x0: float, mu: float) -> float:
    # x0 >= 1 real: série de termos positivos, u > 0
    if x0 == 1.0:
        return 0.0
    with mpmath.workdps(_dps(mu)):
        a = mpmath.mpc(0.25, mu / 2)
        b = mpmath.mpc(0.25, -mu / 2)
        w = 1 - 1 / mpmath.mpf(x0) ** 2
        valor = mpmath.re(mpmath.hyp2f1(a, b, 1, w)) / x0
        return float(mpmath.log(valor))


def _u_euler(z: complex, mu: float) -> complex:
    with mpmath.workdps(_dps(mu, extra=10)):
        zz = _mp_ponto(z)
        a = mpmath.mpc(0.25, mu / 2)
        b = mpmath.mpc(0.75, mu / 2)
        w = 1 - zz ** 2

        def integrando(t):
            return t ** (b - 1) * (1 - t) ** (-b) * (1 - w * t) ** (-a)

        integral, erro = mpmath.quad(integrando, [0, 1], error=True, maxdegree=10)
        escala = abs(integral)
        if not escala or erro > 1e-10 * escala:
            raise QuadraturaError(f"integral de Euler não convergiu (z={z}, mu={mu})",
                                  estimativa=float(erro / escala) if escala else float(erro))
        valor = zz ** mpmath.mpc(-0.5, mu) * mpmath.sin(mpmath.pi * b) / mpmath.pi * integral
        return complex(valor)


def _u_assintotica(z: complex, mu: float) -> complex:
    if mu <= 0:
        raise DominioError("ramo assintótico exige mu > 0")
    return r_factor(z) * cmath.exp(mu * alpha(z)) / math.sqrt(2.0 * math.pi * mu)


def eigfun_u(point: Numero, mu: float, method: str = "auto",
             mu_switch: float = MU_SWITCH) -> complex:
    """
    Autofunção u(point; mu) do núcleo 1/(x+y) em [0,1], normalizada por u(1;mu) = 1.

    `point` real em (0,1] ou complexo em Omega. No modo ``auto`` pontos de (0,1]
    sempre usam a forma hipergeométrica (a fórmula assintótica só vale em Omega);
    em Omega o ramo assintótico assume para mu > mu_switch.
    """
    if method not in METODOS_U:
        raise DominioError(f"método desconhecido: {method} (opções: {METODOS_U})")
    if mu < 0 or not math.isfinite(mu):
        raise DominioError(f"mu deve ser >= 0 (atual: {mu})")
    z = complex(point)
    if not (cmath.isfinite(z) and z.real > 0):
        raise DominioError(f"ponto {point} fora do domínio (0,1] ∪ Omega")
    no_segmento = _no_segmento(z)

    if z == 1:
        return complex(1.0)

    if method == "auto":
        method = "asymptotic" if (not no_segmento and mu > mu_switch) else "hypergeometric"
    if method == "asymptotic":
        if no_segmento:
            raise DominioError("ramo assintótico não se aplica a pontos de (0,1]")
        return _u_assintotica(z, mu)
    if method == "euler_integral":
        valor = _u_euler(z, float(mu))
    else:
        valor = _u_hipergeometrica(z, float(mu))

    if no_segmento:
        if abs(valor.imag) > REAL_TOL * abs(valor):
            logger.warning(f"⚠️ u({z.real:.6g};{mu:.6g}) com parte imaginária relativa "
                           f"{abs(valor.imag) / abs(valor):.2e} > {REAL_TOL:.0e}; projetando na parte real")
        return complex(valor.real, 0.0)
    return valor


def eigfun_sample(point: Numero, mu: float, method: str = "auto",
                  mu_switch: float = MU_SWITCH) -> EigenfunctionSample:
    if method == "auto":
        z = complex(point)
        usado = "asymptotic" if (not _no_segmento(z) and mu > mu_switch) else "hypergeometric"
    else:
        usado = method
    return EigenfunctionSample(mu=float(mu), x_or_z=point,
                               value=eigfun_u(point, mu, usado, mu_switch), method=usado)


def eigfun_u_real(x: float, mu: float) -> float:
    """u(x;mu) real para x em (0,1] ou x >= 1, sempre pela forma exata"""
    return eigfun_u(float(x), mu, method="hypergeometric").real


def eigfun_u_table(x0: float, mu_nodes) -> np.ndarray:
    """log u(x0; mu_k) para x0 >= 1 real (u > 0); valores exatos em todos os nós"""
    x0 = _checar_x0(x0)
    return np.array([_log_u_real(x0, float(m)) for m in np.asarray(mu_nodes, dtype=float)])


def eigfun_u_matrix(x_nodes, mu_nodes) -> np.ndarray:
    """Matriz U[i, k] = u(x_i; mu_k) para x_i reais (exata)"""
    x_nodes = np.asarray(x_nodes, dtype=float)
    mu_nodes = np.asarray(mu_nodes, dtype=float)
    matriz = np.empty((x_nodes.size, mu_nodes.size))
    for k, m in enumerate(mu_nodes):
        for i, x in enumerate(x_nodes):
            matriz[i, k] = eigfun_u_real(x, m)
    return matriz
