# ===============================================
# ARQUIVO: extrapola/local_caprini.py
# Problema local: min ||f - f0||_2 com f(x0) = f0(x0) + delta sobre CMFs,
# iteração de suporte de Caprini, certificado de otimalidade, solução
# fechada para f0 = e^-x e as inclinações E+/E-
# ===============================================

"""
Problema local de pior caso.

Para f0 completamente monótona e x0 >= 1, o minimizador f* de ||f - f0||_2
com f(x0) = f0(x0) + delta é uma soma finita de exponenciais. Ele é
caracterizado pela função de Caprini

    C(t) = int_0^1 e^{-xt} (f*(x) - f0(x)) dx

via o certificado C^(t) = C(t) - m e^{-x0 t} >= 0 para todo t >= 0, com
igualdade nos átomos do suporte e m = (1/(f0(x0)+delta)) int f*(f* - f0).

O algoritmo só toca f0 por f0(x), (Lambda f0)(t) e ||f0||_2^2 (BlackBoxCmf).
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import optimize, special

from .core.config import (CERT_GRID, CERT_TOL, CLUSTER_TOL, LOCAL_X_NODES, MAX_OUTER,
                          MERGE_TOL, PRUNE_REL, SLOPE_DELTA, TAU_SCAN_POINTS, t_max_padrao)
from .core.erros import BracketError, ConvergenciaError, DominioError, InviavelError
from .core.utils import Formatters
from .operator_k import unit_quadrature

logger = logging.getLogger(__name__)

# teto da ampliação do intervalo de tau na solução fechada
TAU_MAX_LIMITE = 1e6

# ===============================================
# NÚCLEO DE GRAM g(s) = int_0^1 e^{-xs} dx
# ===============================================

def gram_g(s):
    """g(s) = (1 - e^-s)/s, g(0) = 1"""
    return special.exprel(-np.asarray(s, dtype=float))


def gram_g_linha(s):
    """g'(s) = (e^-s - g(s))/s, série de Taylor junto de 0"""
    s = np.asarray(s, dtype=float)
    pequeno = np.abs(s) < 1e-3
    seguro = np.where(pequeno, 1.0, s)
    direto = (np.exp(-seguro) - gram_g(seguro)) / seguro
    serie = -0.5 + s / 3.0 - s ** 2 / 8.0 + s ** 3 / 30.0 - s ** 4 / 144.0
    resultado = np.where(pequeno, serie, direto)
    return resultado.item() if resultado.ndim == 0 else resultado


def _vetorizar(funcao: Callable, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    valores = np.asarray(funcao(x), dtype=float)
    if valores.shape != x.shape:
        valores = np.vectorize(lambda v: float(funcao(v)))(x)
    return valores

# ===============================================
# MEDIDAS
# ===============================================

@dataclass(frozen=True, eq=False)
class CmfMeasure:
    """f(x) = sum a_j e^{-x t_j}, a_j > 0, t_j >= 0 distintos e ordenados"""
    t: np.ndarray
    a: np.ndarray

    @classmethod
    def from_atoms(cls, atomos: Sequence[Tuple[float, float]]) -> "CmfMeasure":
        if not atomos:
            raise DominioError("a medida precisa de pelo menos um átomo")
        t = np.array([float(p[0]) for p in atomos])
        a = np.array([float(p[1]) for p in atomos])
        if np.any(t < 0) or not np.all(np.isfinite(t)):
            raise DominioError("átomos exigem t >= 0 finito")
        if np.any(a <= 0):
            raise DominioError("pesos de uma medida positiva devem ser > 0")
        ordem = np.argsort(t)
        t, a = t[ordem], a[ordem]
        # átomos repetidos somam peso
        unicos, inverso = np.unique(t, return_inverse=True)
        return cls(unicos, np.bincount(inverso, weights=a))

    @classmethod
    def exponential(cls) -> "CmfMeasure":
        """f0(x) = e^-x"""
        return cls(np.array([1.0]), np.array([1.0]))

    @property
    def atoms(self) -> List[Tuple[float, float]]:
        return list(zip(self.t.tolist(), self.a.tolist()))

    @property
    def is_unit_exponential(self) -> bool:
        return self.t.size == 1 and self.t[0] == 1.0 and self.a[0] == 1.0

    def evaluate(self, x):
        """Avalia f em x real ou complexo"""
        xa = np.asarray(x)
        resultado = np.exp(-xa[..., None] * self.t) @ self.a
        return resultado.item() if resultado.ndim == 0 else resultado

    value = evaluate

    def laplace(self, t):
        """(Lambda f)(t) = sum a_j g(t + t_j)"""
        ta = np.asarray(t, dtype=float)
        resultado = gram_g(ta[..., None] + self.t) @ self.a
        return resultado.item() if resultado.ndim == 0 else resultado

    def laplace_deriv(self, t):
        ta = np.asarray(t, dtype=float)
        resultado = np.asarray(gram_g_linha(ta[..., None] + self.t)) @ self.a
        return resultado.item() if resultado.ndim == 0 else resultado

    def gram(self) -> np.ndarray:
        return gram_g(self.t[:, None] + self.t[None, :])

    @property
    def norm_sq(self) -> float:
        return float(self.a @ self.gram() @ self.a)

    def l2_norm(self) -> float:
        return math.sqrt(max(self.norm_sq, 0.0))

    def star_norm(self) -> float:
        """||sigma||_* = sum a_j/(t_j + 1), limitada por ||f||_2"""
        return float(np.sum(self.a / (self.t + 1.0)))


@dataclass(frozen=True, eq=False)
class BlackBoxCmf:
    """f0 dada apenas por f0(x), (Lambda f0)(t) e ||f0||_2^2"""
    value: Callable
    laplace: Callable
    norm_sq: float
    laplace_deriv: Optional[Callable] = None

    def evaluate(self, x):
        return self.value(x)

    def l2_norm(self) -> float:
        return math.sqrt(self.norm_sq)


Cmf = Union[CmfMeasure, BlackBoxCmf]


def _laplace_deriv(f0: Cmf, t):
    if getattr(f0, "laplace_deriv", None) is not None:
        return np.asarray(f0.laplace_deriv(t), dtype=float)
    t = np.asarray(t, dtype=float)
    h = 1e-6 * (1.0 + t)
    return (_vetorizar(f0.laplace, t + h) - _vetorizar(f0.laplace, np.maximum(t - h, 0.0))) \
        / (t + h - np.maximum(t - h, 0.0))

# ===============================================
# ESTADO E CERTIFICADO
# ===============================================

@dataclass(frozen=True, eq=False)
class CapriniState:
    f0: Cmf
    x0: float
    delta: float
    support: CmfMeasure
    m: float
    cert_min: float
    residual_l2: float
    history: Tuple[float, ...] = ()
    iterations: int = 0
    converged: bool = True
    method: str = "exchange"
    t_max: float = 0.0

    @property
    def target(self) -> float:
        return float(self.f0.value(self.x0)) + self.delta

    @property
    def constraint_gap(self) -> float:
        return abs(self.support.value(self.x0) - self.target)


def caprini_C(state: CapriniState, t):
    """C(t) = sum a_j g(t + t_j) - (Lambda f0)(t)"""
    ta = np.asarray(t, dtype=float)
    if np.any(ta < 0):
        raise DominioError("C(t) exige t >= 0")
    resultado = np.asarray(state.support.laplace(ta)) - _vetorizar(state.f0.laplace, ta)
    return resultado.item() if resultado.ndim == 0 else resultado


def certificate(state: CapriniState, t):
    """C^(t) = C(t) - m e^{-x0 t}"""
    ta = np.asarray(t, dtype=float)
    resultado = np.asarray(caprini_C(state, ta)) - state.m * np.exp(-state.x0 * ta)
    return resultado.item() if resultado.ndim == 0 else resultado


def certificate_deriv(state: CapriniState, t):
    ta = np.asarray(t, dtype=float)
    return (np.asarray(state.support.laplace_deriv(ta)) - _laplace_deriv(state.f0, ta)
            + state.m * state.x0 * np.exp(-state.x0 * ta))


def _malha_certificado(t_max: float, n: int = CERT_GRID) -> np.ndarray:
    return np.concatenate([[0.0], np.logspace(-6, math.log10(t_max), n - 1)])


def _minimo_global(estado: CapriniState, t_max: float, n: int = CERT_GRID) -> Tuple[float, float]:
    """(t_min, C^(t_min)) pela malha log-espaçada refinada com busca limitada"""
    tg = _malha_certificado(t_max, n)
    valores = certificate(estado, tg)
    k = int(np.argmin(valores))
    t_min, v_min = float(tg[k]), float(valores[k])
    if 0 < k < tg.size - 1:
        busca = optimize.minimize_scalar(lambda s: float(certificate(estado, s)),
                                         bounds=(tg[k - 1], tg[k + 1]), method="bounded",
                                         options={"xatol": 1e-13})
        if busca.success and busca.fun < v_min:
            t_min, v_min = float(busca.x), float(busca.fun)
    return t_min, v_min


def verify_certificate(state: CapriniState, n: int = CERT_GRID,
                       tol: float = CERT_TOL) -> Tuple[float, float, bool]:
    """(cert_min, max |C^(t_j)| nos átomos, aprovado); `tol` relativa a ||f0||_2^2"""
    t_max = state.t_max or t_max_padrao(state.x0)
    _, cert_min = _minimo_global(state, max(t_max, float(state.support.t.max()) * 1.5), n)
    nos_atomos = float(np.max(np.abs(certificate(state, state.support.t))))
    aprovado = cert_min >= -tol * state.f0.norm_sq and nos_atomos <= tol
    return cert_min, nos_atomos, aprovado


def certificate_trace(state: CapriniState, t_grid=None) -> pd.DataFrame:
    """Tabela t, C, C_hat"""
    if t_grid is None:
        t_grid = _malha_certificado(state.t_max or t_max_padrao(state.x0), 2000)
    t_grid = np.asarray(t_grid, dtype=float)
    return Formatters.tabela(pd.DataFrame({"t": t_grid, "C": caprini_C(state, t_grid),
                                           "C_hat": certificate(state, t_grid)}),
                             ["t", "C", "C_hat"])


class XQuadrature:
    """Gauss-Legendre em [0,1] com f0 amostrada; base das normas pontuais"""

    def __init__(self, f0: Cmf, n: int = LOCAL_X_NODES):
        self.x, self.w = unit_quadrature(n)
        self.raiz_w = np.sqrt(self.w)
        self.f0 = _vetorizar(f0.value, self.x)

    def residuo(self, suporte: CmfMeasure) -> float:
        diferenca = np.asarray(suporte.evaluate(self.x)) - self.f0
        return float(np.sqrt(np.sum(self.w * diferenca ** 2)))


def _montar_estado(f0: Cmf, x0: float, delta: float, suporte: CmfMeasure, quad: XQuadrature,
                   t_max: float, n_cert: int = CERT_GRID, **extras) -> CapriniState:
    alvo = float(f0.value(x0)) + delta
    c_atomos = np.asarray(suporte.laplace(suporte.t)) - _vetorizar(f0.laplace, suporte.t)
    m = float(suporte.a @ c_atomos) / alvo
    estado = CapriniState(f0=f0, x0=x0, delta=delta, support=suporte, m=m, cert_min=0.0,
                          residual_l2=quad.residuo(suporte), t_max=t_max, **extras)
    _, cert_min = _minimo_global(estado, t_max, n_cert)
    return replace(estado, cert_min=cert_min)

# ===============================================
# PASSO DE PESOS
# ===============================================

def _pesos_nnls(t: np.ndarray, quad: XQuadrature, x0: float, alvo: float) -> np.ndarray:
    """NNLS na matriz de quadratura com a restrição como linha de peso alto"""
    A = quad.raiz_w[:, None] * np.exp(-quad.x[:, None] * t[None, :])
    y = quad.raiz_w * quad.f0
    rho = 1e6 * max(1.0, float(np.abs(A).max()))
    linha = rho * np.exp(-x0 * t)
    pesos, _ = optimize.nnls(np.vstack([A, linha]), np.concatenate([y, [rho * alvo]]),
                             maxiter=50 * t.size)
    return pesos


def _pesos_kkt(t: np.ndarray, f0: Cmf, x0: float, alvo: float) -> Optional[np.ndarray]:
    """Sistema KKT exato com igualdade; None se mal condicionado ou sem solução positiva"""
    ativos = np.arange(t.size)
    while ativos.size:
        tt = t[ativos]
        G = gram_g(tt[:, None] + tt[None, :])
        v = np.exp(-x0 * tt)
        n = tt.size
        M = np.zeros((n + 1, n + 1))
        M[:n, :n], M[:n, n], M[n, :n] = G, -v, v
        if np.linalg.cond(M) > 1e13:
            return None
        rhs = np.concatenate([_vetorizar(f0.laplace, tt), [alvo]])
        sol = np.linalg.solve(M, rhs)
        a = sol[:n]
        if np.all(a > 0):
            pesos = np.zeros(t.size)
            pesos[ativos] = a
            return pesos
        ativos = np.delete(ativos, int(np.argmin(a)))
    return None


def _limpar_suporte(t: np.ndarray, a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Poda pesos desprezíveis e funde átomos a menos de MERGE_TOL"""
    manter = a > PRUNE_REL * a.sum()
    t, a = t[manter], a[manter]
    ordem = np.argsort(t)
    t, a = t[ordem], a[ordem]
    grupos_t, grupos_a = [t[0]], [a[0]]
    for ti, ai in zip(t[1:], a[1:]):
        if ti - grupos_t[-1] < MERGE_TOL:
            soma = grupos_a[-1] + ai
            grupos_t[-1] = (grupos_t[-1] * grupos_a[-1] + ti * ai) / soma
            grupos_a[-1] = soma
        else:
            grupos_t.append(ti)
            grupos_a.append(ai)
    return np.array(grupos_t), np.array(grupos_a)


def support_weights(t: np.ndarray, f0: Cmf, quad: XQuadrature, x0: float, alvo: float):
    a = _pesos_nnls(t, quad, x0, alvo)
    t, a = _limpar_suporte(t, a)
    exatos = _pesos_kkt(t, f0, x0, alvo)
    if exatos is not None:
        t, a = _limpar_suporte(t, exatos)
    return t, a

# ===============================================
# POLIMENTO FINAL
# ===============================================

def _agrupar(t: np.ndarray, a: np.ndarray, tol: float = CLUSTER_TOL):
    grupos: List[List[int]] = [[0]]
    for k in range(1, t.size):
        if t[k] - t[grupos[-1][-1]] < tol:
            grupos[-1].append(k)
        else:
            grupos.append([k])
    # grupo que contém t = 0 fica preso na origem
    novo_t = np.array([0.0 if t[g[0]] == 0 else np.average(t[g], weights=a[g]) for g in grupos])
    novo_a = np.array([a[g].sum() for g in grupos])
    return novo_t, novo_a


def _polir(estado: CapriniState, quad: XQuadrature, n_cert: int = CERT_GRID) -> Optional[CapriniState]:
    """Resolve C^(t_j) = 0, C^'(t_j) = 0 (t_j > 0) e a restrição por scipy.optimize.root"""
    t, a = _agrupar(estado.support.t, estado.support.a)
    f0, x0 = estado.f0, estado.x0
    alvo = estado.target
    livres = t > 0
    n, nl = t.size, int(livres.sum())

    def desempacotar(z):
        aa = z[:n]
        tt = t.copy()
        tt[livres] = z[n:n + nl]
        return aa, tt, z[-1]

    def equacoes(z):
        aa, tt, m = desempacotar(z)
        tt = np.maximum(tt, 0.0)
        c = gram_g(tt[:, None] + tt[None, :]) @ aa - _vetorizar(f0.laplace, tt) - m * np.exp(-x0 * tt)
        dl = (np.asarray(gram_g_linha(tt[:, None] + tt[None, :])) @ aa - _laplace_deriv(f0, tt)
              + m * x0 * np.exp(-x0 * tt))
        return np.concatenate([c, dl[livres], [aa @ np.exp(-x0 * tt) - alvo]])

    z0 = np.concatenate([a, t[livres], [estado.m]])
    try:
        sol = optimize.root(equacoes, z0, method="hybr", options={"xtol": 1e-14})
    except (ValueError, np.linalg.LinAlgError) as exc:
        logger.debug(f"🔍 polimento falhou: {exc}")
        return None
    if not sol.success:
        return None
    aa, tt, _ = desempacotar(sol.x)
    if np.any(aa <= 0) or np.any(tt < 0) or np.unique(np.round(tt, 12)).size != tt.size:
        return None
    suporte = CmfMeasure.from_atoms(list(zip(tt, aa)))
    return _montar_estado(f0, x0, estado.delta, suporte, quad, estado.t_max, n_cert,
                          history=estado.history, iterations=estado.iterations,
                          method=estado.method)

# ===============================================
# SOLVER ITERATIVO
# ===============================================

def _estado_trivial(f0: Cmf, x0: float, t_max: float) -> CapriniState:
    return CapriniState(f0=f0, x0=x0, delta=0.0, support=f0, m=0.0, cert_min=0.0,
                        residual_l2=0.0, history=(0.0,), t_max=t_max)


def solve_local(f0: Cmf, x0: float, delta: float, t_max: Optional[float] = None,
                max_outer: int = MAX_OUTER, cert_tol: float = CERT_TOL,
                cert_grid: int = CERT_GRID) -> CapriniState:
    """
    Iteração de troca: pesos no suporte atual (NNLS + KKT exato), mínimo
    global de C^ em [0, t_max], inserção, poda e fusão, até C^ >= -tol.
    Termina com o polimento de Newton sobre as condições de otimalidade.
    `cert_tol` é relativa a ||f0||_2^2; `cert_grid` é o tamanho da malha em t.
    """
    if not math.isfinite(x0) or x0 < 1:
        raise DominioError(f"x0 deve ser >= 1 (atual: {x0})")
    t_max = t_max or t_max_padrao(x0)
    valor0 = float(f0.value(x0))
    alvo = valor0 + delta
    if alvo <= 0:
        raise InviavelError(f"delta={delta:.6g} exige f(x0) <= 0", supremo=-valor0)
    if delta == 0 and isinstance(f0, CmfMeasure):
        return _estado_trivial(f0, x0, t_max)

    quad = XQuadrature(f0)
    tol = cert_tol * f0.norm_sq
    sementes = [0.0] + np.logspace(-2, math.log10(t_max), 24).tolist()
    if isinstance(f0, CmfMeasure):
        sementes += f0.t.tolist()
    t, a = support_weights(np.unique(sementes), f0, quad, x0, alvo)

    historico: List[float] = []
    estado = None
    for iteracao in range(1, max_outer + 1):
        estado = _montar_estado(f0, x0, delta, CmfMeasure(t, a), quad, t_max, cert_grid,
                                iterations=iteracao, history=tuple(historico))
        historico.append(estado.residual_l2)
        logger.debug(f"🔍 iteração {iteracao}: {t.size} átomos, resíduo {estado.residual_l2:.6e}, "
                     f"min C^ {estado.cert_min:.3e}")
        if estado.cert_min >= -tol:
            break
        t_novo, _ = _minimo_global(estado, t_max, cert_grid)
        if np.min(np.abs(t - t_novo)) < MERGE_TOL and len(historico) > 1 \
                and historico[-1] >= historico[-2]:
            # estagnado: o polimento decide
            break
        t, a = support_weights(np.append(t, t_novo), f0, quad, x0, alvo)

    estado = replace(estado, history=tuple(historico))
    polido = _polir(estado, quad, cert_grid)
    if polido is not None and polido.cert_min >= min(estado.cert_min, -tol) \
            and polido.residual_l2 <= estado.residual_l2 * (1 + 1e-9):
        estado = replace(polido, history=tuple(historico) + (polido.residual_l2,))

    if estado.cert_min < -tol:
        raise ConvergenciaError(
            f"certificado não atingido após {estado.iterations} iterações (min C^ = {estado.cert_min:.3e})",
            diagnostico={"cert_min": estado.cert_min, "tol": tol, "atomos": estado.support.atoms},
            estado=replace(estado, converged=False))
    logger.info(f"✅ problema local x0={x0}, delta={delta:.3e}: {estado.support.t.size} átomos, "
                f"resíduo {estado.residual_l2:.6e}")
    return estado

# ===============================================
# SOLUÇÃO FECHADA PARA f0 = e^-x
# ===============================================

def _sistema_positivo(tau: float, x0: float, alvo: float):
    """(a, b, m) com C^(0) = C^(tau) = 0 e a + b e^{-x0 tau} = alvo"""
    e = math.exp(-x0 * tau)
    M = np.array([[1.0, gram_g(tau), -1.0],
                  [gram_g(tau), gram_g(2 * tau), -e],
                  [1.0, e, 0.0]])
    rhs = np.array([gram_g(1.0), gram_g(tau + 1.0), alvo])
    return np.linalg.solve(M, rhs)


def _residuo_tau_positivo(tau: float, x0: float, alvo: float) -> float:
    a, b, m = _sistema_positivo(tau, x0, alvo)
    return (a * gram_g_linha(tau) + b * gram_g_linha(2 * tau) - gram_g_linha(tau + 1.0)
            + m * x0 * math.exp(-x0 * tau))


def _sistema_negativo(tau: float, x0: float, alvo: float):
    a = alvo * math.exp(x0 * tau)
    m = (a * gram_g(2 * tau) - gram_g(tau + 1.0)) * math.exp(x0 * tau)
    return a, m


def _residuo_tau_negativo(tau: float, x0: float, alvo: float) -> float:
    a, m = _sistema_negativo(tau, x0, alvo)
    return a * gram_g_linha(2 * tau) - gram_g_linha(tau + 1.0) + m * x0 * math.exp(-x0 * tau)


def _raiz_tau(residuo: Callable[[float], float], tau_max: float) -> float:
    """Varre s = tau - 1 em escala log a partir de 1e-12 e refina com brentq"""
    s_grid = np.logspace(-12, math.log10(tau_max - 1.0), TAU_SCAN_POINTS)
    varredura = []
    anterior = None
    for s in s_grid:
        r = residuo(1.0 + s)
        varredura.append((1.0 + s, r))
        if anterior is not None and np.sign(r) != np.sign(anterior[1]) and np.isfinite(r):
            s_raiz = optimize.brentq(lambda v: residuo(1.0 + v), anterior[0], s,
                                     xtol=1e-300, rtol=1e-14, maxiter=500)
            return 1.0 + s_raiz
        anterior = (s, r)
    raise BracketError("equação em tau sem troca de sinal", intervalo=(1.0, tau_max),
                       varredura=varredura)


def _raiz_tau_adaptativa(residuo: Callable[[float], float], tau_max: float) -> float:
    """_raiz_tau com o intervalo ampliado por 10 até TAU_MAX_LIMITE"""
    limite = tau_max
    while True:
        try:
            return _raiz_tau(residuo, limite)
        except BracketError:
            if limite >= TAU_MAX_LIMITE:
                raise
            limite = min(10.0 * limite, TAU_MAX_LIMITE)
            logger.debug(f"🔧 tau sem troca de sinal; intervalo ampliado para [1, {limite:.3g}]")


def exp_closed_form(x0: float, delta: float, tau_max: Optional[float] = None,
                    cert_grid: int = CERT_GRID) -> CapriniState:
    """
    Solução fechada para f0 = e^-x: suporte {0, tau} para delta > 0 e {tau}
    para delta em (-e^-x0, 0), tau > 1 raiz escalar.

    tau cresce sem limite quando f0(x0) + delta -> 1. A partir daí
    (f0(x0) + delta >= 1) toda CMF admissível fica acima de e^-x em [0,1] e a
    extremal é a constante f0(x0) + delta, suporte {0}.
    """
    if not math.isfinite(x0) or x0 < 1:
        raise DominioError(f"x0 deve ser >= 1 (atual: {x0})")
    f0 = CmfMeasure.exponential()
    tau_max = tau_max or t_max_padrao(x0)
    valor0 = math.exp(-x0)
    if delta == 0:
        return replace(_estado_trivial(f0, x0, tau_max), method="closed_form")
    if delta <= -valor0:
        raise InviavelError(f"delta={delta:.6g} fora de (-e^-x0, 0)", supremo=-valor0)
    alvo = valor0 + delta

    tau = 0.0
    if alvo >= 1.0:
        suporte = CmfMeasure(np.array([0.0]), np.array([alvo]))
    elif delta > 0:
        try:
            tau = _raiz_tau_adaptativa(lambda v: _residuo_tau_positivo(v, x0, alvo), tau_max)
        except BracketError:
            # tau além de TAU_MAX_LIMITE: b e^{-tau x} some em L2, resta a constante
            logger.warning(f"⚠️ tau > {TAU_MAX_LIMITE:.0e} para delta={delta:.6g}; usando o limite constante")
            suporte = CmfMeasure(np.array([0.0]), np.array([alvo]))
        else:
            a, b, _ = _sistema_positivo(tau, x0, alvo)
            suporte = CmfMeasure(np.array([0.0, tau]), np.array([a, b]))
    else:
        tau = _raiz_tau_adaptativa(lambda v: _residuo_tau_negativo(v, x0, alvo), tau_max)
        a, _ = _sistema_negativo(tau, x0, alvo)
        suporte = CmfMeasure(np.array([tau]), np.array([a]))
    if np.any(suporte.a <= 0):
        raise ConvergenciaError("solução fechada com peso não positivo",
                                diagnostico={"tau": tau, "pesos": suporte.a.tolist()})
    return _montar_estado(f0, x0, delta, suporte, XQuadrature(f0), max(tau_max, 1.5 * tau),
                          cert_grid, method="closed_form")

# ===============================================
# INCLINAÇÕES E+ / E-
# ===============================================

def e_slopes(x0: float, h: float = SLOPE_DELTA) -> Tuple[float, float]:
    """
    (E+, E-) = lim |delta|/||f* - f0||_2 pela solução fechada com Richardson
    em h e h/2. No lado negativo o passo é relativo a e^-x0.
    """
    def inclinacao(delta):
        return abs(delta) / exp_closed_form(x0, delta).residual_l2

    def richardson(passo):
        return 2.0 * inclinacao(passo / 2.0) - inclinacao(passo)

    return richardson(h), richardson(-h * math.exp(-x0))


def e_slopes_linearized(x0: float) -> Tuple[float, float]:
    """
    E = sqrt(v^T G^-1 v) do problema linearizado: span{1, e^-x, x e^-x} para
    delta > 0 e span{e^-x, x e^-x} para delta < 0, v = valores da base em x0.
    """
    e1, e2 = math.exp(-1.0), math.exp(-2.0)
    G = np.array([
        [1.0, 1.0 - e1, 1.0 - 2.0 * e1],
        [1.0 - e1, (1.0 - e2) / 2.0, (1.0 - 3.0 * e2) / 4.0],
        [1.0 - 2.0 * e1, (1.0 - 3.0 * e2) / 4.0, (1.0 - 5.0 * e2) / 4.0],
    ])
    ex0 = math.exp(-x0)
    v = np.array([1.0, ex0, x0 * ex0])
    e_mais = math.sqrt(v @ np.linalg.solve(G, v))
    e_menos = math.sqrt(v[1:] @ np.linalg.solve(G[1:, 1:], v[1:]))
    return e_mais, e_menos

# ===============================================
# VARREDURA EM eps
# ===============================================

class SweepResult(NamedTuple):
    M_eps: float
    m_eps: float
    states: Tuple[CapriniState, CapriniState]


def _resolver(f0: Cmf, x0: float, delta: float, cert_tol: float = CERT_TOL,
              cert_grid: int = CERT_GRID) -> CapriniState:
    if isinstance(f0, CmfMeasure) and f0.is_unit_exponential:
        return exp_closed_form(x0, delta, cert_grid=cert_grid)
    return solve_local(f0, x0, delta, cert_tol=cert_tol, cert_grid=cert_grid)


def _delta_para_eps(f0: Cmf, x0: float, eps: float, perto: float, longe: float,
                    **opcoes) -> CapriniState:
    """brentq em delta entre `perto` (resíduo < eps) e `longe` (resíduo > eps)"""
    estados = {}

    def fun(d):
        estados[d] = _resolver(f0, x0, d, **opcoes)
        return math.log(estados[d].residual_l2) - math.log(eps)

    d = optimize.brentq(fun, perto, longe, xtol=1e-300, rtol=1e-13, maxiter=200)
    return estados.get(d) or _resolver(f0, x0, d, **opcoes)


def sweep_epsilon(f0: Cmf, x0: float, eps: float, cert_tol: float = CERT_TOL,
                  cert_grid: int = CERT_GRID) -> SweepResult:
    """M_eps = f0(x0) + delta+ e m_eps = f0(x0) + delta- com ||f* - f0||_2 = eps"""
    opcoes = {"cert_tol": cert_tol, "cert_grid": cert_grid}
    if not eps > 0:
        raise DominioError(f"eps deve ser > 0 (atual: {eps})")
    valor0 = float(f0.value(x0))
    norma0 = f0.l2_norm()
    # lado negativo: resíduo limitado por ||f0||_2 quando delta -> -f0(x0)
    if eps >= norma0:
        raise InviavelError(f"eps={eps:.6g} acima do resíduo alcançável com delta < 0", supremo=norma0)

    # lado positivo: residuo cresce sem limite em delta
    perto, longe = eps, eps
    while _resolver(f0, x0, longe, **opcoes).residual_l2 <= eps:
        longe *= 2.0
    while _resolver(f0, x0, perto, **opcoes).residual_l2 >= eps:
        perto /= 2.0
    mais = _delta_para_eps(f0, x0, eps, perto, longe, **opcoes)

    longe = None
    for k in range(1, 61):
        d = -valor0 * (1.0 - 2.0 ** -k)
        if _resolver(f0, x0, d, **opcoes).residual_l2 > eps:
            longe = d
            break
    if longe is None:
        raise InviavelError(f"eps={eps:.6g} não alcançado com delta < 0", supremo=norma0)
    perto = -valor0 * 0.5
    while _resolver(f0, x0, perto, **opcoes).residual_l2 >= eps:
        perto /= 2.0
    menos = _delta_para_eps(f0, x0, eps, perto, longe, **opcoes)

    logger.info(f"✅ eps={eps:.3e}, x0={x0}: M={valor0 + mais.delta:.10g}, m={valor0 + menos.delta:.10g}")
    return SweepResult(valor0 + mais.delta, valor0 + menos.delta, (mais, menos))


def extremal_samples(f0: Cmf, states: Sequence[CapriniState], x_grid) -> pd.DataFrame:
    """Tabela x, f0, f_plus, f_minus para reproduzir o gráfico das extremais"""
    x = np.asarray(x_grid, dtype=float)
    mais, menos = states[0], states[1]
    return Formatters.tabela(pd.DataFrame({
        "x": x,
        "f0": _vetorizar(f0.value, x),
        "f_plus": np.asarray(mais.support.evaluate(x)),
        "f_minus": np.asarray(menos.support.evaluate(x)),
    }), ["x", "f0", "f_plus", "f_minus"])
