# ===============================================
# ARQUIVO: extrapola/comandos/local.py
# Comando: envelope local de pior caso em torno de f0 com certificado
# ===============================================

import numpy as np

from ..core.utils import Formatters, Validators
from ..local_caprini import (CapriniState, CmfMeasure, certificate_trace, e_slopes,
                             e_slopes_linearized, exp_closed_form, extremal_samples,
                             solve_local, sweep_epsilon, verify_certificate)
from .base import (SAIDA_OK, BaseCommand, ComandoError, RunConfig, caminho_irmao,
                   opcoes_certificado)


def ler_f0(texto: str) -> CmfMeasure:
    """'exp' ou átomos 't1:a1,t2:a2'"""
    if texto.strip().lower() == "exp":
        return CmfMeasure.exponential()
    return CmfMeasure.from_atoms(Validators.validar_atomos(texto))


class Command(BaseCommand):
    help = "Problema local: f* extremal, certificado de otimalidade e M_eps/m_eps"
    nome = "local"
    grupos = ("certificado",)

    def add_arguments(self, parser):
        parser.add_argument("--f0", help="'exp' ou átomos t:a,... (padrão exp)")
        parser.add_argument("--x0", type=float, help="ponto de extrapolação (>= 1)")
        parser.add_argument("--eps", type=Validators.validar_lista, help="discrepância L2 alvo")
        parser.add_argument("--delta", type=float, help="perturbação em x0 (em vez de --eps)")
        parser.add_argument("--slopes", action="store_true", default=None,
                            help="inclinações E+/E- (apenas f0 = exp)")
        parser.add_argument("--trace", help="CSV do traço t, C, C_hat")
        parser.add_argument("--samples", help="CSV das extremais x, f0, f_plus, f_minus")

    def handle(self, config: RunConfig, **options) -> int:
        f0 = ler_f0(self.param(config, "f0", "exp"))
        x0 = config.x0

        if self.param(config, "slopes"):
            return self._slopes(config, f0, x0)

        delta = self.param(config, "delta")
        if delta is not None:
            estado = self._resolver(config, f0, x0, delta)
            relatorio = {"x0": x0, "f0": f0.atoms, "state": self._estado_json(config, estado)}
            self.emitir_json(config, relatorio)
            self._traco(config, estado, "trace")
            return SAIDA_OK

        if len(config.eps) != 1:
            raise ComandoError("informe --delta, --slopes ou um único --eps")
        eps = config.eps[0]
        resultado = sweep_epsilon(f0, x0, eps, **opcoes_certificado(config))
        mais, menos = resultado.states
        relatorio = {
            "x0": x0, "f0": f0.atoms, "eps": eps,
            "f0_x0": float(f0.value(x0)),
            "M_eps": resultado.M_eps, "m_eps": resultado.m_eps,
            "plus": self._estado_json(config, mais),
            "minus": self._estado_json(config, menos),
        }
        self.emitir_json(config, relatorio)
        self._traco(config, mais, "trace_plus")
        self._traco(config, menos, "trace_minus")

        amostras = self.param(config, "samples")
        if amostras:
            Formatters.csv(extremal_samples(f0, resultado.states, np.linspace(0.0, x0 + 1.0, 401)),
                           amostras)
        return SAIDA_OK

    def _resolver(self, config: RunConfig, f0: CmfMeasure, x0: float, delta: float) -> CapriniState:
        if f0.is_unit_exponential:
            return exp_closed_form(x0, delta, cert_grid=config.cert_grid)
        return solve_local(f0, x0, delta, **opcoes_certificado(config))

    def _slopes(self, config: RunConfig, f0: CmfMeasure, x0: float) -> int:
        if not f0.is_unit_exponential:
            raise ComandoError("--slopes só vale para f0 = exp")
        e_mais, e_menos = e_slopes(x0)
        lin_mais, lin_menos = e_slopes_linearized(x0)
        self.emitir_json(config, {
            "x0": x0, "E_plus": e_mais, "E_minus": e_menos,
            "E_plus_linearized": lin_mais, "E_minus_linearized": lin_menos,
        })
        return SAIDA_OK

    def _estado_json(self, config: RunConfig, estado: CapriniState) -> dict:
        cert_min, nos_atomos, aprovado = verify_certificate(estado, config.cert_grid, config.cert_tol)
        tol = config.cert_tol * estado.f0.norm_sq
        traco = certificate_trace(estado)
        violacoes = traco.loc[traco["C_hat"] < -tol, "t"].tolist()
        return {
            "delta": estado.delta,
            "method": estado.method,
            "atoms": estado.support.atoms,
            "m": estado.m,
            "residual_l2": estado.residual_l2,
            "cert_min": cert_min,
            "cert_at_atoms": nos_atomos,
            "certificate_passed": bool(aprovado),
            "certificate_violations": violacoes,
            "iterations": estado.iterations,
        }

    def _traco(self, config: RunConfig, estado: CapriniState, sufixo: str) -> None:
        destino = self.param(config, "trace")
        if destino and sufixo != "trace":
            destino = caminho_irmao(destino, sufixo.split("_")[-1])
        destino = destino or caminho_irmao(config.output, sufixo)
        if destino:
            Formatters.csv(certificate_trace(estado), destino)
