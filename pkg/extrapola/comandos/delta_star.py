# ===============================================
# ARQUIVO: extrapola/comandos/delta_star.py
# Comando: tabela de Delta*(eps) em eps escolhidos ou em veps diretos
# ===============================================

from ..core.utils import Formatters, Validators
from ..phi_solver import COLUNAS_CURVA, delta_star_asymptotic, delta_star_curve, solve_psi
from .base import SAIDA_OK, BaseCommand, ComandoError, RunConfig, opcoes_espectrais


class Command(BaseCommand):
    help = "Delta*(eps) exato com a assintótica ao lado, um eps (ou veps) por linha"
    nome = "delta-star"
    grupos = ("espectral",)

    def add_arguments(self, parser):
        parser.add_argument("--x0", type=float, help="ponto de extrapolação (>= 1)")
        parser.add_argument("--eps", type=Validators.validar_lista, help="lista 1e-6,1e-4,...")
        parser.add_argument("--eps-decades", dest="eps_decades", help="faixa a:b[:n] de eps")
        parser.add_argument("--veps", type=Validators.validar_lista,
                            help="resolve direto em veps, sem a bissecção em eps")

    def handle(self, config: RunConfig, **options) -> int:
        if config.veps:
            df = self._por_veps(config)
        else:
            eps = list(config.eps)
            if config.eps_decades:
                eps += Validators.validar_faixa(config.eps_decades)
            if not eps:
                raise ComandoError("informe --eps, --eps-decades ou --veps")
            df = delta_star_curve(config.x0, eps, workers=config.workers,
                                  opcoes=opcoes_espectrais(config))
        self.emitir(config, df, extras={"x0": config.x0})
        return SAIDA_OK

    def _por_veps(self, config: RunConfig):
        linhas = []
        for veps in sorted(config.veps):
            sol = solve_psi(config.x0, veps, **opcoes_espectrais(config))
            assint = delta_star_asymptotic(config.x0, sol.eps)
            linhas.append({"eps": sol.eps, "veps": veps, "delta_star": sol.delta_star,
                           "asymptotic_value": assint, "ratio": sol.delta_star / assint})
        return Formatters.tabela(linhas, COLUNAS_CURVA)
