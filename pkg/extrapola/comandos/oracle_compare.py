# ===============================================
# ARQUIVO: extrapola/comandos/oracle_compare.py
# Comando: solvers principais contra os oráculos independentes
# ===============================================

import pandas as pd

from ..core.utils import Formatters, Validators
from ..local_caprini import CmfMeasure, exp_closed_form
from ..oracle import COLUNAS_COMPARACAO, compare_spectral_nystrom, dual_bound_scan, grid_local_solve
from ..phi_solver import match_veps, p_of_eps
from .base import SAIDA_OK, BaseCommand, RunConfig, opcoes_espectrais

X0_PADRAO = [1.0, 2.0, 5.0]
VEPS_PADRAO = [1e-2, 1e-3, 1e-4]
FATORES_P = [0.5, 0.8, 1.0, 1.25, 2.0]


class Command(BaseCommand):
    help = "Espectral x Nyström, cota dual x Delta* e malha densa x Caprini"
    nome = "oracle-compare"
    grupos = ("espectral", "nystrom")

    def add_arguments(self, parser):
        parser.add_argument("--x0-list", dest="x0_list", type=Validators.validar_lista,
                            help="lista de x0 (padrão 1,2,5)")
        parser.add_argument("--veps", type=Validators.validar_lista,
                            help="lista de veps (padrão 1e-2,1e-3,1e-4)")
        parser.add_argument("--dual-eps", dest="dual_eps", type=float,
                            help="eps da varredura da cota dual")
        parser.add_argument("--dual-solver", dest="dual_solver", choices=["nystrom", "spectral"],
                            help="solver de Q na cota dual (padrão nystrom)")
        parser.add_argument("--local-delta", dest="local_delta", type=Validators.validar_lista,
                            help="deltas do problema local com f0 = exp")

    def handle(self, config: RunConfig, **options) -> int:
        x0_lista = self.param(config, "x0_list", X0_PADRAO)
        tabelas = [compare_spectral_nystrom(x0_lista, config.veps or VEPS_PADRAO,
                                            n=config.nystrom_nodes, workers=config.workers,
                                            opcoes=opcoes_espectrais(config))]

        eps_dual = self.param(config, "dual_eps")
        if eps_dual is not None:
            tabelas.append(self._dual(config, x0_lista, eps_dual))

        deltas = self.param(config, "local_delta")
        if deltas:
            tabelas.append(self._local(x0_lista, deltas))

        df = Formatters.tabela(pd.concat(tabelas, ignore_index=True), COLUNAS_COMPARACAO)
        self.emitir(config, df)
        return SAIDA_OK

    def _dual(self, config: RunConfig, x0_lista, eps: float) -> pd.DataFrame:
        solver = self.param(config, "dual_solver", "nystrom")
        linhas = []
        for x0 in x0_lista:
            sol = match_veps(x0, eps, **opcoes_espectrais(config))
            p_otimo = p_of_eps(sol)
            p_scan = [p_otimo * f for f in FATORES_P if p_otimo * f > 1.0]
            varredura = dual_bound_scan(x0, eps, p_scan, solver=solver, n=config.nystrom_nodes,
                                        opcoes=opcoes_espectrais(config))
            for p, bound in zip(varredura["p"], varredura["bound"]):
                linhas.append({"method": f"dual_bound_{solver}",
                               "parameter": f"x0={x0:g};eps={eps:g};p={p:.10g}",
                               "value": bound, "reference": sol.delta_star,
                               "relative_gap": (bound - sol.delta_star) / sol.delta_star})
        return Formatters.tabela(linhas, COLUNAS_COMPARACAO)

    def _local(self, x0_lista, deltas) -> pd.DataFrame:
        f0 = CmfMeasure.exponential()
        linhas = []
        for x0 in x0_lista:
            for delta in deltas:
                malha = grid_local_solve(f0, x0, delta)
                referencia = exp_closed_form(x0, delta).residual_l2
                linhas.append({"method": "grid_local",
                               "parameter": f"x0={x0:g};delta={delta:g};residual_l2",
                               "value": malha.residual_l2, "reference": referencia,
                               "relative_gap": (malha.residual_l2 - referencia) / referencia})
        return Formatters.tabela(linhas, COLUNAS_COMPARACAO)
