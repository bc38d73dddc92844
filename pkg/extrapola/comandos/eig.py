# ===============================================
# ARQUIVO: extrapola/comandos/eig.py
# Comando: tabela das autofunções u(x;mu) e do resíduo da relação K u = nu u
# ===============================================

from ..core.utils import Formatters, Validators
from ..operator_k import UnitGridFunction, eigen_residual
from ..special_fn import METODOS_U, eigenvalue_nu, eigfun_u
from .base import SAIDA_OK, BaseCommand, RunConfig

MU_PADRAO = [0.5, 1.0, 2.0, 5.0]
X_PADRAO = [0.1, 0.25, 0.5, 0.75, 1.0]


class Command(BaseCommand):
    help = "Autofunções u(x;mu), autovalores nu(mu) e resíduo ||Ku - nu u||/||u||"
    nome = "eig"
    grupos = ("malha",)

    def add_arguments(self, parser):
        parser.add_argument("--mu", type=Validators.validar_lista, help="lista de mu >= 0")
        parser.add_argument("--x", type=Validators.validar_lista, help="pontos reais > 0")
        parser.add_argument("--method", choices=METODOS_U, help="avaliação de u (padrão auto)")

    def handle(self, config: RunConfig, **options) -> int:
        mus = self.param(config, "mu", MU_PADRAO)
        pontos = self.param(config, "x", X_PADRAO)
        metodo = self.param(config, "method", "auto")
        malha = UnitGridFunction.constant(n=config.grid_nodes)

        linhas = []
        for mu in mus:
            residuo = eigen_residual(mu, grid=malha)
            nu = eigenvalue_nu(mu)
            for x in pontos:
                linhas.append({"x": x, "mu": mu,
                               "value": eigfun_u(x, mu, metodo, config.mu_switch).real,
                               "nu": nu, "eigen_residual": residuo})
        self.emitir(config, Formatters.tabela(linhas, ["x", "mu", "value", "nu", "eigen_residual"]))
        return SAIDA_OK
