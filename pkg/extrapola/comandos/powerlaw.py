# ===============================================
# ARQUIVO: extrapola/comandos/powerlaw.py
# Comando: ajuste da lei de potência de Delta*(eps)
# ===============================================

from ..core.utils import Validators
from ..phi_solver import powerlaw_fit
from ..special_fn import gamma_star
from .base import SAIDA_OK, BaseCommand, RunConfig, opcoes_espectrais

FAIXA_PADRAO = "1e-9:1e-5"


class Command(BaseCommand):
    help = "Curva Delta*(eps) com inclinação ajustada contra gamma*(x0)"
    nome = "powerlaw"
    grupos = ("espectral",)

    def add_arguments(self, parser):
        parser.add_argument("--x0", type=float, help="ponto de extrapolação (>= 1)")
        parser.add_argument("--eps-decades", dest="eps_decades",
                            help=f"faixa a:b[:n] de eps (padrão {FAIXA_PADRAO})")

    def handle(self, config: RunConfig, **options) -> int:
        eps = Validators.validar_faixa(config.eps_decades or FAIXA_PADRAO)
        ajuste = powerlaw_fit(config.x0, eps, workers=config.workers,
                              opcoes=opcoes_espectrais(config))
        gamma = gamma_star(config.x0)

        self.emitir(config, ajuste.table, extras={
            "x0": config.x0, "slope": ajuste.slope, "gamma_star": gamma,
        })
        self.erro(f"📈 x0={config.x0:g}: inclinação ajustada {ajuste.slope:.6f} "
                  f"contra gamma*={gamma:.6f} (diferença {ajuste.slope - gamma:+.2e})")
        return SAIDA_OK
