# ===============================================
# ARQUIVO: extrapola/comandos/demo_left.py
# Comando: extrapolação à esquerda do intervalo não tem limite
# ===============================================

from ..core.utils import Validators
from ..oracle import left_unbounded_demo
from .base import SAIDA_OK, BaseCommand, RunConfig

K_PADRAO = [0.5, 5.0, 50.0, 500.0, 5000.0, 50000.0]


class Command(BaseCommand):
    help = "Família f + eps sqrt(2K) e^{-Kx}: discrepância <= eps e diferença sem limite em x <= 0"
    nome = "demo-left"

    def add_arguments(self, parser):
        parser.add_argument("--eps", type=Validators.validar_lista, help="discrepância L2 (padrão 0.01)")
        parser.add_argument("--K", dest="K", type=Validators.validar_lista, help="lista de K > 0")
        parser.add_argument("--c", type=float, help="ponto de avaliação c <= 0 (padrão 0)")

    def handle(self, config: RunConfig, **options) -> int:
        eps = config.eps[0] if config.eps else 0.01
        df = left_unbounded_demo(eps, self.param(config, "K", K_PADRAO), self.param(config, "c", 0.0))
        self.emitir(config, df, extras={"eps": eps})
        return SAIDA_OK
