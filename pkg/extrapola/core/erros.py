# ===============================================
# ARQUIVO: extrapola/core/erros.py
# Exceções do pacote
# ===============================================

from typing import Any, Optional, Sequence, Tuple


def _reconstruir(cls, args, atributos):
    erro = cls.__new__(cls)
    Exception.__init__(erro, *args)
    erro.__dict__.update(atributos)
    return erro


class ExtrapolaError(Exception):
    """Erro base do pacote"""

    def __reduce__(self):
        # as subclasses formatam a mensagem no construtor; o Pool precisa
        # reconstruir sem chamar __init__ de novo
        return _reconstruir, (type(self), self.args, dict(self.__dict__))


class DominioError(ExtrapolaError, ValueError):
    """Argumento fora do domínio da função"""


class QuadraturaError(ExtrapolaError):
    """Quadratura não convergiu; `estimativa` guarda o erro alcançado"""

    def __init__(self, mensagem: str, estimativa: float):
        super().__init__(f"{mensagem} (erro estimado: {estimativa:.3e})")
        self.estimativa = estimativa


class CaudaError(ExtrapolaError):
    """Truncamento em mu insuficiente"""

    def __init__(self, mensagem: str, massa_cauda: float):
        super().__init__(f"{mensagem} (massa de cauda estimada: {massa_cauda:.3e})")
        self.massa_cauda = massa_cauda


class BracketError(ExtrapolaError):
    """Raiz não isolada no intervalo varrido"""

    def __init__(self, mensagem: str, intervalo: Tuple[float, float],
                 varredura: Optional[Sequence[Tuple[float, float]]] = None):
        super().__init__(f"{mensagem} (intervalo: [{intervalo[0]:.6g}, {intervalo[1]:.6g}])")
        self.intervalo = intervalo
        self.varredura = list(varredura or [])


class ConvergenciaError(ExtrapolaError):
    """Iteração esgotou o limite; `estado` guarda o último iterado"""

    def __init__(self, mensagem: str, diagnostico: Optional[dict] = None, estado: Any = None):
        super().__init__(mensagem)
        self.diagnostico = diagnostico or {}
        self.estado = estado


class InviavelError(ExtrapolaError, ValueError):
    """Restrição impossível de satisfazer (delta ou eps fora do alcance)"""

    def __init__(self, mensagem: str, supremo: Optional[float] = None):
        if supremo is not None:
            mensagem = f"{mensagem} (supremo alcançável: {supremo:.6g})"
        super().__init__(mensagem)
        self.supremo = supremo


class MalCondicionadoError(ExtrapolaError):
    """Sistema linear mal condicionado para a malha escolhida"""

    def __init__(self, mensagem: str, condicao: float):
        super().__init__(f"{mensagem} (condição estimada: {condicao:.3e})")
        self.condicao = condicao
