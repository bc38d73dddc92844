# ===============================================
# ARQUIVO: extrapola/comandos/verify.py
# Comando: bateria de aceitação com relatório ✅/❌
# ===============================================

import math
from datetime import datetime
from typing import Callable, Dict, List, Tuple

import numpy as np
from scipy import optimize

from ..local_caprini import CmfMeasure, e_slopes, exp_closed_form, solve_local, verify_certificate
from ..oracle import (compare_spectral_nystrom, dual_bound_scan, grid_local_solve,
                      left_unbounded_demo, nystrom_solve)
from ..operator_k import UnitGridFunction, eigen_residual
from ..phi_solver import (delta_star_asymptotic, delta_star_at, hp_norm, match_veps, p_of_eps,
                          powerlaw_fit, solve_psi)
from ..special_fn import c_star, eigfun_u, gamma_star, hardy_reverse_constant, hp_constant
from .base import (SAIDA_OK, SAIDA_VERIFICACAO, BaseCommand, ComandoError, RunConfig,
                   opcoes_certificado, opcoes_espectrais)

E_MAIS_1 = 2.67788263
E_MAIS_INF = 27.488747597


def e_menos_1_exato() -> float:
    e2 = math.e ** 2
    return 2.0 * math.sqrt((e2 - 1.0) / (e2 * e2 - 6.0 * e2 + 1.0))


class VerificadorAceitacao:
    """Executa as verificações nomeadas e guarda detalhes de cada uma"""

    def __init__(self, config: RunConfig, escrever: Callable[[str], None]):
        self.config = config
        self.escrever = escrever
        self.opcoes = opcoes_espectrais(config)
        self.resultados: Dict[str, bool] = {}
        self.detalhes: Dict[str, dict] = {}
        self.falhas_criticas: List[str] = []

    def verificacoes(self) -> List[Tuple[str, Callable[[], Tuple[bool, dict]]]]:
        return [
            ("powerlaw", self.teste_powerlaw),
            ("asymptotic_constant", self.teste_constante_assintotica),
            ("x0_one", self.teste_x0_um),
            ("pythagoras", self.teste_pitagoras),
            ("eigen_relation", self.teste_relacao_autovalor),
            ("cross_solver", self.teste_cross_solver),
            ("dual_bound", self.teste_cota_dual),
            ("exp_slopes", self.teste_inclinacoes),
            ("certificate", self.teste_certificado),
            ("oracle_gap", self.teste_oraculo_local),
            ("norm_bridge", self.teste_ponte_normas),
            ("left_unbounded", self.teste_esquerda),
        ]

    def executar_todos(self, apenas: List[str] = None) -> bool:
        self.escrever("🧪 VERIFICAÇÃO DE ACEITAÇÃO")
        self.escrever("=" * 60)
        disponiveis = self.verificacoes()
        nomes = [n for n, _ in disponiveis]
        desconhecidos = [n for n in apenas or [] if n not in nomes]
        if desconhecidos:
            raise ComandoError(f"verificações desconhecidas: {desconhecidos} (opções: {nomes})")

        for nome, teste in disponiveis:
            if apenas and nome not in apenas:
                continue
            self.escrever(f"\n🔍 {nome}")
            try:
                passou, detalhe = teste()
            except Exception as e:
                passou, detalhe = False, {"erro": f"{type(e).__name__}: {e}"}
            self.resultados[nome] = bool(passou)
            self.detalhes[nome] = detalhe
            self.escrever(f"   {'✅ PASSOU' if passou else '❌ FALHOU'}  {detalhe}")
            if not passou:
                self.falhas_criticas.append(nome)
        return self.gerar_relatorio_final()

    def gerar_relatorio_final(self) -> bool:
        total = len(self.resultados)
        sucessos = sum(self.resultados.values())
        self.escrever("\n" + "=" * 60)
        self.escrever("📊 RELATÓRIO FINAL")
        self.escrever("=" * 60)
        self.escrever(f"   ✅ Aprovadas: {sucessos}")
        self.escrever(f"   ❌ Reprovadas: {total - sucessos}")
        for nome, resultado in self.resultados.items():
            self.escrever(f"   {nome}: {'✅ PASSOU' if resultado else '❌ FALHOU'}")
        if self.falhas_criticas:
            self.escrever("\n🚨 FALHAS:")
            for falha in self.falhas_criticas:
                self.escrever(f"   ❌ {falha}")
        return sucessos == total

    def relatorio(self) -> dict:
        return {
            "timestamp": datetime.now().isoformat(),
            "resultados": self.resultados,
            "detalhes": self.detalhes,
            "falhas_criticas": self.falhas_criticas,
            "status_geral": "APROVADO" if not self.falhas_criticas else "REPROVADO",
        }

    # ===============================================
    # PROBLEMA GLOBAL
    # ===============================================

    def teste_powerlaw(self):
        detalhe = {}
        for x0, a, b in ((2.0, -9, -5), (5.0, -8, -4)):
            ajuste = powerlaw_fit(x0, np.logspace(a, b, 5), workers=self.config.workers,
                                  opcoes=self.opcoes)
            detalhe[f"x0={x0:g}"] = {"slope": ajuste.slope, "gamma_star": gamma_star(x0)}
        passou = all(abs(d["slope"] - d["gamma_star"]) <= 0.01 for d in detalhe.values())
        return passou, detalhe

    def teste_constante_assintotica(self):
        razao = delta_star_at(2.0, 1e-8, **self.opcoes) / (c_star(2.0) * 1e-8 ** (1.0 / 3.0))
        return 0.95 <= razao <= 1.05, {"ratio": razao}

    def teste_x0_um(self):
        # a razão simples, com |ln eps|, só tende a 1 em escala logarítmica;
        # o critério usa |ln veps_hat| e exige a simples se aproximando de 1
        corrigidas, simples = {}, {}
        for eps in (1e-4, 1e-6, 1e-8):
            sol = match_veps(1.0, eps, **self.opcoes)
            chave = f"{eps:g}"
            corrigidas[chave] = sol.delta_star / delta_star_asymptotic(1.0, eps, veps=sol.veps)
            simples[chave] = sol.delta_star / delta_star_asymptotic(1.0, eps)
        corrigida = corrigidas["1e-08"]
        sequencia = list(simples.values())
        passou = 0.90 <= corrigida <= 1.10 and all(
            abs(s - 1) > abs(t - 1) for s, t in zip(sequencia, sequencia[1:]))
        return passou, {"ratio_log_veps_hat": corrigidas, "ratio_plain": simples,
                        "ratio_plain_within_10pct": abs(simples["1e-08"] - 1.0) <= 0.10}

    def teste_pitagoras(self):
        piores = {}
        for x0 in (1.0, 1.5, 2.0, 5.0):
            for veps in (1e-2, 1e-4, 1e-6):
                sol = solve_psi(x0, veps, **self.opcoes)
                piores[f"spectral x0={x0:g} veps={veps:g}"] = sol.pythagoras_residual
        for x0 in (1.0, 2.0, 5.0):
            sol = nystrom_solve(x0, 1e-4, self.config.nystrom_nodes)
            piores[f"nystrom x0={x0:g} eps2=1e-4"] = sol.pythagoras_residual
        pior = max(piores.values())
        return pior <= self.config.pythagoras_tol, {"max_residual": pior}

    def teste_relacao_autovalor(self):
        malha = UnitGridFunction.constant(n=200)
        residuos = {mu: eigen_residual(mu, grid=malha) for mu in (0.5, 1.0, 2.0, 5.0)}
        rng = np.random.default_rng(self.config.seed)
        normalizacao = [eigfun_u(1.0, float(mu)) for mu in rng.uniform(0.0, 40.0, 20)]
        passou = max(residuos.values()) <= 1e-6 and all(v == 1.0 for v in normalizacao)
        return passou, {"max_residual": max(residuos.values())}

    def teste_cross_solver(self):
        df = compare_spectral_nystrom([1.0, 2.0, 5.0], [1e-2, 1e-3, 1e-4],
                                      n=self.config.nystrom_nodes, workers=self.config.workers,
                                      opcoes=self.opcoes)
        relevantes = df[df["parameter"].str.endswith(("psi_at_x0", "norm_l2"))]
        pior = float(relevantes["relative_gap"].max())
        return pior <= 1e-4, {"max_relative_gap": pior}

    def teste_cota_dual(self):
        sol = solve_psi(2.0, 1e-2, **self.opcoes)
        p_otimo = p_of_eps(sol)
        p_scan = sorted([p_otimo] + [p_otimo * f for f in (0.6, 0.8, 1.25, 1.6, 2.5)])
        varredura = dual_bound_scan(2.0, sol.eps, p_scan, n=self.config.nystrom_nodes)
        no_otimo = float(varredura.loc[varredura["p"] == p_otimo, "bound"].iloc[0])
        gap_otimo = abs(no_otimo / sol.delta_star - 1.0)
        acima = bool((varredura["bound"] >= sol.delta_star * (1 - 1e-6)).all())
        return acima and gap_otimo <= 1e-6, {"gap_at_optimum": gap_otimo, "p_opt": p_otimo}

    # ===============================================
    # PROBLEMA LOCAL
    # ===============================================

    def teste_inclinacoes(self):
        e_mais, e_menos = e_slopes(1.0)
        mais_inf, _ = e_slopes(50.0)
        escala = [math.exp(x) / x * e_slopes(x)[1] for x in np.linspace(1.0, 50.0, 15)]
        pico = optimize.minimize_scalar(lambda x: -e_slopes(x)[1], bounds=(1.0, 3.0),
                                        method="bounded", options={"xatol": 1e-4})
        detalhe = {"E_plus(1)": e_mais, "E_minus(1)": e_menos, "E_plus(50)": mais_inf,
                   "scaled_E_minus(50)": escala[-1], "argmax_E_minus": pico.x,
                   "max_E_minus": -pico.fun}
        passou = (abs(e_mais - E_MAIS_1) <= 1e-4
                  and abs(e_menos - e_menos_1_exato()) <= 1e-3
                  and abs(mais_inf / E_MAIS_INF - 1.0) <= 0.01
                  and all(np.diff(escala) > 0)
                  and abs(escala[-1] / 5.8 - 1.0) <= 0.02
                  and abs(pico.x / 1.269 - 1.0) <= 0.01
                  and abs(-pico.fun / 1.566 - 1.0) <= 0.01)
        return passou, detalhe

    def teste_certificado(self):
        f0 = CmfMeasure.exponential()
        detalhe, passou = {}, True
        for delta in (1e-3, -1e-3):
            iterativo = solve_local(f0, 2.0, delta, **opcoes_certificado(self.config))
            fechado = exp_closed_form(2.0, delta, cert_grid=self.config.cert_grid)
            cert_min, nos_atomos, aprovado = verify_certificate(iterativo, self.config.cert_grid,
                                                                self.config.cert_tol)
            mesmo_suporte = iterativo.support.t.size == fechado.support.t.size
            distancia = (float(max(np.max(np.abs(iterativo.support.t - fechado.support.t)),
                                   np.max(np.abs(iterativo.support.a - fechado.support.a))))
                         if mesmo_suporte else math.inf)
            detalhe[f"delta={delta:g}"] = {"cert_min": cert_min, "cert_at_atoms": nos_atomos,
                                           "distance_to_closed_form": distancia}
            passou = passou and aprovado and distancia <= 1e-6
        return passou, detalhe

    def teste_oraculo_local(self):
        f0 = CmfMeasure.exponential()
        gaps = {}
        for delta in (1e-3, -1e-3):
            referencia = exp_closed_form(2.0, delta).residual_l2
            gaps[f"delta={delta:g}"] = grid_local_solve(f0, 2.0, delta).residual_l2 / referencia - 1.0
        passou = all(-1e-9 <= g <= 1e-3 for g in gaps.values())
        return passou, gaps

    # ===============================================
    # NORMAS E EXTRAPOLAÇÃO À ESQUERDA
    # ===============================================

    def teste_ponte_normas(self):
        rng = np.random.default_rng(self.config.seed)
        pior_direta, pior_reversa = 0.0, 0.0
        for _ in range(50):
            k = int(rng.integers(1, 4))
            f = CmfMeasure.from_atoms(list(zip(rng.uniform(0.0, 10.0, k), rng.uniform(0.1, 1.0, k))))
            l2 = f.l2_norm()
            for p in (1.1, 2.0, 4.0):
                hp = hp_norm(f, p)
                pior_direta = max(pior_direta, hp / (hp_constant(p) * l2))
                pior_reversa = max(pior_reversa, l2 / (hardy_reverse_constant(p) * hp))
        return pior_direta <= 1.0 and pior_reversa <= 1.0, {
            "max_hp_over_Cp_l2": pior_direta, "max_l2_over_reverse_hp": pior_reversa}

    def teste_esquerda(self):
        eps = 0.01
        cotas = [0.1, 1.0, 10.0]
        df = left_unbounded_demo(eps, [m * m / (2.0 * eps * eps) for m in cotas])
        passou = bool((df["l2_discrepancy"] <= eps).all()) and all(
            g >= m * (1 - 1e-12) for g, m in zip(df["gap"], cotas))
        return passou, {"gaps": df["gap"].tolist()}


class Command(BaseCommand):
    help = "Executa a bateria de aceitação; saída 0 só se tudo passar"
    nome = "verify"
    grupos = ("espectral", "nystrom", "certificado")

    def add_arguments(self, parser):
        parser.add_argument("--only", help="verificações separadas por vírgula (ex.: pythagoras)")
        parser.add_argument("--json", action="store_true", default=None,
                            help="relatório JSON na saída (ou em --output)")

    def handle(self, config: RunConfig, **options) -> int:
        apenas = [n.strip() for n in (self.param(config, "only") or "").split(",") if n.strip()]
        como_json = bool(self.param(config, "json"))
        # com --json o texto vai para stderr e o relatório para stdout
        verificador = VerificadorAceitacao(config, self.erro if como_json else self.escrever)
        tudo_ok = verificador.executar_todos(apenas)
        if como_json or config.output:
            self.emitir_json(config, verificador.relatorio())
        return SAIDA_OK if tudo_ok else SAIDA_VERIFICACAO
