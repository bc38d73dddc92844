# ===============================================
# TESTES: extrapola/phi_solver.py
# ===============================================

import math
import unittest

import numpy as np

from extrapola.core.config import TAIL_TOL
from extrapola.core.erros import CaudaError, ConvergenciaError, DominioError
from extrapola.local_caprini import CmfMeasure
from extrapola.phi_solver import (COLUNAS_CURVA, bridge_E0_E1, delta_star_asymptotic,
                                  delta_star_at, delta_star_curve, hp_norm, match_veps,
                                  mu_max_rule, p_of_eps, phi_extremal, powerlaw_fit,
                                  psi_asymptotic, psi_value, q_of_eps, solve_psi)
from extrapola.special_fn import c_star, gamma_star, hardy_reverse_constant, hp_constant


class SolucaoPsiTest(unittest.TestCase):

    def test_identidade_de_pitagoras(self):
        for x0 in (1.0, 1.5, 2.0, 5.0):
            for veps in (1e-2, 1e-4, 1e-6):
                with self.subTest(x0=x0, veps=veps):
                    sol = solve_psi(x0, veps)
                    soma = sol.norm_l2 ** 2 + veps ** 2 * sol.norm_hardy ** 2
                    self.assertLessEqual(abs(soma - sol.psi_at_x0) / sol.psi_at_x0, 1e-8)
                    self.assertLessEqual(sol.pythagoras_residual, 1e-8)

    def test_quantidades_derivadas(self):
        sol = solve_psi(2.0, 1e-3)
        self.assertAlmostEqual(sol.eps, sol.norm_l2 / sol.norm_hardy, places=14)
        self.assertAlmostEqual(sol.delta_star, sol.psi_at_x0 / sol.norm_hardy, places=14)
        self.assertGreater(p_of_eps(sol), 1.0)
        p = p_of_eps(sol)
        self.assertAlmostEqual(q_of_eps(sol), p / (p - 1.0), places=12)
        self.assertLessEqual(sol.norm_l2, math.sqrt(math.pi) * sol.norm_hardy)

    def test_psi_em_x0(self):
        sol = solve_psi(2.0, 1e-3)
        self.assertAlmostEqual(psi_value(sol, 2.0) / sol.psi_at_x0, 1.0, places=12)

    def test_psi_real_no_intervalo(self):
        sol = solve_psi(2.0, 1e-2)
        valor = psi_value(sol, 0.5)
        self.assertIsInstance(valor, float)
        self.assertTrue(math.isfinite(valor))

    def test_entradas_invalidas(self):
        with self.assertRaises(DominioError):
            solve_psi(0.5, 1e-3)
        with self.assertRaises(DominioError):
            solve_psi(2.0, 0.0)
        sol = solve_psi(2.0, 1e-2)
        with self.assertRaises(DominioError):
            psi_value(sol, -1.0)

    def test_cauda_insuficiente(self):
        with self.assertRaises(CaudaError):
            solve_psi(2.0, 1e-2, mu_max=1.0)

    def test_corte_padrao_estende_ate_a_tolerancia(self):
        casos = [(x0, veps) for x0 in (1.5, 2.0, 5.0) for veps in (1.0, 1e-4, 1e-16)]
        casos += [(1.0, 1e2), (1.0, 1.0)]
        for x0, veps in casos:
            with self.subTest(x0=x0, veps=veps):
                sol = solve_psi(x0, veps)
                self.assertLessEqual(sol.tail_mass, TAIL_TOL)
                self.assertGreaterEqual(sol.mu_max, mu_max_rule(x0, veps) - 0.05)

    def test_tolerancia_de_cauda_e_repassada(self):
        frouxa = solve_psi(2.0, 1e-4, tail_tol=1e-3)
        padrao = solve_psi(2.0, 1e-4)
        self.assertLessEqual(frouxa.mu_max, padrao.mu_max)
        self.assertLessEqual(frouxa.tail_mass, 1e-3)

    def test_tolerancia_de_pitagoras_e_repassada(self):
        with self.assertRaises(ConvergenciaError):
            solve_psi(2.0, 1e-2, pythagoras_tol=1e-300)

    def test_delta_star_no_maximo_um(self):
        for x0 in (1.0, 2.0, 5.0):
            for veps in (1e2, 1.0, 1e-2, 1e-4, 1e-8):
                with self.subTest(x0=x0, veps=veps):
                    sol = solve_psi(x0, veps)
                    self.assertLessEqual(sol.delta_star, 1.0)
                    self.assertGreater(sol.delta_star, 0.0)


class InversaoTest(unittest.TestCase):

    def test_match_veps(self):
        sol = match_veps(2.0, 1e-4)
        self.assertAlmostEqual(sol.eps / 1e-4, 1.0, delta=1e-8)

    def test_eps_fora_do_dominio(self):
        for eps in (0.6, 0.0):
            with self.assertRaises(DominioError):
                match_veps(2.0, eps)

    def test_opcoes_chegam_a_cada_solve(self):
        with self.assertRaises(CaudaError):
            match_veps(2.0, 1e-4, mu_max=1.0)

    def test_constante_assintotica_em_x0_dois(self):
        razao = delta_star_at(2.0, 1e-8) / (c_star(2.0) * 1e-8 ** (1.0 / 3.0))
        self.assertGreaterEqual(razao, 0.95)
        self.assertLessEqual(razao, 1.05)

    def test_x0_um_com_log_de_veps_hat(self):
        simples = []
        for eps in (1e-4, 1e-6, 1e-8):
            sol = match_veps(1.0, eps)
            simples.append(sol.delta_star / delta_star_asymptotic(1.0, eps))
            if eps == 1e-8:
                corrigida = sol.delta_star / delta_star_asymptotic(1.0, eps, veps=sol.veps)
                self.assertAlmostEqual(corrigida, 1.0, delta=0.10)
        # a razão simples converge só em escala log, mas se aproxima de 1
        for anterior, seguinte in zip(simples, simples[1:]):
            self.assertLess(abs(seguinte - 1.0), abs(anterior - 1.0))

    def test_razao_eps_veps(self):
        # eps/veps -> sqrt(asin(1/x0)/acos(1/x0)), 1/sqrt(2) em x0 = 2
        sol = solve_psi(2.0, 1e-8)
        self.assertAlmostEqual(sol.eps / 1e-8, 1.0 / math.sqrt(2.0), delta=0.02 / math.sqrt(2.0))

    def test_curva(self):
        df = delta_star_curve(2.0, [1e-3, 1e-5, 1e-4], workers=1)
        self.assertEqual(list(df.columns), COLUNAS_CURVA)
        self.assertTrue(np.all(np.diff(df["eps"].to_numpy()) > 0))
        self.assertTrue(np.all(np.diff(df["delta_star"].to_numpy()) > 0))


class LeiDePotenciaTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.ajuste2 = powerlaw_fit(2.0, np.logspace(-9, -5, 5), workers=1)
        cls.ajuste5 = powerlaw_fit(5.0, np.logspace(-8, -4, 5), workers=1)

    def test_inclinacao_x0_dois(self):
        self.assertAlmostEqual(self.ajuste2.slope, 1.0 / 3.0, delta=0.01)

    def test_inclinacao_x0_cinco(self):
        self.assertAlmostEqual(self.ajuste5.slope, gamma_star(5.0), delta=0.01)

    def test_tabela(self):
        self.assertEqual(len(self.ajuste2.table), 5)
        self.assertEqual(float(self.ajuste2), self.ajuste2.slope)

    def test_poucas_decadas(self):
        with self.assertRaises(DominioError):
            powerlaw_fit(2.0, [1e-6, 1e-4])


class ExtremalTest(unittest.TestCase):

    def test_normas(self):
        sol = solve_psi(2.0, 1e-3)
        phi = phi_extremal(sol)
        self.assertAlmostEqual(phi.norm_hardy, 1.0, places=8)
        self.assertAlmostEqual(phi.value_at_x0, sol.delta_star, delta=1e-8 * sol.delta_star)
        self.assertAlmostEqual(phi(2.0), sol.delta_star, delta=1e-8 * sol.delta_star)


class AssintoticaTest(unittest.TestCase):

    def erro_relativo(self, x0, z, veps):
        sol = solve_psi(x0, veps)
        exato = psi_value(sol, z)
        return abs(psi_asymptotic(x0, z, veps) / exato - 1.0)

    def test_psi_assintotica_x0_maior_que_um(self):
        erro_fino = self.erro_relativo(2.0, 3.0, 1e-8)
        self.assertLess(erro_fino, 0.1)
        self.assertLess(erro_fino, self.erro_relativo(2.0, 3.0, 1e-4))

    def test_psi_assintotica_x0_um(self):
        erro_fino = self.erro_relativo(1.0, 2.0, 1e-8)
        self.assertLess(erro_fino, 0.25)
        self.assertLess(erro_fino, self.erro_relativo(1.0, 2.0, 1e-4))

    def test_ponte_E0_E1(self):
        sol = solve_psi(2.0, 1e-8)
        e0, e1 = bridge_E0_E1(2.0, 1e-8)
        self.assertAlmostEqual(e1 / sol.eps, 1.0, delta=0.02)
        self.assertAlmostEqual(e0 / sol.delta_star, 1.0, delta=0.1)

    def test_constante_assintotica(self):
        self.assertGreater(delta_star_asymptotic(2.0, 1e-6), 0.0)
        ref = math.sqrt(2.0) / math.pi * 1e-6 * abs(math.log(1e-6))
        self.assertAlmostEqual(delta_star_asymptotic(1.0, 1e-6), ref, places=15)


class NormaHpTest(unittest.TestCase):

    def test_constante(self):
        # ||1||_Hp^2 = 1 / (2 sin(pi/(2p)))
        for p in (1.0, 2.0, 3.0):
            with self.subTest(p=p):
                esperado = math.sqrt(0.5 / math.sin(math.pi / (2.0 * p)))
                self.assertAlmostEqual(hp_norm(lambda z: 1.0, p), esperado, places=6)

    def test_ponte_de_normas_em_somas_aleatorias(self):
        rng = np.random.default_rng(20240607)
        for _ in range(20):
            k = int(rng.integers(1, 4))
            f = CmfMeasure.from_atoms(list(zip(rng.uniform(0.0, 10.0, k), rng.uniform(0.1, 1.0, k))))
            l2 = f.l2_norm()
            for p in (1.1, 2.0, 4.0):
                hp = hp_norm(f, p)
                with self.subTest(atomos=f.atoms, p=p):
                    self.assertLessEqual(hp, hp_constant(p) * l2 * (1 + 1e-9))
                    self.assertLessEqual(l2, hardy_reverse_constant(p) * hp * (1 + 1e-9))

    def test_p_invalido(self):
        with self.assertRaises(DominioError):
            hp_norm(lambda z: 1.0, 0.5)

    def test_objeto_com_evaluate(self):
        class Avaliador:
            def evaluate(self, z):
                return 1.0 / (z + 2.0)

        self.assertLess(hp_norm(Avaliador(), 2.0), hp_norm(lambda z: 1.0, 2.0))


if __name__ == "__main__":
    unittest.main()
