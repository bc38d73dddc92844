# ===============================================
# TESTES: extrapola/special_fn.py
# ===============================================

import cmath
import math
import unittest

import numpy as np

from extrapola.core.config import MU_SWITCH
from extrapola.core.erros import DominioError
from extrapola.special_fn import (alpha, asymptotic_params, beta_exponent, c_star, eigenvalue_nu,
                                  eigfun_sample, eigfun_u, eigfun_u_real, eigfun_u_table,
                                  gamma_star, hardy_reverse_constant, hp_constant, r_factor)


class AlphaTest(unittest.TestCase):

    def test_valor_em_dois(self):
        self.assertAlmostEqual(alpha(2).real, math.pi / 3, places=12)
        self.assertAlmostEqual(alpha(2).imag, 0.0, places=12)

    def test_limite_no_infinito(self):
        self.assertAlmostEqual(alpha(1e6).real, math.pi / 2, delta=1e-5)

    def test_relacao_definidora(self):
        for z in (2.0, 3 + 1j, 0.5 + 2j, cmath.sqrt(1j)):
            self.assertAlmostEqual(abs(cmath.cos(alpha(z)) * z - 1.0), 0.0, places=12)

    def test_parte_real_no_primeiro_quadrante(self):
        a = alpha(cmath.sqrt(1j))
        self.assertTrue(math.pi / 4 < a.real < math.pi / 2)
        for z in (1.5, 0.2 + 0.1j, 10 - 3j, 0.01 + 5j):
            self.assertTrue(0 < alpha(z).real < math.pi / 2)

    def test_fora_do_dominio(self):
        with self.assertRaises(DominioError):
            alpha(0.5)
        with self.assertRaises(DominioError):
            alpha(-1 + 1j)


class FatoresTest(unittest.TestCase):

    def test_r_factor(self):
        self.assertAlmostEqual(r_factor(2).real, 2 ** -0.5 * 3 ** -0.25, places=12)
        self.assertAlmostEqual(r_factor(math.sqrt(2)).real, 2 ** -0.25, places=12)
        self.assertGreater(abs(r_factor(1 + 1e-8)), 1e3)
        with self.assertRaises(DominioError):
            r_factor(1)

    def test_eigenvalue_nu(self):
        self.assertAlmostEqual(eigenvalue_nu(0), math.pi, places=14)
        self.assertAlmostEqual(eigenvalue_nu(1), math.pi / math.cosh(math.pi), places=14)
        self.assertLess(eigenvalue_nu(10), 1e-12)
        self.assertGreater(eigenvalue_nu(300), 0.0)
        with self.assertRaises(DominioError):
            eigenvalue_nu(-1)

    def test_beta_em_zero_um(self):
        beta = beta_exponent(2.0, 3.0 + 1j)
        self.assertTrue(0 < beta.real < 1)
        self.assertAlmostEqual(beta_exponent(2.0, 2.0).real, 2.0 / 3.0, places=12)

    def test_gamma_star(self):
        self.assertEqual(gamma_star(1), 1.0)
        self.assertAlmostEqual(gamma_star(2), 1.0 / 3.0, places=14)
        self.assertAlmostEqual(gamma_star(1e4) / (2 / (math.pi * 1e4)), 1.0, delta=1e-8)

    def test_c_star(self):
        self.assertAlmostEqual(c_star(2), 0.5842, delta=5e-4)
        self.assertGreater(c_star(1 + 1e-6), 10)
        with self.assertRaises(DominioError):
            c_star(1)

    def test_asymptotic_params(self):
        p = asymptotic_params(2.0, 3.0)
        self.assertAlmostEqual(p.gamma_star, 1.0 / 3.0)
        self.assertIsNotNone(p.c_star)
        self.assertIsNone(asymptotic_params(1.0, 3.0).c_star)

    def test_constantes_hp(self):
        self.assertEqual(hp_constant(1), math.inf)
        self.assertAlmostEqual(hp_constant(2), math.sqrt(2 / (math.pi * math.cos(math.pi / 4))
                                                         + math.pi * 2 * math.cos(math.pi / 4) / 6))
        self.assertAlmostEqual(hardy_reverse_constant(2), 2 * math.sqrt(math.pi))
        with self.assertRaises(DominioError):
            hp_constant(0.5)


class AutofuncoesTest(unittest.TestCase):

    def test_normalizacao_em_um(self):
        for mu in (0.0, 0.3, 7.0, 45.0):
            self.assertEqual(eigfun_u(1.0, mu), 1.0)

    def test_real_no_segmento(self):
        for x in (0.1, 0.5, 0.9):
            valor = eigfun_u(x, 2.0)
            self.assertEqual(valor.imag, 0.0)
            self.assertAlmostEqual(eigfun_u_real(x, 2.0), valor.real)

    def test_euler_confere_com_hipergeometrica(self):
        for z, mu in ((2.0, 1.0), (0.5, 2.0), (1.5 + 0.5j, 3.0)):
            exato = eigfun_u(z, mu, method="hypergeometric")
            euler = eigfun_u(z, mu, method="euler_integral")
            self.assertLess(abs(euler / exato - 1.0), 1e-8)

    def test_assintotica_em_mu_grande(self):
        exato = eigfun_u(2.0, 30.0, method="hypergeometric")
        assint = eigfun_u(2.0, 30.0, method="asymptotic")
        self.assertLess(abs(exato / assint - 1.0), 0.05)

    def test_ramos_concordam_na_faixa_de_transicao(self):
        # |exata/assintótica - 1| <= 2/mu_switch em [mu_switch - 5, mu_switch + 5]
        for z in (2.0, 3.0, 2.0 + 1.0j):
            for mu in np.linspace(MU_SWITCH - 5.0, MU_SWITCH + 5.0, 5):
                with self.subTest(z=z, mu=mu):
                    exato = eigfun_u(z, float(mu), method="hypergeometric")
                    assint = eigfun_u(z, float(mu), method="asymptotic")
                    self.assertLessEqual(abs(exato / assint - 1.0), 2.0 / MU_SWITCH)

    def test_modo_auto(self):
        self.assertEqual(eigfun_sample(2.0, 30.0).method, "asymptotic")
        self.assertEqual(eigfun_sample(2.0, 5.0).method, "hypergeometric")
        self.assertEqual(eigfun_sample(0.5, 30.0).method, "hypergeometric")

    def test_assintotica_nao_vale_no_segmento(self):
        with self.assertRaises(DominioError):
            eigfun_u(0.5, 30.0, method="asymptotic")

    def test_tabela_em_log(self):
        nos = [0.0, 1.0, 5.0]
        logs = eigfun_u_table(2.0, nos)
        for m, lv in zip(nos, logs):
            self.assertAlmostEqual(math.exp(lv) / eigfun_u_real(2.0, m), 1.0, places=10)

    def test_entradas_invalidas(self):
        with self.assertRaises(DominioError):
            eigfun_u(0.5, -1.0)
        with self.assertRaises(DominioError):
            eigfun_u(-2.0, 1.0)
        with self.assertRaises(DominioError):
            eigfun_u(2.0, 1.0, method="gauss")


if __name__ == "__main__":
    unittest.main()
