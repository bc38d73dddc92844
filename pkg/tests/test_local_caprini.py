# ===============================================
# TESTES: extrapola/local_caprini.py
# ===============================================

import math
import unittest

import numpy as np
from scipy import optimize

from extrapola.core.erros import DominioError, InviavelError
from extrapola.local_caprini import (BlackBoxCmf, CmfMeasure, certificate, certificate_trace,
                                     e_slopes, e_slopes_linearized, exp_closed_form,
                                     extremal_samples, gram_g, gram_g_linha, solve_local,
                                     sweep_epsilon, verify_certificate)

E_MAIS_1 = 2.67788263
E_MAIS_INF = 27.488747597
NORMA_EXP = (1.0 - math.exp(-2.0)) / 2.0


def e_menos_exato_1():
    e2 = math.e ** 2
    return 2.0 * math.sqrt((e2 - 1.0) / (e2 * e2 - 6.0 * e2 + 1.0))


def residuo_constante(c):
    """||c - e^-x||_2 em [0,1]"""
    return math.sqrt(c * c - 2.0 * c * (1.0 - math.exp(-1.0)) + NORMA_EXP)


class MedidaTest(unittest.TestCase):

    def test_gram_g(self):
        self.assertEqual(gram_g(0.0), 1.0)
        self.assertAlmostEqual(float(gram_g(2.0)), (1 - math.exp(-2.0)) / 2.0, places=15)
        self.assertAlmostEqual(float(gram_g_linha(0.0)), -0.5, places=15)
        s = 0.5
        esperado = (math.exp(-s) - (1 - math.exp(-s)) / s) / s
        self.assertAlmostEqual(float(gram_g_linha(s)), esperado, places=14)

    def test_atomos_repetidos(self):
        f = CmfMeasure.from_atoms([(2.0, 0.5), (0.0, 1.0), (2.0, 0.25)])
        self.assertEqual(f.atoms, [(0.0, 1.0), (2.0, 0.75)])

    def test_atomos_invalidos(self):
        with self.assertRaises(DominioError):
            CmfMeasure.from_atoms([])
        with self.assertRaises(DominioError):
            CmfMeasure.from_atoms([(-1.0, 1.0)])
        with self.assertRaises(DominioError):
            CmfMeasure.from_atoms([(1.0, 0.0)])

    def test_exponencial(self):
        f = CmfMeasure.exponential()
        self.assertTrue(f.is_unit_exponential)
        self.assertAlmostEqual(f.norm_sq, NORMA_EXP, places=15)
        self.assertAlmostEqual(f.evaluate(2.0), math.exp(-2.0), places=15)
        self.assertAlmostEqual(f.laplace(1.0), NORMA_EXP, places=15)

    def test_norma_estrela(self):
        f = CmfMeasure.from_atoms([(0.0, 1.0), (3.0, 2.0), (10.0, 0.5)])
        self.assertLessEqual(f.star_norm(), f.l2_norm())


class CertificadoTest(unittest.TestCase):

    def test_delta_zero(self):
        f0 = CmfMeasure.exponential()
        estado = solve_local(f0, 2.0, 0.0)
        self.assertEqual(estado.residual_l2, 0.0)
        self.assertEqual(estado.m, 0.0)

    def test_forma_fechada_certificada(self):
        estado = exp_closed_form(2.0, 1e-3)
        cert_min, nos_atomos, aprovado = verify_certificate(estado)
        self.assertTrue(aprovado, msg=f"cert_min={cert_min}, atomos={nos_atomos}")
        self.assertEqual(estado.support.t.size, 2)
        self.assertEqual(estado.support.t[0], 0.0)
        self.assertLess(estado.constraint_gap, 1e-12)

    def test_forma_fechada_negativa(self):
        estado = exp_closed_form(2.0, -1e-3)
        self.assertEqual(estado.support.t.size, 1)
        self.assertGreater(estado.support.t[0], 1.0)
        self.assertTrue(verify_certificate(estado)[2])

    def test_certificado_nulo_nos_atomos(self):
        estado = exp_closed_form(2.0, 1e-3)
        self.assertLess(np.max(np.abs(certificate(estado, estado.support.t))), 1e-8)

    def test_traco(self):
        estado = exp_closed_form(2.0, 1e-3)
        df = certificate_trace(estado, np.linspace(0.0, 10.0, 11))
        self.assertEqual(list(df.columns), ["t", "C", "C_hat"])
        self.assertEqual(len(df), 11)

    def test_delta_inviavel(self):
        with self.assertRaises(InviavelError):
            solve_local(CmfMeasure.exponential(), 2.0, -1.0)
        with self.assertRaises(InviavelError):
            exp_closed_form(2.0, -1.0)

    def test_tolerancia_do_certificado_e_repassada(self):
        estado = exp_closed_form(2.0, 1e-3)
        self.assertTrue(verify_certificate(estado)[2])
        self.assertFalse(verify_certificate(estado, tol=1e-300)[2])


class FormaFechadaDeltaGrandeTest(unittest.TestCase):
    """f0 = e^-x com f0(x0) + delta perto de 1 ou acima"""

    def test_acima_de_um_vira_constante(self):
        alvo = math.exp(-2.0) + 1.2
        estado = exp_closed_form(2.0, 1.2)
        self.assertEqual(estado.support.atoms, [(0.0, alvo)])
        self.assertAlmostEqual(estado.residual_l2, residuo_constante(alvo), places=10)
        self.assertTrue(verify_certificate(estado)[2])

    def test_delta_logo_abaixo_do_regime_constante(self):
        # f0(2) + 0.8 < 1: ainda abaixo do regime constante
        estado = exp_closed_form(2.0, 0.8)
        self.assertLess(estado.constraint_gap, 1e-10)
        self.assertLess(exp_closed_form(2.0, 0.6).residual_l2, estado.residual_l2)
        self.assertLess(estado.residual_l2, exp_closed_form(2.0, 1.2).residual_l2)


class SolverLocalTest(unittest.TestCase):

    def test_iterativo_confere_com_forma_fechada(self):
        f0 = CmfMeasure.exponential()
        for delta in (1e-3, -1e-3):
            with self.subTest(delta=delta):
                iterativo = solve_local(f0, 2.0, delta)
                fechado = exp_closed_form(2.0, delta)
                self.assertAlmostEqual(iterativo.residual_l2 / fechado.residual_l2, 1.0, delta=1e-6)
                self.assertTrue(verify_certificate(iterativo)[2])

    def test_caixa_preta(self):
        caixa = BlackBoxCmf(value=lambda x: np.exp(-np.asarray(x, dtype=float)),
                            laplace=lambda t: gram_g(np.asarray(t, dtype=float) + 1.0),
                            norm_sq=NORMA_EXP)
        estado = solve_local(caixa, 2.0, 1e-3)
        fechado = exp_closed_form(2.0, 1e-3)
        self.assertAlmostEqual(estado.residual_l2 / fechado.residual_l2, 1.0, delta=1e-6)

    def test_x0_invalido(self):
        with self.assertRaises(DominioError):
            solve_local(CmfMeasure.exponential(), 0.5, 1e-3)

    def test_historico_nao_cresce(self):
        caixa = BlackBoxCmf(value=lambda x: np.exp(-np.asarray(x, dtype=float)),
                            laplace=lambda t: gram_g(np.asarray(t, dtype=float) + 1.0),
                            norm_sq=NORMA_EXP)
        somas = CmfMeasure.from_atoms([(0.0, 1.0), (2.0, 0.5)])
        for f0 in (caixa, somas):
            with self.subTest(f0=type(f0).__name__):
                historico = solve_local(f0, 2.0, 1e-3).history
                self.assertGreaterEqual(len(historico), 1)
                for anterior, seguinte in zip(historico, historico[1:]):
                    self.assertLessEqual(seguinte, anterior * (1 + 1e-9))

    def test_malha_do_certificado_e_repassada(self):
        estado = solve_local(CmfMeasure.from_atoms([(0.0, 1.0), (2.0, 0.5)]), 2.0, 1e-3,
                             cert_grid=500, cert_tol=1e-6)
        self.assertTrue(verify_certificate(estado, n=500, tol=1e-6)[2])


class InclinacoesTest(unittest.TestCase):

    def test_x0_um(self):
        e_mais, e_menos = e_slopes(1.0)
        self.assertAlmostEqual(e_mais, E_MAIS_1, delta=1e-4)
        self.assertAlmostEqual(e_menos, e_menos_exato_1(), delta=1e-3)

    def test_linearizadas(self):
        for x0 in (1.0, 2.0):
            with self.subTest(x0=x0):
                exatas = e_slopes(x0)
                lineares = e_slopes_linearized(x0)
                for e, l in zip(exatas, lineares):
                    self.assertAlmostEqual(e / l, 1.0, delta=1e-4)

    def test_linearizada_em_um(self):
        e_mais, e_menos = e_slopes_linearized(1.0)
        self.assertAlmostEqual(e_mais, E_MAIS_1, delta=1e-6)
        self.assertAlmostEqual(e_menos, e_menos_exato_1(), delta=1e-6)

    def test_e_mais_em_x0_grande(self):
        self.assertAlmostEqual(e_slopes(50.0)[0] / E_MAIS_INF, 1.0, delta=0.01)

    def test_pico_de_e_menos(self):
        pico = optimize.minimize_scalar(lambda x: -e_slopes(x)[1], bounds=(1.0, 3.0),
                                        method="bounded", options={"xatol": 1e-4})
        self.assertAlmostEqual(pico.x / 1.269, 1.0, delta=0.01)
        self.assertAlmostEqual(-pico.fun / 1.566, 1.0, delta=0.01)

    def test_e_menos_escalado_cresce(self):
        escala = [math.exp(x) / x * e_slopes(x)[1] for x in np.linspace(1.0, 50.0, 8)]
        self.assertTrue(all(np.diff(escala) > 0), msg=str(escala))
        self.assertAlmostEqual(escala[-1] / 5.8, 1.0, delta=0.02)


class VarreduraTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.f0 = CmfMeasure.exponential()
        cls.resultado = sweep_epsilon(cls.f0, 2.0, 0.01)

    def test_envelope(self):
        self.assertGreater(self.resultado.M_eps, math.exp(-2.0))
        self.assertLess(self.resultado.m_eps, math.exp(-2.0))
        for estado in self.resultado.states:
            self.assertAlmostEqual(estado.residual_l2 / 0.01, 1.0, delta=1e-8)

    def test_amostras(self):
        df = extremal_samples(self.f0, self.resultado.states, np.linspace(0.0, 1.0, 5))
        self.assertEqual(list(df.columns), ["x", "f0", "f_plus", "f_minus"])
        self.assertAlmostEqual(df["f0"].iloc[0], 1.0, places=15)

    def test_eps_inviavel(self):
        with self.assertRaises(InviavelError):
            sweep_epsilon(self.f0, 2.0, 0.66)
        with self.assertRaises(DominioError):
            sweep_epsilon(self.f0, 2.0, 0.0)


class VarreduraEpsGrandeTest(unittest.TestCase):
    """eps perto de ||e^-x||_2 ~ 0.465: delta+ passa do regime de tau grande"""

    def verificar(self, eps):
        resultado = sweep_epsilon(CmfMeasure.exponential(), 2.0, eps)
        self.assertGreater(resultado.M_eps, math.exp(-2.0))
        self.assertLess(resultado.m_eps, math.exp(-2.0))
        self.assertGreater(resultado.m_eps, 0.0)
        for estado in resultado.states:
            self.assertAlmostEqual(estado.residual_l2 / eps, 1.0, delta=1e-8)
        return resultado

    def test_eps_tres_decimos(self):
        self.verificar(0.3)

    def test_eps_com_extremal_constante(self):
        # residuo_constante(1) ~ 0.41 < 0.45: M_eps é a constante com resíduo eps
        resultado = self.verificar(0.45)
        c1 = 1.0 - math.exp(-1.0)
        esperado = c1 + math.sqrt(c1 * c1 - NORMA_EXP + 0.45 ** 2)
        self.assertAlmostEqual(resultado.M_eps, esperado, delta=1e-8)


if __name__ == "__main__":
    unittest.main()
