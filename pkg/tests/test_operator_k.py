# ===============================================
# TESTES: extrapola/operator_k.py
# ===============================================

import math
import unittest

import numpy as np

from extrapola.core.erros import DominioError
from extrapola.operator_k import (MuQuadrature, UnitGridFunction, UTransform, apply_K, apply_Lambda,
                                  diffop_L_residual, eigen_residual, gram_K, l2_norm,
                                  simpson_rule, u_forward, u_inverse, unit_quadrature)
from extrapola.special_fn import eigenvalue_nu, eigfun_u_real

# f(x) = sum c_k/(s_k + x): transformada exata sum c_k nu(mu) u(s_k;mu)
STIELTJES = ((1.0, 2.0), (0.5, 3.0))


def stieltjes(x):
    return sum(c / (s + np.asarray(x)) for c, s in STIELTJES)


def stieltjes_transformada(mu_nodes):
    return np.array([sum(c * eigenvalue_nu(m) * eigfun_u_real(s, m) for c, s in STIELTJES)
                     for m in mu_nodes])


class QuadraturaTest(unittest.TestCase):

    def test_pesos_somam_um(self):
        for familia in ("legendre", "log-legendre"):
            nos, pesos = unit_quadrature(200, familia, 40.0)
            self.assertAlmostEqual(pesos.sum(), 1.0, delta=1e-12)
            self.assertTrue(np.all(np.diff(nos) > 0))
            self.assertTrue(np.all((nos > 0) & (nos < 1)))

    def test_familia_desconhecida(self):
        with self.assertRaises(DominioError):
            unit_quadrature(10, "chebyshev")

    def test_simpson(self):
        nos, pesos = simpson_rule(1.0, 0.3)
        self.assertEqual(len(nos) % 2, 1)
        self.assertGreaterEqual(nos[-1], 1.0)
        self.assertAlmostEqual(float(np.sum(pesos * nos ** 3)), nos[-1] ** 4 / 4, places=12)

    def test_grid_function(self):
        f = UnitGridFunction.constant(2.0, n=20)
        g = UnitGridFunction.from_callable(lambda x: x, n=20)
        self.assertTrue(np.allclose((f + g).values, 2.0 + g.nodes))
        self.assertTrue(np.allclose((3 * g).values, 3 * g.nodes))
        with self.assertRaises(DominioError):
            f.with_values(np.ones(3))


class OperadoresTest(unittest.TestCase):

    def setUp(self):
        self.um = UnitGridFunction.constant(1.0)

    def test_K_constante(self):
        self.assertAlmostEqual(apply_K(self.um, 1.0), math.log(2.0), delta=1e-10)
        self.assertAlmostEqual(apply_K(self.um, 3.0), math.log(4.0 / 3.0), delta=1e-10)

    def test_K_complexo_e_vetorizado(self):
        valores = apply_K(self.um, np.array([1.0, 3.0]))
        self.assertEqual(valores.shape, (2,))
        z = 1.0 + 1.0j
        self.assertAlmostEqual(abs(apply_K(self.um, z) - np.log((z + 1) / z)), 0.0, delta=1e-10)
        with self.assertRaises(DominioError):
            apply_K(self.um, -1.0)

    def test_Lambda(self):
        self.assertAlmostEqual(apply_Lambda(self.um, 0.0), 1.0, places=12)
        self.assertAlmostEqual(apply_Lambda(self.um, 2.0), (1 - math.exp(-2)) / 2, places=12)
        f = UnitGridFunction.from_callable(lambda x: np.exp(-x))
        self.assertAlmostEqual(apply_Lambda(f, 1.0), (1 - math.exp(-2)) / 2, places=12)
        with self.assertRaises(DominioError):
            apply_Lambda(self.um, -1.0)

    def test_gram_simetrica(self):
        f = UnitGridFunction.from_callable(lambda x: np.exp(-x))
        g = UnitGridFunction.from_callable(lambda x: 1 + x * x)
        self.assertAlmostEqual(gram_K(f, g), gram_K(g, f), places=12)
        self.assertGreater(gram_K(f, f), 0.0)

    def test_l2_norm(self):
        f = UnitGridFunction.from_callable(lambda x: np.exp(-x))
        self.assertAlmostEqual(l2_norm(f) ** 2, (1 - math.exp(-2)) / 2, places=12)

    def test_relacao_de_autovalor(self):
        for mu in (0.5, 1.0):
            self.assertLess(eigen_residual(mu), 1e-6)


class TransformadaTest(unittest.TestCase):

    def test_transformada_nula(self):
        zero = UnitGridFunction.constant(0.0, n=40, family="log-legendre", span=30.0)
        tf = u_forward(zero, MuQuadrature.build(2.0, 0.5))
        self.assertTrue(np.all(tf.coefficients == 0.0))
        self.assertEqual(u_inverse(tf, 0.5), 0.0)

    def test_direta_confere_com_forma_fechada(self):
        f = UnitGridFunction.from_callable(stieltjes, n=200, family="log-legendre", span=30.0)
        grade = MuQuadrature.build(2.0, 0.5)
        tf = u_forward(f, grade)
        exato = stieltjes_transformada(grade.mu_nodes)
        self.assertLess(np.max(np.abs(tf.coefficients / exato - 1.0)), 1e-5)

    def test_plancherel(self):
        grade = MuQuadrature.build(12.0, 0.05)
        tf = UTransform(grade, np.array([eigenvalue_nu(m) * eigfun_u_real(2.0, m)
                                         for m in grade.mu_nodes]))
        self.assertAlmostEqual(tf.plancherel(), 1.0 / 6.0, delta=1e-5)

    def test_ida_e_volta(self):
        grade = MuQuadrature.build(12.0, 0.05)
        tf = UTransform(grade, stieltjes_transformada(grade.mu_nodes))
        x = np.array([0.2, 0.5, 0.9])
        self.assertLess(np.max(np.abs(u_inverse(tf, x) - stieltjes(x))), 1e-4)

    def test_inversa_em_um(self):
        grade = MuQuadrature.build(12.0, 0.05)
        tf = UTransform(grade, stieltjes_transformada(grade.mu_nodes))
        direto = float(np.sum(grade.weights * grade.spectral_weight * tf.coefficients))
        self.assertAlmostEqual(u_inverse(tf, 1.0), direto, places=10)

    def test_inversa_fora_do_intervalo(self):
        tf = UTransform(MuQuadrature.build(2.0, 0.5), np.zeros(5))
        with self.assertRaises(DominioError):
            u_inverse(tf, 1.5)


class OperadorDiferencialTest(unittest.TestCase):

    def test_residuo_mu_um(self):
        self.assertLess(diffop_L_residual(1.0, [0.3, 0.5, 0.7]), 1e-5)

    def test_residuo_mu_zero(self):
        self.assertLess(diffop_L_residual(0.0, [0.3, 0.6]), 1e-5)

    def test_residuo_mu_cinco(self):
        self.assertLess(diffop_L_residual(5.0, [0.3, 0.5, 0.7]), 1e-4)

    def test_escala_por_ponto_perto_de_zero(self):
        # muitos pontos: algum cai perto de um zero de u e usa o piso da escala
        pontos = np.linspace(0.05, 0.95, 37)
        self.assertLess(diffop_L_residual(5.0, pontos), 1e-4)

    def test_pontos_na_borda(self):
        with self.assertRaises(DominioError):
            diffop_L_residual(1.0, [1.0 - 1e-5])


if __name__ == "__main__":
    unittest.main()
