# ===============================================
# ARQUIVO: extrapola/__init__.py
# Cotas de pior caso para extrapolação de funções completamente monótonas
# ===============================================

__version__ = "1.0.0"
