# ===============================================
# ARQUIVO: extrapola/core/__init__.py
# ===============================================
