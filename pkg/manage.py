#!/usr/bin/env python
import sys

if __name__ == '__main__':
    from extrapola.comandos import executar_linha_de_comando
    sys.exit(executar_linha_de_comando(sys.argv))
