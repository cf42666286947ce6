import os
from logging import basicConfig

LOGLEVEL = os.environ.get('FRACTAL_ZETA_LOGLEVEL', os.environ.get('LOGLEVEL', 'INFO')).upper()
basicConfig(level=LOGLEVEL, format='%(levelname)s:%(name)s: %(message)s')


if __name__ == '__main__':
    # Logging must be configured before the package modules create their loggers.

    from .cli import main

    main()
