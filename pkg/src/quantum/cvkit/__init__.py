from . import exceptions
from . import types

__all__ = (
    *exceptions.__all__,
    *types.__all__,
)

__version__ = '0.1.0'


def get_banner():
    return 'cvkit {0}'.format(__version__)
