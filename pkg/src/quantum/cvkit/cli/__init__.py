from . import main  # noqa
from . import optics  # noqa
from . import gaussian  # noqa
from . import stellar  # noqa
from . import heterodyne  # noqa
from . import verify  # noqa
from . import progmeas  # noqa
from . import wcf  # noqa
from . import reproduce  # noqa
