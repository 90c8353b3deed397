"""Exact invariant cohomology of almost-complex structures on Lie algebras."""

from .scalars import *  # noqa: F401,F403
from .exterior import *  # noqa: F401,F403
from .lie import *  # noqa: F401,F403
from .complexstruct import *  # noqa: F401,F403
from .cohomology import *  # noqa: F401,F403
from .hermitian import *  # noqa: F401,F403
from .deform import *  # noqa: F401,F403
from .zoo import *  # noqa: F401,F403

__version__ = "0.1.0"
