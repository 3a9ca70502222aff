from .core import *  # noqa: F401,F403
from .structure import *  # noqa: F401,F403
from .homological import *  # noqa: F401,F403
from .tensor import *  # noqa: F401,F403
from .sampling import *  # noqa: F401,F403
