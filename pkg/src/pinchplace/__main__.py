"""Allow ``python -m pinchplace``."""

import sys

from .cli import main

sys.exit(main())
