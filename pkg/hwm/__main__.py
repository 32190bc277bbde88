"""Entry point for ``python -m hwm``."""

import sys

from hwm.cli import main

sys.exit(main())
