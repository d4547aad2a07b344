"""Run the charvar CLI with python -m charvar."""

import sys

from .cli import main

sys.exit(main())
