import sys

from mpiso.cli import main

sys.exit(main())
