import sys

from v1di4.cli import main

sys.exit(main())
