import sys

from mitplan.cli import main

sys.exit(main())
