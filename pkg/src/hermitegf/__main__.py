import sys

from hermitegf.cli import main

sys.exit(main())
