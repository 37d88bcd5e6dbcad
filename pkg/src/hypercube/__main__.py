import sys

from hypercube.cli import main

sys.exit(main())
