import sys

from capillum.cli import main

sys.exit(main())
