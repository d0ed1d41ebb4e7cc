import sys

from makeev.cli import main

sys.exit(main())
