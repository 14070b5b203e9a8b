import sys

from mcplan.bench.cli import main

sys.exit(main())
