import sys

from cgnn.cli.main import main

sys.exit(main())
