import sys

from sepcert.cli.main import main

sys.exit(main())
